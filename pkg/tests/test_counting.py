import math

import numpy as np
import pytest

from qfbias.arith import euler_phi, kronecker
from qfbias.counting import (
    CountSeries,
    FieldSplitting,
    a_coefficient,
    d_functions,
    density_check,
    kronecker_kernel_subgroup,
    log_integral,
    negative_bias_fraction,
    norm_residue_subgroup,
    prime_ideal_count,
    splitting_type,
)
from qfbias.errors import StabilizationWarning
from qfbias.primes import CongruenceClass, sieve_range

from conftest import trial_division_primes

GAUSS = FieldSplitting(-1)
DELTAS = [-1, -2, -3, -7, -11]


class TestFieldSplitting:
    def test_rejects_positive(self):
        with pytest.raises(ValueError):
            FieldSplitting(1)

    def test_rejects_square_factor(self):
        with pytest.raises(ValueError):
            FieldSplitting(-4)

    def test_field_discriminants(self):
        assert GAUSS.field_discriminant == -4
        assert FieldSplitting(-2).field_discriminant == -8
        assert FieldSplitting(-3).field_discriminant == -3
        assert FieldSplitting(-7).field_discriminant == -7

    def test_examples(self):
        assert splitting_type(GAUSS, 5) == "split"
        assert splitting_type(GAUSS, 2) == "ramified"
        assert splitting_type(GAUSS, 3) == "inert"

    @pytest.mark.parametrize("delta", DELTAS)
    def test_split_iff_discriminant_is_square_mod_p(self, delta):
        fs = FieldSplitting(delta)
        d = fs.field_discriminant
        for p in trial_division_primes(3, 200):
            kind = splitting_type(fs, p)
            if d % p == 0:
                assert kind == "ramified"
                continue
            has_root = any(r * r % p == d % p for r in range(p))
            assert (kind == "split") == has_root


class TestDFunctions:
    def test_hand_prefixes(self):
        d1, d2 = d_functions(20)
        assert d2.evaluate(6) == -1
        assert d2.evaluate(14) == 0
        assert d1.evaluate(18) == -1

    def test_steps_are_unit_sized_and_disjoint(self):
        d1, d2 = d_functions(10_000)
        for series in (d1, d2):
            vals = np.asarray(series.values[:-1])  # final entry is the endpoint
            assert np.all(np.abs(np.diff(vals)) == 1)
        assert set(d1.x_grid[:-1]).isdisjoint(d2.x_grid[:-1])

    def test_every_qualifying_prime_is_an_event(self):
        d1, d2 = d_functions(2000)
        primes = sieve_range(2, 1999).tolist()
        assert d1.x_grid[:-1] == [p for p in primes if p % 8 == 1]
        assert d2.x_grid[:-1] == [p for p in primes if p % 8 == 5]

    def test_decomposition_matches_brute_force(self):
        # independent check of the odd/even split: enumerate a^2 + 4b^2 = p
        d1, d2 = d_functions(500)
        for p in trial_division_primes(2, 500):
            if p % 8 not in (1, 5):
                continue
            sols = [
                (a, b)
                for a in range(1, math.isqrt(p) + 1)
                for b in range(1, math.isqrt(p) + 1)
                if a * a + 4 * b * b == p
            ]
            assert len(sols) == 1
            a, b = sols[0]
            series = d1 if p % 8 == 1 else d2
            step = series.value_at(p) - series.evaluate(p)
            assert step == (1 if a > 2 * b else -1)

    def test_value_at_vs_evaluate(self):
        d1, _ = d_functions(100)
        p = d1.x_grid[0]  # 17, the first prime = 1 mod 8 with a pair
        assert d1.evaluate(p) == 0
        assert d1.value_at(p) == d1.values[0]


class TestBiasFraction:
    def test_all_negative(self):
        series = CountSeries([2, 3, 5], [-1, -2, -1])
        assert negative_bias_fraction(series) == (1.0, 1.0)

    def test_alternating(self):
        series = CountSeries([1, 2, 3, 4], [1, -1, 1, -1])
        frac = negative_bias_fraction(series)
        assert frac.negative == 0.5 and frac.nonpositive == 0.5

    def test_zeros_count_only_as_nonpositive(self):
        series = CountSeries([1, 2], [0, 1])
        frac = negative_bias_fraction(series)
        assert frac.negative == 0.0 and frac.nonpositive == 0.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            negative_bias_fraction(CountSeries([], []))


class TestPrimeIdealCount:
    def test_example_x10(self):
        assert prime_ideal_count(GAUSS, 10) == 4

    def test_example_with_class(self):
        assert prime_ideal_count(GAUSS, 10, CongruenceClass(1, 4)) == 3

    def test_no_norms_below_two(self):
        assert prime_ideal_count(GAUSS, 1) == 0

    def test_brute_force_cross_check(self):
        # enumerate ideal norms directly from splitting data
        for delta in DELTAS:
            fs = FieldSplitting(delta)
            x = 500
            norms = []
            for p in trial_division_primes(2, x):
                kind = splitting_type(fs, p)
                if kind == "split":
                    norms += [p, p]
                elif kind == "ramified":
                    norms.append(p)
            for p in trial_division_primes(2, math.isqrt(x)):
                if splitting_type(fs, p) == "inert":
                    norms.append(p * p)
            assert prime_ideal_count(fs, x) == len(norms)
            cls = CongruenceClass(1, 4)
            assert prime_ideal_count(fs, x, cls) == sum(
                1 for n in norms if n % 4 == 1
            )

    def test_class_filter_additivity(self):
        modulus = 8
        x = 10_000
        total = prime_ideal_count(GAUSS, x)
        by_class = sum(
            prime_ideal_count(GAUSS, x, CongruenceClass(m, modulus))
            for m in range(modulus)
            if math.gcd(m, modulus) == 1
        )
        shared = 1  # the single ramified ideal above 2 has norm 2, gcd(2, 8) > 1
        assert by_class == total - shared


class TestNormResidueSubgroup:
    def test_gauss_mod_eight(self):
        sub = norm_residue_subgroup(GAUSS, 8)
        assert sub.subgroup == (1, 5)
        assert sub.stabilized
        assert sub.index == 2

    def test_trivial_modulus(self):
        sub = norm_residue_subgroup(GAUSS, 1)
        assert sub.subgroup == (0,) and sub.index == 1

    def test_eisenstein_mod_three(self):
        sub = norm_residue_subgroup(FieldSplitting(-3), 3)
        assert sub.subgroup == (1,)
        assert sub.index == 2

    def test_small_budget_warns(self):
        with pytest.warns(StabilizationWarning):
            norm_residue_subgroup(GAUSS, 8, prime_budget=20)

    @pytest.mark.parametrize("delta", DELTAS)
    def test_scan_matches_closed_form(self, delta):
        fs = FieldSplitting(delta)
        for modulus in range(1, 51):
            sub = norm_residue_subgroup(fs, modulus)
            assert sub.stabilized
            assert sub.subgroup == kronecker_kernel_subgroup(fs, modulus)

    @pytest.mark.parametrize("delta", DELTAS)
    def test_contains_squares_and_small_index(self, delta):
        fs = FieldSplitting(delta)
        for modulus in range(2, 51):
            sub = set(norm_residue_subgroup(fs, modulus).subgroup)
            squares = {
                r * r % modulus
                for r in range(modulus)
                if math.gcd(r, modulus) == 1
            }
            assert squares <= sub
            assert euler_phi(modulus) % len(sub) == 0
            assert euler_phi(modulus) // len(sub) in (1, 2)


class TestACoefficient:
    def test_gauss_mod_eight_values(self):
        assert a_coefficient(GAUSS, CongruenceClass(1, 8)) == 2
        assert a_coefficient(GAUSS, CongruenceClass(5, 8)) == 2
        assert a_coefficient(GAUSS, CongruenceClass(3, 8)) == 0
        assert a_coefficient(GAUSS, CongruenceClass(7, 8)) == 0

    def test_trivial_modulus(self):
        for delta in DELTAS:
            assert a_coefficient(FieldSplitting(delta), CongruenceClass.trivial()) == 1

    @pytest.mark.parametrize("delta", DELTAS)
    def test_character_sum_identity_small(self, delta):
        fs = FieldSplitting(delta)
        for modulus in range(1, 51):
            sub = norm_residue_subgroup(fs, modulus)
            total = sum(
                a_coefficient(fs, CongruenceClass(m, modulus), subgroup=sub)
                for m in range(modulus)
                if math.gcd(m, modulus) == 1
            ) if modulus > 1 else a_coefficient(fs, CongruenceClass.trivial(), subgroup=sub)
            assert total == euler_phi(modulus)

    def test_subgroup_field_mismatch_rejected(self):
        sub = norm_residue_subgroup(GAUSS, 8)
        with pytest.raises(ValueError):
            a_coefficient(FieldSplitting(-3), CongruenceClass(1, 8), subgroup=sub)


class TestDensity:
    def test_log_integral_against_substituted_trapezoid(self):
        # independent oracle: substitute t = e^u so the integrand is smooth on
        # a uniform grid, then composite trapezoid with Richardson
        def trap(x, n):
            us = np.linspace(math.log(2.0), math.log(float(x)), n + 1)
            return float(np.trapezoid(np.exp(us) / us, us))

        for x in (10**3, 10**6):
            coarse, fine = trap(x, 500_000), trap(x, 1_000_000)
            oracle = (4.0 * fine - coarse) / 3.0
            assert log_integral(x) == pytest.approx(oracle, abs=1e-4)

    def test_trivial_class_ratio_near_one(self):
        report = density_check(GAUSS, CongruenceClass.trivial(), 10**6)
        assert report.a_coeff == 1
        assert 0.95 <= report.ratio <= 1.05

    def test_zero_coefficient_class_is_exactly_empty(self):
        report = density_check(GAUSS, CongruenceClass(3, 8), 10**6)
        assert report.a_coeff == 0
        assert report.empirical == 0
        assert report.predicted == 0.0
        assert report.ratio is None

    def test_minimum_x_enforced(self):
        with pytest.raises(ValueError):
            density_check(GAUSS, CongruenceClass.trivial(), 50)
