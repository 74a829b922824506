"""Primitive positive-definite binary quadratic forms and prime representations.

Two routes find the pairs (x, y) with Q(x, y) = p:

  * a fast path for forms x^2 + c*y^2 built on a modular square root and the
    Euclidean remainder chain, and
  * an exhaustive enumeration oracle that walks x over the ellipse and solves
    the remaining quadratic in y exactly.

The canonical filter keeps pairs with x > y, x > 0, y >= 0; for x^2 + y^2
this picks the unique representation with x > y > 0 of each p = 1 (mod 4).
Pairs with negative y never count (documented convention; the source material
for the ordering never fixes signs).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import distinct_prime_factors
from .errors import OracleBoundError
from .primes import CongruenceClass, sieve_range

DEFAULT_ORACLE_BOUND = 10**6


@dataclass(frozen=True)
class QuadraticForm:
    """ax^2 + bxy + cy^2 with gcd(a,b,c) = 1, a > 0 and negative discriminant."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if math.gcd(math.gcd(self.a, self.b), self.c) != 1:
            raise ValueError(f"form ({self.a},{self.b},{self.c}) is not primitive")
        if self.disc >= 0 or self.a <= 0:
            raise ValueError(
                f"form ({self.a},{self.b},{self.c}) is not positive definite"
            )

    @property
    def disc(self) -> int:
        """Discriminant b^2 - 4ac (negative for valid forms)."""
        return self.b * self.b - 4 * self.a * self.c

    @property
    def D(self) -> int:
        """The positive quantity 4ac - b^2 = -disc."""
        return -self.disc

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"


def evaluate(form: QuadraticForm, x: int, y: int) -> int:
    """Exact value of the form at integer (x, y)."""
    return form.evaluate(x, y)


@dataclass(frozen=True)
class Representation:
    """A prime p together with integers (x, y) solving Q(x, y) = p."""

    p: int
    x: int
    y: int
    canonical: bool = True

    def pair(self) -> tuple[int, int]:
        return (self.x, self.y)


def sqrt_mod(n: int, p: int) -> int | None:
    """Smallest square root of n modulo an odd prime p, or None.

    Tonelli-Shanks with a deterministic nonresidue search, so results are
    reproducible. Returns 0 for n = 0 (mod p).
    """
    n %= p
    if n == 0:
        return 0
    if pow(n, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(n, (p + 1) // 4, p)
        return min(r, p - r)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    r = pow(n, (q + 1) // 2, p)
    t = pow(n, q, p)
    m = s
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def cornacchia(d: int, p: int) -> tuple[int, int] | None:
    """A solution (x, y) of x^2 + d*y^2 = p with x > 0, y > 0, or None.

    Classical remainder-chain method: starting from the root r of -d (mod p)
    lying in (p/2, p), descend a = p, b = r by Euclidean remainders until the
    remainder drops to sqrt(p), then test the candidate. Deterministic.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if p == 2:
        return (1, 1) if d == 1 else None
    if math.gcd(d, p) != 1:
        raise ValueError(f"cornacchia requires gcd(d, p) = 1, got d={d}, p={p}")
    t = sqrt_mod((-d) % p, p)
    if t is None:
        return None
    r = p - t if t < p - t else t
    a, b = p, r
    lim = math.isqrt(p)
    while b > lim:
        a, b = b, a % b
    if b == 0:
        return None
    cc, rem = divmod(p - b * b, d)
    if rem != 0:
        return None
    y = math.isqrt(cc)
    if y == 0 or y * y != cc:
        return None
    return b, y


def _x_extent(form: QuadraticForm, p: int) -> int:
    """Upper bound on |x| over the ellipse Q(x, y) = p: 2*sqrt(c*p/D)."""
    return math.isqrt(4 * form.c * p // form.D) + 1


def brute_force_representations(
    form: QuadraticForm, p: int, bound: int = DEFAULT_ORACLE_BOUND
) -> set[tuple[int, int]]:
    """The complete set of integer pairs (x, y) with Q(x, y) = p.

    Exhaustive and exact: x runs over the ellipse extent and the quadratic in
    y is solved with a perfect-square discriminant test. Serves as the
    reference oracle for the fast path, so it must stay independent of it.
    """
    if p > bound:
        raise OracleBoundError(
            f"oracle enumeration requested for p={p} above bound {bound}"
        )
    a, b, c = form.a, form.b, form.c
    disc = form.disc
    out: set[tuple[int, int]] = set()
    four_cp = 4 * c * p
    for x in range(0, _x_extent(form, p) + 1):
        dd = disc * x * x + four_cp
        if dd < 0:
            continue
        s = math.isqrt(dd)
        if s * s != dd:
            continue
        for root in {(-b * x + s), (-b * x - s)}:
            yq, rem = divmod(root, 2 * c)
            if rem == 0 and form.evaluate(x, yq) == p:
                out.add((x, yq))
                out.add((-x, -yq))
    return out


def canonical_filter(pairs) -> list[tuple[int, int]]:
    """Keep pairs with x > y, x > 0, y >= 0, sorted for determinism."""
    return sorted((x, y) for x, y in pairs if x > y and x > 0 and y >= 0)


def _fast_pairs(c: int, p: int) -> list[tuple[int, int]]:
    """Candidate solutions of x^2 + c*y^2 = p from the remainder chain.

    Returns the positive-quadrant candidates (plus the swap for c = 1); signs
    are restored by the caller's filter. Relies on the representation being
    unique up to symmetry, which holds for the class-number-one cases c in
    {1, 2, 3} this path is used for at scale.
    """
    sol = cornacchia(c, p)
    if sol is None:
        return []
    x0, y0 = sol
    cands = {(x0, y0)}
    if c == 1:
        cands.add((y0, x0))
    return sorted(cands)


def canonical_pairs(
    form: QuadraticForm, p: int, oracle_bound: int = DEFAULT_ORACLE_BOUND
) -> list[Representation]:
    """All representations of p surviving the canonical filter.

    Uses the remainder-chain fast path for forms x^2 + c*y^2 (odd p coprime
    to c) and the enumeration oracle otherwise. Empty when p has no
    qualifying representation.
    """
    if form.a == 1 and form.b == 0 and p > 2 and form.c % p != 0:
        kept = canonical_filter(_fast_pairs(form.c, p))
    else:
        kept = canonical_filter(brute_force_representations(form, p, oracle_bound))
    reps = []
    for x, y in kept:
        if form.evaluate(x, y) != p:  # soundness check on every construction
            raise ArithmeticError(f"representation ({x},{y}) fails Q(x,y)={p}")
        reps.append(Representation(p=p, x=x, y=y, canonical=True))
    return reps


# ---------------------------------------------------------------------------
# bulk tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepTable:
    """Canonical representations for all primes up to a bound, one row per pair.

    Rows are sorted by (p, x, y); a prime with several canonical pairs (only
    possible for general forms) occupies several rows. `limit` records the
    bound the table was computed to: every prime <= limit was processed, so
    gaps really mean "no canonical pair".
    """

    form: QuadraticForm
    p: np.ndarray  # int64
    x: np.ndarray  # int64
    y: np.ndarray  # int64
    limit: int

    def __len__(self) -> int:
        return int(self.p.size)

    @property
    def max_prime(self) -> int:
        return int(self.p[-1]) if self.p.size else 0

    def slice_class(self, cls: CongruenceClass) -> "RepTable":
        if cls.is_trivial:
            return self
        mask = self.p % cls.modulus == cls.residue
        return RepTable(self.form, self.p[mask], self.x[mask], self.y[mask], self.limit)

    def slice_below(self, limit: int) -> "RepTable":
        """Rows with p <= limit."""
        hi = int(np.searchsorted(self.p, limit, side="right"))
        return RepTable(
            self.form, self.p[:hi], self.x[:hi], self.y[:hi], min(self.limit, limit)
        )

    def rows(self):
        return zip(self.p.tolist(), self.x.tolist(), self.y.tolist())


def _empty_table(form: QuadraticForm, limit: int = 0) -> RepTable:
    z = np.empty(0, dtype=np.int64)
    return RepTable(form, z, z.copy(), z.copy(), limit)


def _residue_prefilter(c: int, primes: np.ndarray) -> np.ndarray:
    """Mask of primes that can possibly satisfy x^2 + c*y^2 = p (c in 1..3).

    These are the classical residue criteria for -c being a square mod p;
    other c values are left unfiltered and decided by the square-root attempt.
    """
    if c == 1:
        return primes % 4 == 1
    if c == 2:
        r = primes % 8
        return (r == 1) | (r == 3)
    if c == 3:
        return primes % 3 == 1
    return np.ones(primes.shape, dtype=bool)


def _special_pairs(form: QuadraticForm, p: int) -> list[tuple[int, int]]:
    # p = 2 or p | c: tiny, handled by the exact oracle
    return canonical_filter(brute_force_representations(form, p, bound=max(p, 4)))


def _fast_block(form: QuadraticForm, primes: np.ndarray) -> list[tuple[int, int, int]]:
    """Canonical rows for a block of primes, form x^2 + c*y^2."""
    c = form.c
    rows: list[tuple[int, int, int]] = []
    # p = 2 and p | c sidestep the remainder chain; there are only a few
    for p in sorted({2, *distinct_prime_factors(c)}):
        i = int(np.searchsorted(primes, p))
        if i < primes.size and primes[i] == p:
            rows.extend((p, x, y) for x, y in _special_pairs(form, p))
    for p in primes[_residue_prefilter(c, primes)].tolist():
        if p == 2 or c % p == 0:
            continue
        rows.extend((p, x, y) for x, y in canonical_filter(_fast_pairs(c, p)))
    rows.sort()
    return rows


def _oracle_rows_vec(form: QuadraticForm, p: int) -> list[tuple[int, int, int]]:
    """Canonical rows for one prime via vectorized ellipse enumeration.

    Same enumeration as brute_force_representations restricted to x >= 1
    (canonical pairs need x > 0), with exact int64 verification of every
    candidate. Used by the bulk path for general forms.
    """
    a, b, c = form.a, form.b, form.c
    disc = form.disc
    xs = np.arange(1, _x_extent(form, p) + 1, dtype=np.int64)
    dd = disc * xs * xs + 4 * c * p
    keep = dd >= 0
    xs, dd = xs[keep], dd[keep]
    s = np.sqrt(dd.astype(np.float64)).astype(np.int64)
    s = np.where((s + 1) * (s + 1) <= dd, s + 1, s)
    s = np.where(s * s > dd, s - 1, s)
    sq = s * s == dd
    xs, dd, s = xs[sq], dd[sq], s[sq]
    rows = []
    for sign in (1, -1):
        num = -b * xs + sign * s
        ok = num % (2 * c) == 0
        y = num[ok] // (2 * c)
        x = xs[ok]
        good = (x > y) & (y >= 0) & (a * x * x + b * x * y + c * y * y == p)
        rows.extend((p, int(xv), int(yv)) for xv, yv in zip(x[good], y[good]))
    return sorted(set(rows))


def _oracle_block(form: QuadraticForm, primes: np.ndarray) -> list[tuple[int, int, int]]:
    rows: list[tuple[int, int, int]] = []
    # every int64 intermediate in the vectorized path is below ~term_scale*p
    term_scale = max(16 * (1 + form.b * form.b // form.D), 8 * form.c)
    for p in primes.tolist():
        if term_scale * p < (1 << 62):
            rows.extend(_oracle_rows_vec(form, p))
        else:
            kept = canonical_filter(brute_force_representations(form, p, bound=p))
            rows.extend((p, x, y) for x, y in kept)
    rows.sort()
    return rows


def _table_block(args) -> list[tuple[int, int, int]]:
    (a, b, c), primes = args
    form = QuadraticForm(a, b, c)
    if form.a == 1 and form.b == 0:
        return _fast_block(form, primes)
    return _oracle_block(form, primes)


def representation_table(
    form: QuadraticForm, primes: np.ndarray, threads: int = 1
) -> RepTable:
    """Canonical representation rows for every prime in the given array.

    Blocks of primes may be processed by worker processes; blocks are reduced
    in ascending order so the result is identical for any thread count. The
    table's coverage limit is the largest prime processed.
    """
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size == 0:
        return _empty_table(form)
    limit = int(primes[-1])
    coeffs = (form.a, form.b, form.c)
    if threads <= 1 or primes.size < 4096:
        rows = _table_block((coeffs, primes))
    else:
        blocks = np.array_split(primes, threads * 4)
        rows = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_table_block, [(coeffs, blk) for blk in blocks]):
                rows.extend(part)
    if not rows:
        return _empty_table(form, limit)
    arr = np.array(rows, dtype=np.int64)
    return RepTable(form, arr[:, 0], arr[:, 1], arr[:, 2], limit)


def extend_table(table: RepTable, new_limit: int, threads: int = 1) -> RepTable:
    """Grow a table's coverage to new_limit, reusing the existing rows."""
    if new_limit <= table.limit:
        return table
    extra = representation_table(
        table.form, sieve_range(table.limit + 1, new_limit), threads=threads
    )
    return RepTable(
        table.form,
        np.concatenate([table.p, extra.p]),
        np.concatenate([table.x, extra.x]),
        np.concatenate([table.y, extra.y]),
        new_limit,
    )


def ensure_table(
    form: QuadraticForm,
    limit: int,
    rep_table: RepTable | None = None,
    threads: int = 1,
) -> RepTable:
    """Reuse the caller's table, extending its coverage to limit if short."""
    if rep_table is not None:
        if rep_table.form != form:
            raise ValueError("representation table computed for a different form")
        return extend_table(rep_table, limit, threads=threads)
    return representation_table(form, sieve_range(2, limit), threads=threads)
