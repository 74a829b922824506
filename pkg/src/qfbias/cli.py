"""Command-line surface: experiment orchestration, CSV emission, caching.

Machine-readable results go to standard output; progress and timing go to
standard error. Exit codes: 0 success, 2 usage error, 3 computation error,
4 I/O error.
"""

from __future__ import annotations

import functools
import math
import os
import sys
import time
from pathlib import Path

import click

from . import counting, equidist
from .cache import read_cache, write_cache
from .counting import FieldSplitting
from .errors import ComputationError
from .forms import QuadraticForm, RepTable, ensure_table, representation_table
from .limits import LimitProblem
from .polynomials import parse_polynomial
from .primes import CongruenceClass, nth_prime_bound, sieve_range
from .series import bias_series, ratio_series, sign_changes

CACHE_DIR_ENV = "QFBIAS_CACHE_DIR"


def _fmt(v: float) -> str:
    return f"{v:.12f}"


def _fmt_opt(v: float | None) -> str:
    return "" if v is None else _fmt(v)


def progress(msg: str) -> None:
    click.echo(msg, err=True)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except ComputationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except ValueError as exc:
            # contract violations surface as usage errors at the CLI boundary
            raise click.UsageError(str(exc)) from exc
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(4)

    return wrapper


def _parse_form(ctx, param, value) -> QuadraticForm | None:
    if value is None:
        return None
    try:
        parts = [int(t) for t in value.split(",")]
        if len(parts) != 3:
            raise ValueError("expected three comma-separated integers")
        return QuadraticForm(*parts)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _parse_poly(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_polynomial(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _class_from(mod: int, res: int | None) -> CongruenceClass:
    if res is None and mod == 1:
        return CongruenceClass.trivial()
    if res is None:
        raise click.UsageError("--res is required when --mod is given")
    try:
        return CongruenceClass(res, mod)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _resolve_cache(path: str) -> Path:
    p = Path(path)
    env = os.environ.get(CACHE_DIR_ENV)
    if env and not p.is_absolute():
        return Path(env) / p
    return p


def _load_table(
    form: QuadraticForm, cache: str | None, limit: int, threads: int
) -> RepTable:
    """Table covering primes up to limit, seeded from a cache when given."""
    seed = None
    if cache:
        path = _resolve_cache(cache)
        if path.exists():
            seed = read_cache(path, expected_form=form)
            progress(f"cache: {len(seed)} records up to {seed.max_prime} from {path}")
        else:
            raise click.UsageError(f"cache file {path} does not exist")
    t0 = time.perf_counter()
    table = ensure_table(form, limit, seed, threads)
    dt = time.perf_counter() - t0
    if dt > 0.2:
        progress(f"representations: {len(table)} rows in {dt:.1f}s")
    return table


form_option = click.option(
    "--form", callback=_parse_form, required=True, help="form coefficients a,b,c"
)
mod_option = click.option("--mod", type=int, default=1, show_default=True, help="congruence modulus M")
res_option = click.option("--res", type=int, default=None, help="congruence residue m")
threads_option = click.option(
    "--threads", type=int, default=lambda: os.cpu_count() or 1, help="worker processes"
)
cache_option = click.option("--cache", default=None, help="representation cache file (QFR1)")
output_option = click.option(
    "-o", "--output", required=True, type=click.Path(dir_okay=False), help="CSV output path"
)


@click.group()
@click.version_option(package_name="qfbias")
def main():
    """Prime representations by quadratic forms: bias series and statistics."""


# ---------------------------------------------------------------------------


@main.command("sieve")
@click.option("--limit", type=int, default=None, help="sieve [2, limit]")
@click.option("--lo", type=int, default=None)
@click.option("--hi", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write primes, one per line")
@handle_errors
def cmd_sieve(limit, lo, hi, out):
    """Count (and optionally list) primes in a range."""
    if limit is not None:
        if lo is not None or hi is not None:
            raise click.UsageError("--limit conflicts with --lo/--hi")
        lo, hi = 2, limit
    if lo is None or hi is None:
        raise click.UsageError("need --limit or both --lo and --hi")
    if lo > hi:
        raise click.UsageError("--lo must not exceed --hi")
    t0 = time.perf_counter()
    primes = sieve_range(lo, hi)
    progress(f"sieved [{lo}, {hi}] in {time.perf_counter() - t0:.2f}s")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.writelines(f"{p}\n" for p in primes.tolist())
    click.echo(str(len(primes)))


@main.command("represent")
@form_option
@click.option("--limit", type=int, required=True, help="prime bound (inclusive)")
@click.option("--cache", "cache_out", required=True, help="QFR1 cache file to write")
@threads_option
@handle_errors
def cmd_represent(form, limit, cache_out, threads):
    """Compute canonical representations up to a bound and cache them."""
    t0 = time.perf_counter()
    table = representation_table(form, sieve_range(2, limit), threads=threads)
    dt = time.perf_counter() - t0
    path = _resolve_cache(cache_out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    write_cache(path, table)
    rate = len(table) / dt if dt > 0 else float("inf")
    progress(f"{len(table)} records in {dt:.1f}s ({rate:,.0f} records/s) -> {path}")
    click.echo(str(len(table)))


def _write_series_csv(path, pts) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("N,PrN,sum_a,sum_b,F\n")
        for pt in pts:
            fh.write(f"{pt.N},{pt.PrN},{pt.sum_a},{pt.sum_b},{_fmt_opt(pt.F)}\n")


@main.command("series")
@form_option
@mod_option
@res_option
@click.option("--nmax", type=int, required=True, help="prime-index bound N")
@click.option("--stride", type=int, default=100, show_default=True)
@output_option
@cache_option
@threads_option
@handle_errors
def cmd_series(form, mod, res, nmax, stride, output, cache, threads):
    """Bias series: cumulative coordinate sums at every stride-th prime index."""
    cls = _class_from(mod, res)

    table = _load_table(form, cache, nth_prime_bound(nmax), threads)
    ser = bias_series(form, cls, nmax, stride=stride, rep_table=table, threads=threads)
    _write_series_csv(output, ser.points)
    final = ser.points[-1].F
    click.echo(_fmt_opt(final) if final is not None else "undefined")


@main.command("ratio")
@form_option
@mod_option
@res_option
@click.option("--nmax", type=int, required=True)
@click.option("--stride", type=int, default=100, show_default=True)
@output_option
@cache_option
@threads_option
@handle_errors
def cmd_ratio(form, mod, res, nmax, stride, output, cache, threads):
    """Ratio series: class bias series normalized by the all-primes series."""
    cls = _class_from(mod, res)
    if cls.is_trivial:
        raise click.UsageError("ratio needs a nontrivial congruence class")

    table = _load_table(form, cache, nth_prime_bound(nmax), threads)
    ser_cls = bias_series(form, cls, nmax, stride=stride, rep_table=table, threads=threads)
    ser_all = bias_series(
        form, CongruenceClass.trivial(), nmax, stride=stride, rep_table=table, threads=threads
    )
    ratios = ratio_series(ser_cls, ser_all)
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("N,R\n")
        for n, r in ratios:
            fh.write(f"{n},{_fmt_opt(r)}\n")
    final = ratios[-1][1]
    click.echo(_fmt_opt(final) if final is not None else "undefined")


@main.command("limit")
@form_option
@click.option("--k", type=int, default=None, help="moment power")
@click.option("--f", "poly_f", callback=_parse_poly, default=None, help="numerator polynomial")
@click.option("--g", "poly_g", callback=_parse_poly, default=None, help="denominator polynomial")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@handle_errors
def cmd_limit(form, k, poly_f, poly_g, tol):
    """Exact limit of the bias series, by quadrature of the closed form."""
    try:
        problem = LimitProblem(form=form, k=k, f=poly_f, g=poly_g)
        value = problem.solve(tol=tol)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(_fmt(value))


@main.command("dfunc")
@click.option("--xmax", type=int, required=True, help="count primes below this bound")
@output_option
@cache_option
@threads_option
@handle_errors
def cmd_dfunc(xmax, output, cache, threads):
    """Counting-function differences for p = a^2 + 4b^2 in classes 1, 5 mod 8."""
    form = QuadraticForm(1, 0, 1)
    table = _load_table(form, cache, xmax, threads)
    d1, d2 = counting.d_functions(xmax, rep_table=table, threads=threads)
    merged = sorted(set(d1.x_grid) | set(d2.x_grid))
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("x,D1,D2\n")
        for g in merged:
            fh.write(f"{g},{d1.value_at(g)},{d2.value_at(g)}\n")
    f1 = counting.negative_bias_fraction(d1)
    f2 = counting.negative_bias_fraction(d2)
    progress(
        f"negative fraction: D1 {f1.negative:.4f} (<=0: {f1.nonpositive:.4f}), "
        f"D2 {f2.negative:.4f} (<=0: {f2.nonpositive:.4f})"
    )
    click.echo(f"{d1.values[-1]} {d2.values[-1]}")


@main.command("acoeff")
@click.option("--delta", type=int, required=True, help="squarefree negative field input")
@click.option("--mod", type=int, required=True)
@click.option("--res", type=int, required=True)
@click.option("--budget", type=int, default=counting.DEFAULT_PRIME_BUDGET, show_default=True)
@handle_errors
def cmd_acoeff(delta, mod, res, budget):
    """Density coefficient A(m, M) as a norm-residue subgroup index."""
    try:
        fs = FieldSplitting(delta)
        cls = _class_from(mod, res)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(str(counting.a_coefficient(fs, cls, prime_budget=budget)))


@main.command("density")
@click.option("--delta", type=int, required=True)
@click.option("--mod", type=int, default=1, show_default=True)
@click.option("--res", type=int, default=None)
@click.option("--x", "x_max", type=int, required=True)
@output_option
@click.option("--budget", type=int, default=counting.DEFAULT_PRIME_BUDGET, show_default=True)
@handle_errors
def cmd_density(delta, mod, res, x_max, output, budget):
    """Prime-ideal counts against the predicted leading term, at checkpoints."""
    try:
        fs = FieldSplitting(delta)
        cls = _class_from(mod, res)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if x_max < 100:
        raise click.UsageError("--x must be at least 100")
    checkpoints = []
    x = 100
    while x < x_max:
        checkpoints.append(x)
        x *= 10
    checkpoints.append(x_max)
    subgroup = counting.norm_residue_subgroup(fs, cls.modulus, budget)
    reports = [
        counting.density_check(fs, cls, cp, prime_budget=budget, subgroup=subgroup)
        for cp in checkpoints
    ]
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("x,empirical,predicted,ratio\n")
        for rep in reports:
            fh.write(
                f"{rep.x},{rep.empirical},{_fmt(rep.predicted)},{_fmt_opt(rep.ratio)}\n"
            )
    final = reports[-1].ratio
    click.echo(_fmt_opt(final) if final is not None else "exact-zero")


@main.command("equidist")
@form_option
@mod_option
@res_option
@click.option("--limit", type=int, default=None, help="prime bound for samples")
@click.option("--count", "max_count", type=int, default=None, help="sample count cap")
@click.option("--w", type=int, default=None, help="winding (roots of unity); default by field")
@click.option("--conjugates", is_flag=True, help="append mirror samples")
@output_option
@click.option("--stats", "stats_path", type=click.Path(dir_okay=False), default=None,
              help="also write a prefix-statistics sweep CSV")
@click.option("--stats-stride", type=int, default=0, help="sweep stride (0 = auto)")
@click.option("--sectors", type=int, default=0, help="print counts for this many sectors")
@cache_option
@threads_option
@handle_errors
def cmd_equidist(form, mod, res, limit, max_count, w, conjugates, output,
                 stats_path, stats_stride, sectors, cache, threads):
    """Angle samples and equidistribution statistics for represented primes."""
    cls = _class_from(mod, res)
    if limit is None and cache is None:
        raise click.UsageError("need --limit (or a --cache covering the primes)")
    if w is None:
        w = equidist.root_count_for_form(form)
    table = _load_table(form, cache, limit or 2, threads)
    if limit is not None:
        table = table.slice_below(limit)
    table = table.slice_class(cls)
    if max_count is not None:
        table = RepTable(table.form, table.p[:max_count], table.x[:max_count],
                         table.y[:max_count], table.limit)
    if len(table) == 0:
        raise ComputationError("no canonical representations in the requested range")
    raw, theta = equidist.angle_arrays(table, w)
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("p,x,y,raw_arg,theta\n")
        for p, x, y, r, t in zip(
            table.p.tolist(), table.x.tolist(), table.y.tolist(),
            raw.tolist(), theta.tolist(),
        ):
            fh.write(f"{p},{x},{y},{_fmt(r)},{_fmt(t)}\n")

    quarter = math.pi / 4
    ks = equidist.ks_statistic(raw, quarter)
    if stats_path:
        n = raw.size
        stride = stats_stride if stats_stride > 0 else max(1, n // 20)
        with open(stats_path, "w", encoding="utf-8") as fh:
            fh.write("N,ks,weyl_1,weyl_2,weyl_3,weyl_4,weyl_5\n")
            grid = list(range(stride, n + 1, stride))
            if not grid or grid[-1] != n:
                grid.append(n)
            for m in grid:
                prefix = raw[:m]
                cols = [equidist.ks_statistic(prefix, quarter)]
                cols += [equidist.weyl_sum(prefix, j, quarter) for j in range(1, 6)]
                fh.write(f"{m}," + ",".join(_fmt(c) for c in cols) + "\n")
    if sectors > 0:
        vals = theta.tolist()
        if conjugates:
            vals = vals + [(-t) % (2 * math.pi) for t in vals]
        counts = equidist.sector_counts(vals, sectors)
        progress("sector counts: " + " ".join(str(c) for c in counts))
    click.echo(_fmt(ks))


# ---------------------------------------------------------------------------
# figure reproduction
# ---------------------------------------------------------------------------


def _repro_bias_pair(form, classes, n_max, stride, outdir, tag, threads):

    table = ensure_table(form, nth_prime_bound(n_max), None, threads)
    named = []
    for cls in classes:
        ser = bias_series(form, cls, n_max, stride=stride, rep_table=table, threads=threads)
        path = outdir / f"{tag}_class{cls.residue}mod{cls.modulus}.csv"
        _write_series_csv(path, ser.points)
        named.append((cls, ser, path))
    (c1, s1, _), (c2, s2, _) = named
    count, _ = sign_changes(s1.values(), s2.values())
    f1, f2 = s1.points[-1].F, s2.points[-1].F
    progress(
        f"{tag}: final F[{c1}]={_fmt_opt(f1)} F[{c2}]={_fmt_opt(f2)}; "
        f"{count} sign changes of the difference"
    )
    return table


@main.command("repro")
@click.option("--outdir", type=click.Path(file_okay=False), default="repro_out", show_default=True)
@click.option("--figure", type=click.Choice(["all", "1", "2", "3", "4"]), default="all",
              show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True,
              help="shrink factor for the default desk-scale bounds")
@threads_option
@handle_errors
def cmd_repro(outdir, figure, scale, threads):
    """Regenerate the experiment CSV files behind the four figures."""
    if scale <= 0 or scale > 1:
        raise click.UsageError("--scale must be in (0, 1]")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stride = 100
    want = {"1", "2", "3", "4"} if figure == "all" else {figure}
    form11 = QuadraticForm(1, 0, 1)

    def scaled(n, minimum=1000):
        return max(int(n * scale), minimum)

    table11 = None
    if "1" in want:
        table11 = _repro_bias_pair(
            form11,
            (CongruenceClass(1, 8), CongruenceClass(5, 8)),
            scaled(500_000), stride, outdir, "fig1", threads,
        )
    if "2" in want:
        _repro_bias_pair(
            QuadraticForm(1, 1, 1),
            (CongruenceClass(1, 12), CongruenceClass(7, 12)),
            scaled(100_000), stride, outdir, "fig2", threads,
        )
    if "3" in want:

        n_max = scaled(500_000)
        table11 = ensure_table(form11, nth_prime_bound(n_max), table11, threads)
        ser_all = bias_series(form11, CongruenceClass.trivial(), n_max,
                              stride=stride, rep_table=table11, threads=threads)
        for m in (1, 5):
            cls = CongruenceClass(m, 8)
            ser = bias_series(form11, cls, n_max, stride=stride,
                              rep_table=table11, threads=threads)
            ratios = ratio_series(ser, ser_all)
            path = outdir / f"fig3_ratio{m}mod8.csv"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("N,R\n")
                for n, r in ratios:
                    fh.write(f"{n},{_fmt_opt(r)}\n")
            progress(f"fig3: final R[{cls}]={_fmt_opt(ratios[-1][1])}")
    if "4" in want:
        x_max = scaled(1_000_000, minimum=10_000)
        table11 = ensure_table(form11, x_max, table11, threads)
        d1, d2 = counting.d_functions(x_max, rep_table=table11, threads=threads)
        merged = sorted(set(d1.x_grid) | set(d2.x_grid))
        path = outdir / "fig4_dfunctions.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,D1,D2\n")
            for g in merged:
                fh.write(f"{g},{d1.value_at(g)},{d2.value_at(g)}\n")
        f1 = counting.negative_bias_fraction(d1)
        f2 = counting.negative_bias_fraction(d2)
        progress(
            f"fig4: negative fractions D1 {f1.negative:.4f}, D2 {f2.negative:.4f}"
        )
    click.echo(str(outdir))


if __name__ == "__main__":
    main()
