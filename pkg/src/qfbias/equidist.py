"""Angle statistics for represented primes: Weyl sums, KS distance, sectors.

Each canonical representation (x, y) yields a coordinate angle
raw_arg = atan(y/x) and the wound angle theta = w * atan2(y, x) (mod 2pi),
where w is the number of roots of unity of the relevant field (4 for
delta = -1, 6 for delta = -3, else 2). One representative per prime covers
only the fundamental domain of theta; appending the conjugate sample mirrors
theta to 2pi - theta and fills the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import squarefree_part
from .forms import QuadraticForm, Representation, RepTable, ensure_table
from .primes import CongruenceClass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngleSample:
    """A prime with its coordinate angle and wound angle in [0, 2pi)."""

    p: int
    theta: float
    raw_arg: float


@dataclass(frozen=True)
class Sector:
    """Half-open angular window [phi1, phi2) inside [0, 2pi]."""

    phi1: float
    phi2: float

    def __post_init__(self):
        if not (0.0 <= self.phi1 <= self.phi2 <= TWO_PI):
            raise ValueError("sector bounds must satisfy 0 <= phi1 <= phi2 <= 2pi")

    @property
    def width(self) -> float:
        return self.phi2 - self.phi1

    def contains(self, theta: float) -> bool:
        return self.phi1 <= theta < self.phi2

    def count(self, samples) -> int:
        vals = _angle_values(samples)
        return int(np.count_nonzero((vals >= self.phi1) & (vals < self.phi2)))


def default_root_count(delta: int) -> int:
    """Roots of unity in the field for squarefree delta < 0: 4, 6, or 2."""
    if delta >= 0:
        raise ValueError("delta must be negative")
    if delta == -1:
        return 4
    if delta == -3:
        return 6
    return 2


def root_count_for_form(form: QuadraticForm) -> int:
    """Default winding for a form, from the squarefree part of its discriminant."""
    return default_root_count(squarefree_part(form.disc))


def hecke_angle(rep: Representation, w: int) -> AngleSample:
    """Angle sample of a canonical representation: theta = w*atan2(y,x) mod 2pi."""
    if w < 1:
        raise ValueError("root count w must be positive")
    raw = math.atan2(rep.y, rep.x)
    return AngleSample(p=rep.p, theta=(w * raw) % TWO_PI, raw_arg=raw)


def conjugate_sample(sample: AngleSample) -> AngleSample:
    """The mirror sample theta -> 2pi - theta of the conjugate ideal."""
    return AngleSample(
        p=sample.p, theta=(-sample.theta) % TWO_PI, raw_arg=sample.raw_arg
    )


def _angle_values(samples, attr: str = "theta") -> np.ndarray:
    vals = [getattr(s, attr) if isinstance(s, AngleSample) else float(s) for s in samples]
    return np.asarray(vals, dtype=np.float64)


def weyl_sum(samples, n: int, interval: float = TWO_PI) -> float:
    """|average of exp(2*pi*i*n*theta/interval)| over the samples, in [0, 1]."""
    if n == 0:
        raise ValueError("Weyl frequency must be nonzero")
    if interval <= 0:
        raise ValueError("interval length must be positive")
    vals = _angle_values(samples)
    if vals.size == 0:
        raise ValueError("empty sample list")
    return float(abs(np.exp(2j * math.pi * n * vals / interval).mean()))


def ks_statistic(samples, interval: float = TWO_PI) -> float:
    """Sup distance between the empirical CDF and the uniform CDF on [0, L)."""
    if interval <= 0:
        raise ValueError("interval length must be positive")
    vals = np.sort(_angle_values(samples)) / interval
    n = vals.size
    if n == 0:
        raise ValueError("empty sample list")
    if vals[0] < 0.0 or vals[-1] >= 1.0:
        raise ValueError("samples must lie in [0, interval)")
    steps = np.arange(n, dtype=np.float64)
    below = float(np.max(vals - steps / n))
    above = float(np.max((steps + 1.0) / n - vals))
    return max(below, above)


def sector_counts(samples, k: int) -> list[int]:
    """Counts of theta values in the k equal sectors [2pi(j-1)/k, 2pi j/k)."""
    if k < 1:
        raise ValueError("sector count must be >= 1")
    vals = _angle_values(samples)
    bins = np.floor(vals * (k / TWO_PI)).astype(np.int64)
    bins = np.clip(bins, 0, k - 1)
    return np.bincount(bins, minlength=k).astype(int).tolist()


def angle_arrays(table: RepTable, w: int) -> tuple[np.ndarray, np.ndarray]:
    """(raw_arg, theta) arrays for every row of a representation table.

    Uses math.atan2 per row so results agree bit-for-bit with hecke_angle
    (numpy's arctan2 can differ in the last ulp).
    """
    raw = np.array(
        [math.atan2(y, x) for x, y in zip(table.x.tolist(), table.y.tolist())],
        dtype=np.float64,
    )
    theta = np.mod(w * raw, TWO_PI)
    return raw, theta


def sample_angles(
    form: QuadraticForm,
    cls: CongruenceClass | None = None,
    x_limit: int | None = None,
    max_count: int | None = None,
    w: int | None = None,
    include_conjugates: bool = False,
    rep_table: RepTable | None = None,
    threads: int = 1,
) -> list[AngleSample]:
    """Angle samples for canonical representations of primes in a class.

    max_count truncates to the first rows (by prime); with conjugates on,
    each row contributes its mirror as well, in (principal, conjugate) order.
    """
    if rep_table is None and x_limit is None:
        raise ValueError("need either a representation table or x_limit")
    if w is None:
        w = root_count_for_form(form)
    table = ensure_table(form, x_limit or 2, rep_table, threads)
    if x_limit is not None:
        table = table.slice_below(x_limit)
    if cls is not None:
        table = table.slice_class(cls)
    if max_count is not None:
        table = RepTable(
            table.form,
            table.p[:max_count],
            table.x[:max_count],
            table.y[:max_count],
            table.limit,
        )
    raw, theta = angle_arrays(table, w)
    out = []
    for pi, ri, ti in zip(table.p.tolist(), raw.tolist(), theta.tolist()):
        s = AngleSample(p=pi, theta=ti, raw_arg=ri)
        out.append(s)
        if include_conjugates:
            out.append(conjugate_sample(s))
    return out
