"""Prime generation: segmented odd-only sieve with congruence-class filtering.

The sieve keeps one byte flag per odd number in the active window, so the
default window of 2**20 numbers costs ~512 KiB of flags and fits in L2 cache.
Numbers are plain Python / numpy int64; capacity checks keep requests within
a configured bound rather than letting a huge sieve thrash the machine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import SieveCapacityError

DEFAULT_SEGMENT_SIZE = 1 << 20
# generous desk-scale ceiling; nth_prime and series builders refuse past this
DEFAULT_CAPACITY = 4_000_000_000


def _simple_prime_flags(n: int) -> np.ndarray:
    """Boolean array f with f[i] = (i prime), for 0 <= i <= n."""
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def _base_odd_primes(hi: int) -> list[int]:
    root = math.isqrt(hi)
    if root < 3:
        return []
    flags = _simple_prime_flags(root)
    return [int(p) for p in np.flatnonzero(flags) if p > 2]


def sieve_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """All primes in the closed interval [lo, hi], ascending, as int64.

    An empty interval (no primes in range) yields an empty array; lo > hi is
    a contract violation.
    """
    if lo > hi:
        raise ValueError(f"empty sieve interval: lo={lo} > hi={hi}")
    if segment_size < 1:
        raise ValueError("segment_size must be >= 1")
    if hi < 2:
        return np.empty(0, dtype=np.int64)

    parts = []
    if lo <= 2:
        parts.append(np.array([2], dtype=np.int64))
    base = _base_odd_primes(hi)

    seg_lo = max(lo, 3) | 1  # first odd candidate
    # widen tiny windows to at least one odd number
    span = max(segment_size, 2)
    while seg_lo <= hi:
        seg_hi = min(seg_lo + span - 1, hi)
        n_odds = (seg_hi - seg_lo) // 2 + 1
        flags = np.ones(n_odds, dtype=bool)
        for p in base:
            first = ((seg_lo + p - 1) // p) * p
            start = max(p * p, first)
            if start % 2 == 0:
                start += p
            if start <= seg_hi:
                flags[(start - seg_lo) // 2 :: p] = False
        found = seg_lo + 2 * np.flatnonzero(flags)
        if found.size:
            parts.append(found.astype(np.int64))
        seg_lo = (seg_hi + 1) | 1  # next odd beyond the window

    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


@dataclass(frozen=True)
class PrimeStream:
    """Every prime p <= limit, exactly once, in increasing order.

    The segment size only controls the sieving window; the emitted stream is
    identical for any segment_size >= 1.
    """

    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self):
        if self.limit < 0:
            raise ValueError("limit must be nonnegative")
        if self.segment_size < 1:
            raise ValueError("segment_size must be >= 1")

    def segments(self) -> Iterator[np.ndarray]:
        """Primes in consecutive windows, ascending; concatenation is the stream."""
        if self.limit < 2:
            return
        lo = 2
        span = max(self.segment_size, 2)
        while lo <= self.limit:
            hi = min(lo + span - 1, self.limit)
            yield sieve_range(lo, hi, segment_size=span)
            lo = hi + 1

    def __iter__(self) -> Iterator[int]:
        for seg in self.segments():
            yield from seg.tolist()


@dataclass(frozen=True)
class CongruenceClass:
    """A residue class m (mod M) with gcd(m, M) = 1.

    The residue is normalized into [0, M); modulus 1 gives the trivial class
    containing every integer.
    """

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        m = self.residue % self.modulus
        object.__setattr__(self, "residue", m)
        if math.gcd(m, self.modulus) != 1:
            raise ValueError(
                f"residue {m} is not coprime to modulus {self.modulus}"
            )

    @classmethod
    def trivial(cls) -> "CongruenceClass":
        return cls(0, 1)

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self) -> str:
        return f"{self.residue} (mod {self.modulus})"


def primes_in_class(
    limit: int, cls: CongruenceClass, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> np.ndarray:
    """Primes p <= limit with p in the class, ascending."""
    primes = sieve_range(2, limit, segment_size=segment_size) if limit >= 2 else np.empty(0, dtype=np.int64)
    if cls.is_trivial:
        return primes
    return primes[primes % cls.modulus == cls.residue]


def nth_prime_bound(n: int) -> int:
    """Upper bound for the n-th prime: n(ln n + ln ln n) for n >= 6."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 1


def nth_prime(n: int, capacity: int = DEFAULT_CAPACITY) -> int:
    """The n-th prime, 1-indexed (n=1 gives 2)."""
    if n < 1:
        raise ValueError("prime index must be >= 1")
    bound = nth_prime_bound(n)
    while True:
        if bound > capacity:
            raise SieveCapacityError(
                f"prime #{n} needs sieving to ~{bound}, beyond capacity {capacity}"
            )
        primes = sieve_range(2, bound)
        if len(primes) >= n:
            return int(primes[n - 1])
        bound *= 2  # unreachable for n >= 6; keeps small n honest


def prime_count(limit: int) -> int:
    """pi(limit): the number of primes <= limit."""
    if limit < 2:
        return 0
    return int(len(sieve_range(2, limit)))
