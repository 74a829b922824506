"""Small exact-arithmetic helpers used across modules."""

import math


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def euler_phi(n: int) -> int:
    """Euler's totient, by trial-division factoring."""
    if n < 1:
        raise ValueError("totient needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the full extension of Jacobi/Legendre.

    Handles n = 0, negative n, and even n with the standard conventions:
    (a|0) = 1 iff a = +-1, (a|-1) = sign(a) with (0|-1) = 1, and
    (a|2) = 0 for even a, +1 for a = +-1 (mod 8), -1 otherwise.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # strip factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # now n is odd and positive: Jacobi with reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor pattern: n / (largest square dividing n).

    Sign is preserved: squarefree_part(-4) = -1, squarefree_part(-12) = -3.
    """
    if n == 0:
        raise ValueError("squarefree part of 0 is undefined")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2 == 1:
                out *= p
        p += 1 if p == 2 else 2
    return sign * out * m


def distinct_prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n|, ascending."""
    m = abs(n)
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out
