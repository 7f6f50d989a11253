"""Elementary number theory: divisors, residues, and the index of Gamma_0(N).

Everything here works on plain Python integers.  Parameters in this domain
are tiny, so primality and factorisation use trial division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NotInvertible


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of ``n >= 1`` as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    """All positive divisors of ``n`` in increasing order."""
    if n < 1:
        raise ValueError(f"divisors expects n >= 1, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def tau(n: int) -> int:
    """Number of divisors of ``n``."""
    count = 1
    for e in factorize(n).values():
        count *= e + 1
    return count


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in ``n != 0``."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class DivisorStats:
    n: int
    tau: int
    m_ell: int
    m_mu: int
    m_ellmu: int
    delta: int


def multiples_dividing(n: int, d: int) -> int:
    """How many divisors of ``n`` are multiples of ``d``; equals tau(n/d) when d | n."""
    return tau(n // d) if n % d == 0 else 0


def divisor_stats(n: int, ell: int, mu: int) -> DivisorStats:
    """Divisor counts behind the mod-4 behaviour of (ell, mu)-regular overpartitions.

    ``delta`` counts the divisors of ``n`` that are divisible by neither ell nor mu.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if math.gcd(ell, mu) != 1:
        raise ValueError(f"gcd({ell}, {mu}) != 1")
    t = tau(n)
    a = multiples_dividing(n, ell)
    b = multiples_dividing(n, mu)
    c = multiples_dividing(n, ell * mu)
    return DivisorStats(n=n, tau=t, m_ell=a, m_mu=b, m_ellmu=c, delta=t - (a + b - c))


def units_mod(m: int) -> list[int]:
    return [x for x in range(m) if math.gcd(x, m) == 1]


def squares_mod(m: int) -> frozenset[int]:
    """Squares of the unit group of Z/mZ, as least nonnegative residues."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    return frozenset(x * x % m for x in units_mod(m))


def inv_mod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` in ``1..m-1`` (``0`` only when m == 1)."""
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible modulo {m}") from None


def is_qnr(a: int, p: int) -> bool:
    """True iff ``a`` is a quadratic nonresidue modulo the odd prime ``p``.

    Zero is neither a residue nor a nonresidue, so ``a = 0 (mod p)`` gives False.
    """
    a %= p
    if a == 0:
        return False
    return pow(a, (p - 1) // 2, p) == p - 1


def index_gamma0(N: int) -> int:
    """[SL2(Z) : Gamma_0(N)] = N * prod_{p | N} (1 + 1/p)."""
    value = Fraction(N)
    for p in factorize(N):
        value *= Fraction(p + 1, p)
    if value.denominator != 1:
        raise ArithmeticError(f"index for N={N} came out non-integral: {value}")
    return int(value)
