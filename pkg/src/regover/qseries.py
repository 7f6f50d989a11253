"""Exact truncated power series and the generating functions built from them.

A :class:`Series` holds the coefficients ``a_0 .. a_T`` of a power series
known exactly through ``q^T``.  Coefficients are arbitrary-precision integers,
or residues modulo a fixed ``modulus`` when the series is in reduced mode.
Reduced mode is what makes long expansions (tens of thousands of terms)
cheap enough for congruence checking.

Series are immutable.  Binary operations truncate to the shorter operand.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .arith import divisors
from .errors import EmptyExtraction, NonUnitConstantTerm, UnknownIdentity

# Above this modulus the int64 convolution sums could overflow.
_INT64_MODULUS_LIMIT = 1 << 20


def _dtype_for(modulus: int | None):
    if modulus is not None and modulus <= _INT64_MODULUS_LIMIT:
        return np.int64
    return object


def _combine_moduli(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return math.gcd(a, b)


class Series:
    """Power series truncated at ``q^trunc``, exact or reduced mod ``modulus``."""

    __slots__ = ("_c", "_modulus")

    def __init__(self, coeffs: Iterable[int] | np.ndarray, modulus: int | None = None):
        if modulus is not None and modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        if isinstance(coeffs, np.ndarray) and coeffs.dtype != object:
            arr = coeffs.astype(np.int64)
            if modulus is not None:
                arr = np.mod(arr, modulus)
            if _dtype_for(modulus) is object:
                arr = np.array([int(x) for x in arr], dtype=object)
        else:
            arr = np.array([int(x) for x in coeffs], dtype=object)
            if modulus is not None:
                arr = arr % modulus
                arr = arr.astype(_dtype_for(modulus))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a series needs at least the constant coefficient")
        arr.flags.writeable = False
        self._c = arr
        self._modulus = modulus

    @classmethod
    def _wrap(cls, arr: np.ndarray, modulus: int | None) -> "Series":
        # Trusted internal constructor: reduces but skips element conversion.
        obj = cls.__new__(cls)
        if modulus is not None:
            arr = arr % modulus
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        obj._c = arr
        obj._modulus = modulus
        return obj

    # construction helpers

    @classmethod
    def one(cls, T: int, modulus: int | None = None) -> "Series":
        return cls.monomial(0, T, modulus=modulus)

    @classmethod
    def zero(cls, T: int, modulus: int | None = None) -> "Series":
        return cls._wrap(_zeros(T, modulus), modulus)

    @classmethod
    def monomial(cls, e: int, T: int, coeff: int = 1, modulus: int | None = None) -> "Series":
        arr = _zeros(T, modulus)
        if e <= T:
            arr[e] = coeff
        return cls._wrap(arr, modulus)

    @classmethod
    def from_terms(cls, terms: Mapping[int, int], T: int, modulus: int | None = None) -> "Series":
        arr = _zeros(T)
        for e, c in terms.items():
            if 0 <= e <= T:
                arr[e] += c
        return cls(arr, modulus=modulus)

    # basic protocol

    @property
    def trunc(self) -> int:
        return self._c.size - 1

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the coefficient array."""
        return self._c

    def tolist(self) -> list[int]:
        return [int(x) for x in self._c]

    def __len__(self) -> int:
        return self._c.size

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.trunc:
            raise IndexError(f"q^{n} is outside the known range 0..{self.trunc}")
        return int(self._c[n])

    def __iter__(self):
        return (int(x) for x in self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.trunc == other.trunc
            and self._modulus == other._modulus
            and self.tolist() == other.tolist()
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        head = ", ".join(str(x) for x in self.tolist()[:8])
        more = ", ..." if self.trunc >= 8 else ""
        mod = f", mod {self._modulus}" if self._modulus else ""
        return f"Series([{head}{more}], T={self.trunc}{mod})"

    # arithmetic

    def _aligned(self, other: "Series"):
        T = min(self.trunc, other.trunc)
        mod = _combine_moduli(self._modulus, other._modulus)
        return _cast(self._c[: T + 1], mod), _cast(other._c[: T + 1], mod), mod

    def __add__(self, other):
        if isinstance(other, int):
            other = Series.monomial(0, self.trunc, other, self._modulus)
        if not isinstance(other, Series):
            return NotImplemented
        a, b, mod = self._aligned(other)
        return Series._wrap(a + b, mod)

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series._wrap(-self._c, self._modulus)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return Series._wrap(self._c * int(other), self._modulus)
        if isinstance(other, Series):
            return series_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Series":
        if k < 0:
            return series_inv(self) ** (-k)
        result = Series.one(self.trunc, self._modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def reduce(self, modulus: int) -> "Series":
        return Series(self._c, modulus=_combine_moduli(self._modulus, modulus))

    def truncate(self, T: int) -> "Series":
        if T > self.trunc:
            raise ValueError(f"cannot extend a series known through q^{self.trunc} to q^{T}")
        return Series._wrap(self._c[: T + 1].copy(), self._modulus)

    def shift(self, k: int) -> "Series":
        """Multiply by ``q^k`` (k >= 0), keeping the truncation order."""
        if k < 0:
            raise ValueError("use LaurentSeries for negative shifts")
        out = np.zeros_like(self._c)
        if k <= self.trunc:
            out[k:] = self._c[: self.trunc + 1 - k]
        return Series._wrap(out, self._modulus)

    def dilate(self, s: int) -> "Series":
        """Substitute ``q -> q^s``; the result is known through the same ``q^T``."""
        if s < 1:
            raise ValueError("dilation factor must be positive")
        out = np.zeros_like(self._c)
        src = self._c[: self.trunc // s + 1]
        out[:: s][: src.size] = src
        return Series._wrap(out, self._modulus)

    def is_zero(self) -> bool:
        return not np.any(self._c != 0)

    def content(self) -> int:
        """gcd of all coefficients (0 for the zero series)."""
        g = 0
        for x in self._c:
            g = math.gcd(g, int(x))
        return g


def _zeros(T: int, modulus: int | None = None) -> np.ndarray:
    return np.zeros(T + 1, dtype=_dtype_for(modulus))


def _cast(arr: np.ndarray, modulus: int | None) -> np.ndarray:
    dtype = _dtype_for(modulus)
    if arr.dtype == dtype:
        return arr if modulus is None else arr % modulus
    if dtype is object:
        return np.array([int(x) for x in arr], dtype=object)
    return (arr % modulus).astype(np.int64)


def first_mismatch(a: Series, b: Series) -> int | None:
    """Least exponent where ``a`` and ``b`` differ, or None if they agree."""
    x, y, _ = a._aligned(b)
    diff = np.nonzero(x != y)[0]
    return int(diff[0]) if diff.size else None


def series_mul(a: Series, b: Series) -> Series:
    x, y, mod = a._aligned(b)
    T = x.size - 1
    return Series._wrap(np.convolve(x, y)[: T + 1], mod)


def series_inv(a: Series) -> Series:
    """Multiplicative inverse of a series whose constant term is +1 or -1."""
    mod = a.modulus
    a0 = a[0]
    unit = {1, -1} if mod is None else {1 % mod, -1 % mod}
    if a0 not in unit:
        raise NonUnitConstantTerm(f"constant term {a0} is not +-1")
    T = a.trunc
    c = a.array
    # Newton iteration b <- b - b(ab - 1); a0 = +-1 is its own inverse.
    b = np.array([c[0]], dtype=c.dtype)
    n = 1
    while n < T + 1:
        n2 = min(2 * n, T + 1)
        err = np.convolve(c[:n2], b)[:n2]
        err[0] -= 1
        if mod is not None:
            err %= mod
        corr = np.convolve(b, err)[:n2]
        nb = np.zeros(n2, dtype=c.dtype)
        nb[:n] = b
        nb = nb - corr
        if mod is not None:
            nb %= mod
        b = nb
        n = n2
    return Series._wrap(b, mod)


# eta quotients


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Exponents ``r_delta`` of ``prod_{delta | M} f_delta^{r_delta}``.

    ``r`` lists one exponent per divisor of ``M`` in increasing divisor order.
    """

    M: int
    r: tuple[int, ...]

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"level M must be positive, got {self.M}")
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if len(self.r) != len(divisors(self.M)):
            raise ValueError(
                f"M={self.M} has {len(divisors(self.M))} divisors but {len(self.r)} exponents were given"
            )

    @classmethod
    def from_dict(cls, M: int, exponents: Mapping[int, int]) -> "EtaQuotientSpec":
        for d in exponents:
            if d < 1 or M % d:
                raise ValueError(f"{d} does not divide M={M}")
        return cls(M, tuple(exponents.get(d, 0) for d in divisors(M)))

    @classmethod
    def from_factors(cls, exponents: Mapping[int, int]) -> "EtaQuotientSpec":
        """Build the spec at the least level containing every ``f_delta`` used."""
        M = 1
        for d, r in exponents.items():
            if r:
                M = math.lcm(M, d)
        return cls.from_dict(M, {d: r for d, r in exponents.items() if r})

    @property
    def divisors(self) -> tuple[int, ...]:
        return divisors(self.M)

    def items(self) -> list[tuple[int, int]]:
        return list(zip(self.divisors, self.r))

    def as_dict(self) -> dict[int, int]:
        return {d: e for d, e in self.items() if e}

    def weight_sum(self) -> int:
        """sum of delta * r_delta."""
        return sum(d * e for d, e in self.items())

    def __str__(self) -> str:
        num = " ".join(f"f{d}^{e}" if e != 1 else f"f{d}" for d, e in self.items() if e > 0)
        den = " ".join(f"f{d}^{-e}" if e != -1 else f"f{d}" for d, e in self.items() if e < 0)
        return f"({num or '1'}) / ({den or '1'})"


def euler_terms(T: int, delta: int = 1) -> list[tuple[int, int]]:
    """Nonzero terms of ``f_delta`` through ``q^T`` from the pentagonal number theorem."""
    terms = [(0, 1)]
    k = 1
    while delta * k * (3 * k - 1) // 2 <= T:
        sign = -1 if k % 2 else 1
        terms.append((delta * k * (3 * k - 1) // 2, sign))
        e = delta * k * (3 * k + 1) // 2
        if e <= T:
            terms.append((e, sign))
        k += 1
    return terms


def _mul_sparse(arr: np.ndarray, terms: Sequence[tuple[int, int]], modulus: int | None) -> np.ndarray:
    T = arr.size - 1
    out = np.zeros_like(arr)
    for e, c in terms:
        out[e:] += c * arr[: T + 1 - e]
    if modulus is not None:
        out %= modulus
    return out


def _eta_product(factors: Iterable[tuple[int, int]], T: int, modulus: int | None) -> np.ndarray:
    arr = _zeros(T, modulus)
    arr[0] = 1
    for delta, power in factors:
        terms = euler_terms(T, delta)
        for _ in range(power):
            arr = _mul_sparse(arr, terms, modulus)
    return arr


@lru_cache(maxsize=64)
def _eta_expand_cached(spec: EtaQuotientSpec, T: int, modulus: int | None) -> Series:
    pos = [(d, e) for d, e in spec.items() if e > 0]
    neg = [(d, -e) for d, e in spec.items() if e < 0]
    num = Series._wrap(_eta_product(pos, T, modulus), modulus)
    if not neg:
        return num
    den = Series._wrap(_eta_product(neg, T, modulus), modulus)
    return series_mul(num, series_inv(den))


def eta_expand(spec: EtaQuotientSpec, T: int, modulus: int | None = None) -> Series:
    """Expand ``prod f_delta^{r_delta}`` through ``q^T``.

    The denominator is multiplied out first and inverted once.
    """
    if T < 0:
        raise ValueError("truncation order must be nonnegative")
    return _eta_expand_cached(spec, T, modulus)


def clear_cache() -> None:
    _eta_expand_cached.cache_clear()


def eta(factors: Mapping[int, int], T: int, modulus: int | None = None) -> Series:
    """Shorthand: ``eta({2: 1, 1: -2}, T)`` is f_2 / f_1^2."""
    return eta_expand(EtaQuotientSpec.from_factors(factors), T, modulus)


# families


@dataclass(frozen=True)
class FamilyParams:
    """``Rbar`` counts (l, mu)-regular overpartitions; ``RbarStar`` counts
    overpartitions whose non-overlined parts are l-regular (``mu`` unused)."""

    kind: str
    l: int
    mu: int | None = None

    def __post_init__(self):
        if self.kind not in ("Rbar", "RbarStar"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.l < 2:
            raise ValueError(f"l must be >= 2, got {self.l}")
        if self.kind == "Rbar":
            if self.mu is None or self.mu < 2:
                raise ValueError(f"Rbar needs mu >= 2, got {self.mu}")
            if math.gcd(self.l, self.mu) != 1:
                raise ValueError(f"Rbar needs gcd(l, mu) = 1, got ({self.l}, {self.mu})")
        elif self.mu is not None:
            object.__setattr__(self, "mu", None)

    def eta_spec(self) -> EtaQuotientSpec:
        l, mu = self.l, self.mu
        r: dict[int, int] = {}

        def add(d: int, e: int) -> None:
            r[d] = r.get(d, 0) + e

        if self.kind == "RbarStar":
            add(2, 1)
            add(l, 1)
            add(1, -2)
        else:
            add(2, 1)
            add(l, 2)
            add(mu, 2)
            add(2 * l * mu, 1)
            add(1, -2)
            add(2 * l, -1)
            add(2 * mu, -1)
            add(l * mu, -2)
        return EtaQuotientSpec.from_factors(r)

    def label(self) -> str:
        if self.kind == "Rbar":
            return f"Rbar_{{{self.l},{self.mu}}}"
        return f"Rbar*_{self.l}"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "l": self.l}
        if self.mu is not None:
            d["mu"] = self.mu
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "FamilyParams":
        return cls(d["kind"], int(d["l"]), None if d.get("mu") is None else int(d["mu"]))


def gf_family(p: FamilyParams, T: int, modulus: int | None = None) -> Series:
    return eta_expand(p.eta_spec(), T, modulus)


# theta functions


def theta_phi(sign: int | str, s: int, T: int, modulus: int | None = None) -> Series:
    """phi(+-q^s) where phi(q) = sum over all integers n of q^{n^2}."""
    if s < 1:
        raise ValueError("scale must be positive")
    sgn = {"+": 1, "-": -1, 1: 1, -1: -1}[sign]
    arr = _zeros(T)
    arr[0] = 1
    n = 1
    while s * n * n <= T:
        arr[s * n * n] = 2 * (sgn if n % 2 else 1)
        n += 1
    return Series(arr, modulus=modulus)


def extract_ap(a: Series, m: int, t: int) -> Series:
    """Coefficients ``a_{mn+t}`` as a new series in ``n``."""
    if m < 1 or not 0 <= t < m:
        raise ValueError(f"need 0 <= t < m, got m={m}, t={t}")
    if t > a.trunc:
        raise EmptyExtraction(f"q^{t} is beyond the truncation q^{a.trunc}")
    return Series._wrap(a.array[t::m].copy(), a.modulus)


# Laurent series (finite negative valuation)


@dataclass(frozen=True)
class LaurentSeries:
    """``q^valuation * series``; known exactly through ``q^(valuation + series.trunc)``."""

    series: Series
    valuation: int = 0

    @property
    def top(self) -> int:
        return self.valuation + self.series.trunc

    def coefficient(self, e: int) -> int:
        if e > self.top:
            raise IndexError(f"q^{e} is beyond the known range (top q^{self.top})")
        i = e - self.valuation
        return self.series[i] if i >= 0 else 0

    def coefficients(self, lo: int, hi: int) -> list[int]:
        return [self.coefficient(e) for e in range(lo, hi + 1)]

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentSeries(self.series * other, self.valuation)
        return LaurentSeries(self.series * other.series, self.valuation + other.valuation)

    __rmul__ = __mul__

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        v = min(self.valuation, other.valuation)
        top = min(self.top, other.top)
        mod = _combine_moduli(self.series.modulus, other.series.modulus)
        out = _zeros(top - v)
        for x in (self, other):
            for e in range(x.valuation, top + 1):
                out[e - v] += x.coefficient(e)
        return LaurentSeries(Series(out, modulus=mod), v)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(-self.series, self.valuation)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __pow__(self, k: int) -> "LaurentSeries":
        return LaurentSeries(self.series**k, self.valuation * k)

    @classmethod
    def constant(cls, c: int, top: int, modulus: int | None = None) -> "LaurentSeries":
        return cls(Series.monomial(0, top, c, modulus), 0)


# identities


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    terms: int
    passed: bool
    first_mismatch: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "terms": self.terms,
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def _lemma31(T: int):
    lhs = theta_phi("-", 2, T) ** 2
    rhs = theta_phi("+", 1, T) * theta_phi("-", 1, T)
    return lhs, rhs


def _phi_dyadic_product(scale: int, T: int) -> Series:
    """prod_{k>=0} phi(q^{scale 2^k})^{2^k}; factors beyond q^T are 1."""
    out = Series.one(T)
    j = 1
    while scale * j <= T:
        out = out * theta_phi("+", scale * j, T) ** j
        j *= 2
    return out


def _lemma32(T: int):
    return series_inv(theta_phi("-", 1, T)), _phi_dyadic_product(1, T)


def _sellers_dissection(T: int):
    lhs = eta({2: 1, 1: -2}, T)
    rhs = (
        eta({6: 4, 9: 6, 3: -8, 18: -3}, T)
        + 2 * eta({6: 3, 9: 3, 3: -7}, T).shift(1)
        + 4 * eta({6: 2, 18: 3, 3: -6}, T).shift(2)
    )
    return lhs, rhs


def _iterated_phi(T: int, l: int, mu: int):
    num = theta_phi("-", l, T) * theta_phi("-", mu, T)
    den = theta_phi("-", 1, T) * theta_phi("-", l * mu, T)
    return num * series_inv(den), gf_family(FamilyParams("Rbar", l, mu), T)


def _iterated_phi_product(T: int, l: int, mu: int):
    num = _phi_dyadic_product(1, T) * _phi_dyadic_product(l * mu, T)
    den = _phi_dyadic_product(l, T) * _phi_dyadic_product(mu, T)
    return num * series_inv(den), gf_family(FamilyParams("Rbar", l, mu), T)


def _phi_product(T: int):
    # phi(q) = prod (1 + q^{2n-1})^2 (1 - q^{2n}) = f_2^5 / (f_1^2 f_4^2)
    return theta_phi("+", 1, T), eta({2: 5, 1: -2, 4: -2}, T)


def jacobi_cube_series(T: int, modulus: int | None = None) -> Series:
    """sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}, the expansion of f_1^3."""
    terms = {}
    j = 0
    while j * (j + 1) // 2 <= T:
        terms[j * (j + 1) // 2] = (-1) ** j * (2 * j + 1)
        j += 1
    return Series.from_terms(terms, T, modulus)


def _jacobi_triple(T: int):
    return eta({1: 3}, T), jacobi_cube_series(T)


def _lemma35_mod8(T: int):
    gf = gf_family(FamilyParams("RbarStar", 6), 3 * T + 2, modulus=8)
    return extract_ap(gf, 3, 2), 4 * eta({6: 3}, T, modulus=8)


IDENTITIES: dict[str, tuple[int, Callable]] = {
    "lemma31": (0, _lemma31),
    "lemma32": (0, _lemma32),
    "sellers_dissection": (0, _sellers_dissection),
    "iterated_phi": (2, _iterated_phi),
    "iterated_phi_product": (2, _iterated_phi_product),
    "phi_product": (0, _phi_product),
    "jacobi_triple": (0, _jacobi_triple),
    "lemma35_mod8": (0, _lemma35_mod8),
}

_IDENT_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([0-9,\s]*)\))?\s*$")


def parse_identity(text: str) -> tuple[str, tuple[int, ...]]:
    """``"iterated_phi(2,3)"`` -> ``("iterated_phi", (2, 3))``."""
    match = _IDENT_RE.match(text)
    if not match or match.group(1) not in IDENTITIES:
        raise UnknownIdentity(f"unknown identity {text!r}; known: {', '.join(IDENTITIES)}")
    name = match.group(1)
    args = tuple(int(x) for x in (match.group(2) or "").split(",") if x.strip())
    if len(args) != IDENTITIES[name][0]:
        raise UnknownIdentity(f"{name} takes {IDENTITIES[name][0]} integer parameter(s), got {len(args)}")
    return name, args


def identity_sides(identity: str, T: int) -> tuple[Series, Series]:
    name, args = parse_identity(identity)
    return IDENTITIES[name][1](T, *args)


def check_identity(identity: str, T: int) -> IdentityResult:
    """Expand both sides of a named identity through ``q^T`` and compare exactly."""
    lhs, rhs = identity_sides(identity, T)
    bad = first_mismatch(lhs, rhs)
    if bad is None:
        return IdentityResult(identity, T, True)
    return IdentityResult(identity, T, False, bad, lhs[bad], rhs[bad])
