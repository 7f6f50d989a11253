"""Checking Radu-style certificates for Ramanujan-type congruences.

Given ``(m, M, N, t, r)`` with ``prod_{delta | M} f_delta^{r_delta} = sum A(n) q^n``
and an auxiliary exponent vector ``r'`` over the divisors of ``N``, a
certificate establishes ``u | A(mn + t')`` for every ``n`` and every ``t'`` in
the orbit ``P(t)`` once

* the six arithmetic conditions defining Delta* hold,
* ``p(gamma) + p'(gamma) >= 0`` on a full set of double-coset representatives
  of Gamma_0(N) \\ SL2(Z) / Gamma_inf, and
* the congruence holds for ``0 <= n <= floor(nu)``.

Everything below is exact rational arithmetic; nothing is rounded before
the final floor.  The representatives are ``[[1, 0], [delta, 1]]`` for
``delta | N``, which cover the double cosets when N or N/2 is square-free.

This module also checks the modular-function witness identities produced by
a Ramanujan-Kolberg search (see :func:`verify_witness`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

from .arith import divisors, factorize, index_gamma0, is_squarefree, squares_mod, valuation
from .errors import (
    CosetLemmaInapplicable,
    DeltaStarFailed,
    PositivityFailed,
    SpecMismatch,
    TruncationTooSmall,
)
from .qseries import (
    EtaQuotientSpec,
    FamilyParams,
    LaurentSeries,
    eta_expand,
    extract_ap,
    gf_family,
)

SPEC_CHECK_TERMS = 50


@dataclass(frozen=True)
class RaduTuple:
    m: int
    M: int
    N: int
    t: int
    r: EtaQuotientSpec
    rprime: EtaQuotientSpec

    def __post_init__(self):
        if min(self.m, self.M, self.N) < 1:
            raise ValueError("m, M and N must be positive")
        if not 0 <= self.t < self.m:
            raise ValueError(f"need 0 <= t < m, got t={self.t}, m={self.m}")
        if self.r.M != self.M:
            raise ValueError(f"r is indexed by divisors of {self.r.M}, expected M={self.M}")
        if self.rprime.M != self.N:
            raise ValueError(f"r' is indexed by divisors of {self.rprime.M}, expected N={self.N}")

    @classmethod
    def from_vectors(cls, m: int, M: int, N: int, t: int,
                     r: Sequence[int], rprime: Sequence[int]) -> "RaduTuple":
        return cls(m, M, N, t, EtaQuotientSpec(M, tuple(r)), EtaQuotientSpec(N, tuple(rprime)))

    @property
    def k(self) -> int:
        return math.gcd(self.m * self.m - 1, 24)

    def to_dict(self) -> dict:
        return {"m": self.m, "M": self.M, "N": self.N, "t": self.t,
                "r": list(self.r.r), "rprime": list(self.rprime.r), "k": self.k}


@dataclass(frozen=True)
class Condition:
    index: int
    passed: bool
    detail: str


def check_delta_star(tu: RaduTuple) -> list[Condition]:
    """Evaluate the six Delta* conditions on ``(m, M, N, t, r)``."""
    m, N, t, k = tu.m, tu.N, tu.t, tu.k
    items = tu.r.items()
    out = []

    missing = sorted(p for p in factorize(m) if N % p) if m > 1 else []
    out.append(Condition(1, not missing,
                         f"primes of m={m} not dividing N={N}: {missing}" if missing
                         else f"every prime dividing m={m} divides N={N}"))

    bad = [d for d, e in items if e and (m * N) % d]
    out.append(Condition(2, not bad, f"delta with r_delta != 0 not dividing mN={m * N}: {bad}"))

    s3 = k * N * sum(Fraction(e * m * N, d) for d, e in items)
    ok3 = s3.denominator == 1 and s3.numerator % 24 == 0
    out.append(Condition(3, ok3, f"k N sum r_delta mN/delta = {s3}; divisible by 24: {ok3}"))

    s4 = k * N * sum(e for _, e in items)
    out.append(Condition(4, s4 % 8 == 0, f"k N sum r_delta = {s4}; divisible by 8: {s4 % 8 == 0}"))

    g = math.gcd(-24 * k * t - k * tu.r.weight_sum(), 24 * m)
    q5 = 24 * m // g
    out.append(Condition(5, N % q5 == 0, f"24m / gcd(-24kt - k sum delta r_delta, 24m) = {q5}; divides N: {N % q5 == 0}"))

    if m % 2:
        out.append(Condition(6, True, "m odd: condition applies only to even m"))
    else:
        # prod delta^|r_delta| = 2^s * j, j odd; only j mod 8 matters
        s = sum(abs(e) * valuation(d, 2) for d, e in items)
        j8 = 1
        for d, e in items:
            odd = d >> valuation(d, 2)
            j8 = j8 * pow(odd, abs(e), 8) % 8
        first = (k * N) % 4 == 0 and (s * N) % 8 == 0
        second = s % 2 == 0 and ((1 - j8) * N) % 8 == 0
        out.append(Condition(6, first or second,
                             f"s={s}, j={j8} (mod 8); [4|kN and 8|sN]={first}; [2|s and 8|(1-j)N]={second}"))
    return out


@dataclass(frozen=True)
class PtResult:
    values: frozenset[int]
    flagged: tuple[int, ...] = ()  # square classes s where 24 does not divide (s-1) sum delta r_delta


def compute_Pt(tu: RaduTuple) -> PtResult:
    """Orbit of ``t`` under ``t -> t s + (s - 1)/24 * sum delta r_delta (mod m)``, s in S_{24m}."""
    m, t = tu.m, tu.t
    w = tu.r.weight_sum()
    values, flagged = set(), []
    for s in sorted(squares_mod(24 * m)):
        num = (s - 1) * w
        if num % 24:
            flagged.append(s)
            continue
        values.add((t * s + num // 24) % m)
    return PtResult(frozenset(values), tuple(flagged))


def p_gamma(tu: RaduTuple, delta: int) -> Fraction:
    """p at the representative [[1, 0], [delta, 1]] (a = 1, c = delta)."""
    m, k, c = tu.m, tu.k, delta
    best = None
    for lam in range(m):
        val = sum(
            Fraction(e * math.gcd(d * (1 + k * lam * c), m * c) ** 2, d * m)
            for d, e in tu.r.items()
        ) / 24
        best = val if best is None else min(best, val)
    return best


def p_prime_gamma(tu: RaduTuple, delta: int) -> Fraction:
    """p' at the representative [[1, 0], [delta, 1]] (c = delta)."""
    return sum((Fraction(e * math.gcd(d, delta) ** 2, d) for d, e in tu.rprime.items()), Fraction(0)) / 24


def compute_nu(tu: RaduTuple, t_min: int) -> tuple[Fraction, int]:
    idx = index_gamma0(tu.N)
    total = sum(tu.r.r) + sum(tu.rprime.r)
    nu = Fraction(total * idx - tu.rprime.weight_sum(), 24) - Fraction(tu.r.weight_sum(), 24 * tu.m) \
        - Fraction(t_min, tu.m)
    return nu, math.floor(nu)


@dataclass
class RaduCertificate:
    tuple: RaduTuple
    u: int
    family: FamilyParams | None
    conditions: list[Condition] = field(default_factory=list)
    Pt: frozenset[int] = frozenset()
    Pt_flagged: tuple[int, ...] = ()
    coset_report: dict[int, Fraction] = field(default_factory=dict)
    nu: Fraction | None = None
    floor_nu: int | None = None
    stated_floor_nu: int | None = None
    check_bound: int | None = None
    finite_check: bool | None = None
    counterexample: dict | None = None

    @property
    def delta_star(self) -> bool:
        return bool(self.conditions) and all(c.passed for c in self.conditions)

    @property
    def positivity(self) -> bool:
        return bool(self.coset_report) and all(v >= 0 for v in self.coset_report.values())

    @property
    def overall(self) -> bool:
        return self.delta_star and self.positivity and bool(self.finite_check)

    def to_dict(self) -> dict:
        return {
            "tuple": self.tuple.to_dict(),
            "u": self.u,
            "family": None if self.family is None else self.family.to_dict(),
            "conditions": [{"index": c.index, "passed": c.passed, "detail": c.detail} for c in self.conditions],
            "P_t": sorted(self.Pt),
            "P_t_flagged_s": list(self.Pt_flagged),
            "coset_report": {str(d): str(v) for d, v in self.coset_report.items()},
            "nu": None if self.nu is None else str(self.nu),
            "floor_nu": self.floor_nu,
            "stated_floor_nu": self.stated_floor_nu,
            "check_bound": self.check_bound,
            "finite_check": self.finite_check,
            "counterexample": self.counterexample,
            "overall": self.overall,
        }


def certify(tu: RaduTuple, u: int, family: FamilyParams | None = None,
            stated_floor_nu: int | None = None) -> RaduCertificate:
    """Assemble and check a full certificate for ``u | A(mn + t')``, t' in P(t).

    Raises a :class:`~regover.errors.CertificateError` subclass (carrying the
    partial certificate) when a hypothesis fails before the finite check.
    """
    cert = RaduCertificate(tu, u, family, stated_floor_nu=stated_floor_nu)
    if family is not None:
        expected = gf_family(family, SPEC_CHECK_TERMS)
        got = eta_expand(tu.r, SPEC_CHECK_TERMS)
        if expected != got:
            raise SpecMismatch(f"r does not expand to the generating function of {family.label()}", cert)
    if not (is_squarefree(tu.N) or (tu.N % 2 == 0 and is_squarefree(tu.N // 2))):
        raise CosetLemmaInapplicable(f"neither N={tu.N} nor N/2 is square-free", cert)

    cert.conditions = check_delta_star(tu)
    if not cert.delta_star:
        failed = [c.index for c in cert.conditions if not c.passed]
        raise DeltaStarFailed(f"Delta* conditions {failed} fail", cert)

    pt = compute_Pt(tu)
    cert.Pt, cert.Pt_flagged = pt.values, pt.flagged
    cert.coset_report = {d: p_gamma(tu, d) + p_prime_gamma(tu, d) for d in divisors(tu.N)}
    if not cert.positivity:
        bad = [d for d, v in cert.coset_report.items() if v < 0]
        raise PositivityFailed(f"p + p' < 0 at delta in {bad}", cert)

    cert.nu, cert.floor_nu = compute_nu(tu, min(cert.Pt))
    bound = max(cert.floor_nu, stated_floor_nu if stated_floor_nu is not None else cert.floor_nu, 0)
    cert.check_bound = bound
    top = tu.m * bound + max(cert.Pt)
    series = eta_expand(tu.r, top, modulus=u)
    cert.finite_check = True
    for tp in sorted(cert.Pt):
        for n in range(bound + 1):
            res = series[tu.m * n + tp] % u
            if res:
                cert.finite_check = False
                cert.counterexample = {"t_prime": tp, "n": n, "index": tu.m * n + tp, "residue": res}
                return cert
    return cert


def certificate_from_record(rec: Mapping) -> tuple[RaduTuple, int, FamilyParams | None, int | None]:
    """Parse ``{m, M, N, t, r, rprime, u, family, stated_floor_nu?}``."""
    try:
        tu = RaduTuple.from_vectors(rec["m"], rec["M"], rec["N"], rec["t"], rec["r"], rec["rprime"])
        family = FamilyParams.from_dict(rec["family"]) if rec.get("family") else None
        return tu, int(rec["u"]), family, rec.get("stated_floor_nu")
    except KeyError as exc:
        raise ValueError(f"certificate record is missing field {exc}") from None


def shipped_certificate(name: str) -> dict:
    text = resources.files("regover.data").joinpath("certs", f"{name}.json").read_text()
    return json.loads(text)


# modular-function witnesses


@dataclass(frozen=True)
class WitnessSpec:
    """``q^prefactor_shift * prefactor * sum A(mn + t) q^n = sum_g g * p_g(t_fn)``.

    ``t_fn`` is ``q^t_shift`` times an eta quotient.  ``poly`` lists the
    coefficients of p_1 in increasing degree; the group basis is {1}.
    """

    family: FamilyParams
    m: int
    t: int
    prefactor: EtaQuotientSpec
    prefactor_shift: int
    t_fn: EtaQuotientSpec
    t_shift: int
    poly: tuple[int, ...]
    group_basis: tuple[int, ...] = (1,)
    N: int | None = None

    @classmethod
    def from_dict(cls, d: Mapping) -> "WitnessSpec":
        return cls(
            family=FamilyParams.from_dict(d["family"]),
            m=d["m"],
            t=d["t"],
            prefactor=EtaQuotientSpec.from_dict(d["prefactor"]["M"], {int(k): v for k, v in d["prefactor"]["r"].items()}),
            prefactor_shift=d["prefactor"]["shift"],
            t_fn=EtaQuotientSpec.from_dict(d["t_fn"]["M"], {int(k): v for k, v in d["t_fn"]["r"].items()}),
            t_shift=d["t_fn"]["shift"],
            poly=tuple(d["poly"]),
            group_basis=tuple(d.get("group_basis", (1,))),
            N=d.get("N"),
        )

    def with_poly(self, poly: Sequence[int]) -> "WitnessSpec":
        return WitnessSpec(self.family, self.m, self.t, self.prefactor, self.prefactor_shift,
                           self.t_fn, self.t_shift, tuple(poly), self.group_basis, self.N)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1


@dataclass(frozen=True)
class WitnessResult:
    passed: bool
    terms: int
    first_mismatch: int | None
    common_factor: int  # gcd of the polynomial coefficients
    rhs_content: int  # gcd of the expanded right side through q^terms

    def to_dict(self) -> dict:
        return {"passed": self.passed, "terms": self.terms, "first_mismatch": self.first_mismatch,
                "common_factor": self.common_factor, "rhs_content": self.rhs_content}


def shipped_witness(name: str) -> WitnessSpec:
    text = resources.files("regover.data").joinpath("witnesses", f"{name}.json").read_text()
    return WitnessSpec.from_dict(json.loads(text))


def witness_sides(w: WitnessSpec, T: int) -> tuple[LaurentSeries, LaurentSeries]:
    """Both sides as Laurent series known through ``q^T``."""
    if w.group_basis != (1,):
        raise NotImplementedError("only the trivial group basis {1} is supported")
    if w.prefactor_shift > 0 or w.t_shift > 0:
        raise ValueError("monomial shifts are expected to be nonpositive")
    # working order so every product is still exact at q^T
    pre_depth = -w.prefactor_shift
    t_depth = -w.t_shift * w.degree
    if T < 0:
        raise TruncationTooSmall("T must be nonnegative")
    work = T + max(pre_depth, t_depth)

    source = gf_family(w.family, w.m * work + w.t)
    lhs = LaurentSeries(eta_expand(w.prefactor, work) * extract_ap(source, w.m, w.t), w.prefactor_shift)

    tf = LaurentSeries(eta_expand(w.t_fn, work), w.t_shift)
    rhs = LaurentSeries.constant(w.poly[0], work)
    power = LaurentSeries.constant(1, work)
    for c in w.poly[1:]:
        power = power * tf
        rhs = rhs + c * power
    return lhs, rhs


def verify_witness(w: WitnessSpec, T: int) -> WitnessResult:
    """Compare both sides of the witness identity exactly through ``q^T``."""
    lhs, rhs = witness_sides(w, T)
    lo = min(lhs.valuation, rhs.valuation)
    if lhs.top < T or rhs.top < T:
        raise TruncationTooSmall(f"sides are only known through q^{min(lhs.top, rhs.top)}")
    a, b = lhs.coefficients(lo, T), rhs.coefficients(lo, T)
    bad = next((lo + i for i, (x, y) in enumerate(zip(a, b)) if x != y), None)
    content = 0
    for x in b:
        content = math.gcd(content, x)
    factor = 0
    for c in w.poly:
        factor = math.gcd(factor, c)
    return WitnessResult(bad is None, T, bad, factor, content)
