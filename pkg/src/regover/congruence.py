"""Bounded verification of congruences for Rbar_{l,mu} and Rbar*_l.

All checks expand the generating function modulo the claimed modulus and
inspect a finite stretch of an arithmetic progression.  A pass means "no
counterexample up to the bound", nothing more.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

from .arith import divisor_stats, inv_mod, is_prime, is_qnr, is_square
from .errors import BadPrime, InadmissibleR, TruncationTooSmall
from .qseries import FamilyParams, Series, gf_family

SMALL_STEP_MAX = 24
SMALL_STEP_BOUND = 500
LARGE_STEP_BOUND = 100


def default_bound(m: int, small_step_max: int = SMALL_STEP_MAX,
                  small: int = SMALL_STEP_BOUND, large: int = LARGE_STEP_BOUND) -> int:
    return small if m <= small_step_max else large


@dataclass(frozen=True)
class CongruenceClaim:
    """``u | a(m n + t)`` for ``n_min <= n <= bound``."""

    family: FamilyParams
    m: int
    t: int
    u: int
    bound: int
    n_min: int = 0
    label: str = ""

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.t < self.m:
            raise ValueError(f"need 0 <= t < m, got m={self.m}, t={self.t}")
        if self.u < 2:
            raise ValueError(f"modulus must be at least 2, got {self.u}")
        if self.bound < 0 or self.n_min < 0:
            raise ValueError("bounds must be nonnegative")

    @property
    def top_index(self) -> int:
        return self.m * self.bound + self.t

    def describe(self) -> str:
        return f"{self.family.label()}({self.m}n+{self.t}) = 0 (mod {self.u})"

    def to_dict(self) -> dict:
        d = {"family": self.family.to_dict(), "m": self.m, "t": self.t, "u": self.u, "bound": self.bound}
        if self.n_min:
            d["n_min"] = self.n_min
        if self.label:
            d["label"] = self.label
        return d


@dataclass(frozen=True)
class ClaimResult:
    claim: CongruenceClaim
    passed: bool
    n: int | None = None
    residue: int | None = None

    def to_dict(self) -> dict:
        out = {"claim": self.claim.to_dict(), "status": "pass" if self.passed else "fail"}
        if not self.passed:
            out["counterexample"] = {
                "n": self.n,
                "index": self.claim.m * self.n + self.claim.t,
                "residue": self.residue,
            }
        return out


def _check_progression(series: Series, m: int, t: int, u: int, lo: int, hi: int):
    """First n in [lo, hi] with a(mn+t) not divisible by u, with the residue."""
    for n in range(lo, hi + 1):
        r = series[m * n + t] % u
        if r:
            return n, r
    return None


def verify_claim(claim: CongruenceClaim, series: Series | None = None) -> ClaimResult:
    """Check ``claim`` against ``series`` (or a fresh expansion modulo ``u``)."""
    if series is None:
        series = gf_family(claim.family, claim.top_index, modulus=claim.u)
    if series.trunc < claim.top_index:
        raise TruncationTooSmall(
            f"need coefficients through q^{claim.top_index}, series stops at q^{series.trunc}"
        )
    if series.modulus is not None and series.modulus % claim.u:
        raise ValueError(f"series reduced mod {series.modulus} cannot decide divisibility by {claim.u}")
    bad = _check_progression(series, claim.m, claim.t, claim.u, claim.n_min, claim.bound)
    if bad is None:
        return ClaimResult(claim, True)
    return ClaimResult(claim, False, *bad)


def verify_claims(claims: Sequence[CongruenceClaim]) -> list[ClaimResult]:
    """Verify a batch, sharing one expansion per family; results keep input order."""
    groups: dict[FamilyParams, list[CongruenceClaim]] = {}
    for c in claims:
        groups.setdefault(c.family, []).append(c)
    series: dict[FamilyParams, Series] = {}
    for fam, group in groups.items():
        T = max(c.top_index for c in group)
        modulus = math.lcm(*(c.u for c in group))
        series[fam] = gf_family(fam, T, modulus=modulus)
    return [verify_claim(c, series[c.family]) for c in claims]


# claim files


class ClaimFileError(ValueError):
    pass


def _field(rec: Mapping, key: str, where: str, kind=int, required=True):
    if key not in rec:
        if required:
            raise ClaimFileError(f"{where}: missing field '{key}'")
        return None
    value = rec[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise ClaimFileError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def claims_from_records(records, bound_override: int | None = None) -> list[CongruenceClaim]:
    if not isinstance(records, list):
        raise ClaimFileError("claim file: top level must be a list of claim records")
    out = []
    for i, rec in enumerate(records):
        where = f"claims[{i}]"
        if not isinstance(rec, dict):
            raise ClaimFileError(f"{where}: expected an object")
        fam = rec.get("family")
        if not isinstance(fam, dict):
            raise ClaimFileError(f"{where}.family: expected an object with kind, l, mu")
        kind = fam.get("kind")
        if kind not in ("Rbar", "RbarStar"):
            raise ClaimFileError(f"{where}.family.kind: expected 'Rbar' or 'RbarStar', got {kind!r}")
        l = _field(fam, "l", f"{where}.family")
        mu = _field(fam, "mu", f"{where}.family", required=kind == "Rbar")
        m = _field(rec, "m", where)
        t = _field(rec, "t", where)
        u = _field(rec, "u", where)
        bound = _field(rec, "bound", where, required=False)
        if bound_override is not None:
            bound = bound_override
        elif bound is None:
            bound = default_bound(m)
        n_min = _field(rec, "n_min", where, required=False) or 0
        try:
            out.append(CongruenceClaim(FamilyParams(kind, l, mu), m, t, u, bound, n_min,
                                       str(rec.get("label", ""))))
        except ValueError as exc:
            raise ClaimFileError(f"{where}: {exc}") from None
    return out


def load_claims(text: str, bound_override: int | None = None) -> list[CongruenceClaim]:
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ClaimFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return claims_from_records(records, bound_override)


def builtin_claims(bound_override: int | None = None) -> list[CongruenceClaim]:
    """The 26 congruences for Rbar_{l,mu} and Rbar*_l shipped with the package."""
    text = resources.files("regover.data").joinpath("claims.json").read_text()
    return load_claims(text, bound_override)


# mod 4


def mod4_case(l: int, mu: int) -> str:
    """'i' when exactly one of l, mu is a square, 'ii' when both are, 'iii' when neither."""
    a, b = is_square(l), is_square(mu)
    if a and b:
        return "ii"
    return "i" if a or b else "iii"


@dataclass(frozen=True)
class Mod4Class:
    case: str
    predicted: int


def classify_mod4(l: int, mu: int, n: int) -> Mod4Class:
    """Predicted Rbar_{l,mu}(n) mod 4 (0 or 2) from the square-class description.

    Case (i) is stated for square l; a square mu is handled by swapping the
    roles, the count being symmetric in (l, mu).  The coprimality condition
    "gcd(k, l) = 1" applies to both n = k^2 and n = mu k^2.  When the square
    root of l (or mu) is not a prime power this condition is stricter than
    the truth; :func:`mod4_from_divisors` is exact for all parameters.
    """
    if math.gcd(l, mu) != 1:
        raise ValueError(f"gcd({l}, {mu}) != 1")
    if n < 1:
        raise ValueError("n must be positive")
    case = mod4_case(l, mu)

    def square_root(x: int) -> int | None:
        return math.isqrt(x) if is_square(x) else None

    if case == "i":
        if not is_square(l):
            l, mu = mu, l
        hits = []
        k = square_root(n)
        if k is not None:
            hits.append(k)
        if n % mu == 0:
            k = square_root(n // mu)
            if k is not None:
                hits.append(k)
        two = any(math.gcd(k, l) == 1 for k in hits)
    elif case == "ii":
        k = square_root(n)
        two = k is not None and math.gcd(k, l * mu) == 1
    else:
        two = any(n % d == 0 and is_square(n // d) for d in (1, l, mu, l * mu))
    return Mod4Class(case, 2 if two else 0)


def mod4_from_divisors(l: int, mu: int, n: int) -> int:
    """Rbar_{l,mu}(n) mod 4 via the parity of the divisor statistic Delta(n, l, mu)."""
    return 2 if divisor_stats(n, l, mu).delta % 2 else 0


@dataclass
class Mod4Report:
    l: int
    mu: int
    n_max: int
    case: str
    mismatches: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"l": self.l, "mu": self.mu, "n_max": self.n_max, "case": self.case,
                "mismatches": self.mismatches, "passed": self.passed}


def check_mod4(l: int, mu: int, n_max: int) -> Mod4Report:
    """Compare both mod-4 predictions with the series residues for 1 <= n <= n_max."""
    series = gf_family(FamilyParams("Rbar", l, mu), n_max, modulus=4)
    report = Mod4Report(l, mu, n_max, mod4_case(l, mu))
    for n in range(1, n_max + 1):
        actual = series[n]
        by_case = classify_mod4(l, mu, n).predicted
        by_delta = mod4_from_divisors(l, mu, n)
        if not actual == by_case == by_delta:
            report.mismatches.append({"n": n, "series": actual, "classify": by_case, "delta": by_delta})
    return report


# mod 8 family for Rbar*_6


def mod8_admissible(p: int) -> frozenset[int]:
    """r in 1..p-1 with inv(3,p)*4*r + 1 a quadratic nonresidue mod p."""
    if p < 5 or not is_prime(p):
        raise BadPrime(f"p must be a prime >= 5, got {p}")
    c = inv_mod(3, p)
    return frozenset(r for r in range(1, p) if is_qnr(c * 4 * r + 1, p))


def verify_mod8_family(p: int, r: int, bound: int, series: Series | None = None) -> ClaimResult:
    """Check 8 | Rbar*_6(3(pn + r) + 2) for 0 <= n <= bound."""
    if r not in mod8_admissible(p):
        raise InadmissibleR(f"r={r} is not admissible for p={p}")
    # 3(pn + r) + 2 = 3p n + (3r + 2) with 3r + 2 < 3p
    claim = CongruenceClaim(FamilyParams("RbarStar", 6), 3 * p, 3 * r + 2, 8, bound,
                            label=f"Rbar*_6(3({p}n+{r})+2)")
    return verify_claim(claim, series)


# conjecture scan


@dataclass(frozen=True)
class ScanEntry:
    l: int
    k: int
    n_max: int
    counterexample: tuple[int, int, int] | None  # (n, index, residue)

    def to_dict(self) -> dict:
        d = {
            "l": self.l,
            "k": self.k,
            "progression": f"{4 * self.l}n+{4 * self.k}",
            "checked_n": [0, self.n_max],
            "status": "no counterexample <= bound" if self.counterexample is None else "counterexample",
        }
        if self.counterexample is not None:
            n, idx, res = self.counterexample
            d["counterexample"] = {"n": n, "index": idx, "residue": res}
        return d


@dataclass
class ScanReport:
    l_max: int
    n_max: int
    entries: list[ScanEntry]

    @property
    def counterexamples(self) -> list[ScanEntry]:
        return [e for e in self.entries if e.counterexample is not None]

    def to_dict(self) -> dict:
        return {
            "conjecture": "Rbar_{4,9}(4 l n + 4 k) = 0 (mod 6), l >= 2, 1 <= k <= l",
            "l_max": self.l_max,
            "n_max": self.n_max,
            "progressions": len(self.entries),
            "counterexamples": len(self.counterexamples),
            "entries": [e.to_dict() for e in self.entries],
        }


def scan_conjecture(l_max: int, n_max: int) -> ScanReport:
    """Scan 6 | Rbar_{4,9}(4ln + 4k) over 2 <= l <= l_max, 1 <= k <= l, 0 <= n <= n_max."""
    if l_max < 2:
        raise ValueError("l_max must be at least 2")
    top = 4 * l_max * n_max + 4 * l_max
    series = gf_family(FamilyParams("Rbar", 4, 9), top, modulus=6)
    entries = []
    for l in range(2, l_max + 1):
        for k in range(1, l + 1):
            found = None
            for n in range(n_max + 1):
                idx = 4 * l * n + 4 * k
                if series[idx] % 6:
                    found = (n, idx, series[idx] % 6)
                    break
            entries.append(ScanEntry(l, k, n_max, found))
    return ScanReport(l_max, n_max, entries)
