"""Brute-force counting of overpartitions and of the classes A-F.

Every class is described by a per-part-size rule giving the allowed
multiplicities of that size and the number of ways each multiplicity can be
realised (2 for an overpartition part that may or may not carry an overline,
1 otherwise).  Counting recurses over part sizes, so nothing here touches
the power-series code: it is the independent oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from .errors import InapplicableClass

CLASS_KINDS = ("Rbar", "RbarStar", "A", "B", "C", "D", "E", "F", "E_literal")
LISTING_LIMIT = 30

# (multiplicity, number of realisations) for one part size
Choices = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Overpartition:
    parts: tuple[tuple[int, bool], ...]

    def __post_init__(self):
        seen = set()
        for size, over in self.parts:
            if size < 1:
                raise ValueError("parts must be positive")
            if over:
                if size in seen:
                    raise ValueError(f"part {size} is overlined twice")
                seen.add(size)

    @property
    def weight(self) -> int:
        return sum(size for size, _ in self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(f"{s}̅" if o else str(s) for s, o in self.parts) + ")"


@dataclass(frozen=True)
class ClassSpec:
    kind: str
    l: int
    mu: int = 0

    def __post_init__(self):
        if self.kind not in CLASS_KINDS:
            raise ValueError(f"unknown class {self.kind!r}")

    def applicability(self) -> str | None:
        """Reason the class is not defined for (l, mu), or None if it is."""
        l, mu = self.l, self.mu
        if l < 2:
            return f"l={l} must be at least 2"
        if self.kind == "RbarStar":
            return None
        if mu < 2:
            return f"mu={mu} must be at least 2"
        if math.gcd(l, mu) != 1:
            return f"gcd({l}, {mu}) != 1"
        both_odd = l % 2 == 1 and mu % 2 == 1
        if self.kind == "B" and not both_odd:
            return "B needs l and mu odd"
        if self.kind == "C" and not (both_odd and l < mu):
            return "C needs l and mu odd with l < mu"
        if self.kind == "D" and mu % 2:
            return "D needs mu even"
        if self.kind in ("E", "E_literal") and not (mu % 2 == 0 and l < mu):
            return "E needs mu even with l < mu"
        return None

    def check(self) -> None:
        reason = self.applicability()
        if reason:
            raise InapplicableClass(f"{self.kind}_{{{self.l},{self.mu}}}: {reason}")

    @property
    def weight_factor(self) -> int:
        """Class weight compared against Rbar(n): l*n for A and F, 2*n for B-E."""
        if self.kind in ("A", "F"):
            return self.l
        return 1 if self.overlined else 2

    @property
    def overlined(self) -> bool:
        return self.kind in ("Rbar", "RbarStar")


def _free(s: int, n: int, ways: int = 1) -> Choices:
    return ((0, 1),) + tuple((k, ways) for k in range(1, n // s + 1))


def _even(s: int, n: int, cap: int | None = None) -> Choices:
    top = n // s if cap is None else min(cap, n // s)
    return tuple((k, 1) for k in range(0, top + 1, 2))


def _upto(s: int, n: int, cap: int) -> Choices:
    return tuple((k, 1) for k in range(0, min(cap, n // s) + 1))


def _only(s: int, n: int, *ks: int) -> Choices:
    return tuple((k, 1) for k in ks if k * s <= n)


def part_rule(spec: ClassSpec) -> Callable[[int, int], Choices]:
    """Rule ``(part size, total weight) -> allowed (multiplicity, ways)``."""
    l, mu = spec.l, spec.mu
    kind = spec.kind

    def rule(s: int, n: int) -> Choices:
        if kind == "Rbar":
            return _only(s, n, 0) if s % l == 0 or s % mu == 0 else _free(s, n, 2)
        if kind == "RbarStar":
            # a multiple of l may only appear overlined, hence at most once
            return _only(s, n, 0, 1) if s % l == 0 else _free(s, n, 2)
        if kind == "A":
            if s % mu == 0:
                return _only(s, n, 0)
            return _upto(s, n, l - 1) if s % l == 0 else _only(s, n, 0, l)
        if kind == "B":
            if s % l == 0 or s % mu == 0:
                return _only(s, n, 0)
            return _even(s, n) if s % 2 else _free(s, n)
        if kind == "C":
            if s % mu == 0:
                return _only(s, n, 0)
            return _even(s, n, 2 * (l - 1)) if s % 2 else _upto(s, n, l - 1)
        if kind == "D":
            if s % l == 0 or s % (2 * mu) == 0:
                return _only(s, n, 0)
            if s % (2 * mu) == mu:
                return _only(s, n, 0, 1)
            return _even(s, n) if s % 2 else _free(s, n)
        if kind in ("E", "E_literal"):
            if s % (2 * mu) == 0:
                return _only(s, n, 0)
            # The generating function excludes multiples of l*mu as well;
            # E_literal keeps them and over-counts (first at l=3, mu=4, n=12).
            if kind == "E" and s % (l * mu) == 0:
                return _only(s, n, 0)
            if s % 2:
                return _even(s, n, 2 * (l - 1))
            if s % (2 * mu) == mu:
                return _only(s, n, 0, 1)
            return _upto(s, n, l - 1)
        if kind == "F":
            if s % (l * l) == 0 or s % mu == 0:
                return _only(s, n, 0)
            return _free(s, n) if s % l == 0 else _only(s, n, 0, l)
        raise AssertionError(kind)

    return rule


def _count(rule: Callable[[int, int], Choices], n: int) -> int:
    if n == 0:
        return 1
    choices = {s: rule(s, n) for s in range(1, n + 1)}

    @lru_cache(maxsize=None)
    def go(remaining: int, s: int) -> int:
        # parts of size >= s still to place, total `remaining`
        if remaining == 0:
            return 1
        if s > remaining:
            return 0
        total = 0
        for k, ways in choices[s]:
            if k * s > remaining:
                break
            total += ways * go(remaining - k * s, s + 1)
        return total

    return go(n, 1)


def count_class(spec: ClassSpec, n: int) -> int:
    """Number of partitions of weight ``n`` in the class.

    ``n`` is the class's own weight: pass ``l*k`` for A and F, ``2*k`` for B-E
    to compare against Rbar(k).
    """
    spec.check()
    if n < 0:
        raise ValueError("weight must be nonnegative")
    return _count(part_rule(spec), n)


def count_overpartitions(n: int) -> int:
    return _count(lambda s, w: _free(s, w, 2), n)


def iter_class(spec: ClassSpec, n: int) -> Iterator[tuple]:
    """List the members of a class (debugging aid, weight at most 30).

    Overpartition classes yield :class:`Overpartition`; the plain classes
    yield partitions as non-increasing tuples.
    """
    spec.check()
    if n > LISTING_LIMIT:
        raise ValueError(f"listing is limited to weight <= {LISTING_LIMIT}")
    rule = part_rule(spec)

    def go(remaining: int, s: int):
        if remaining == 0:
            yield ()
            return
        if s > remaining:
            return
        for k, ways in rule(s, n):
            if k * s > remaining:
                break
            for rest in go(remaining - k * s, s + 1):
                if k == 0:
                    yield rest
                    continue
                for over in ((False, True) if ways == 2 else (spec.overlined and s % spec.l == 0,)):
                    yield rest + ((s, over, k),)

    for combo in go(n, 1):
        ordered = sorted(combo, key=lambda x: -x[0])
        if spec.overlined:
            parts = []
            for s, over, k in ordered:
                parts.append((s, over))
                parts.extend([(s, False)] * (k - 1))
            yield Overpartition(tuple(parts))
        else:
            yield tuple(s for s, _, k in ordered for _ in range(k))


@dataclass(frozen=True)
class Comparison:
    kind: str
    weight: int
    n: int
    count: int
    rbar: int

    @property
    def ok(self) -> bool:
        return self.count == self.rbar


@dataclass
class SevenWayReport:
    l: int
    mu: int
    n_max: int
    compared: list[str] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    comparisons: list[Comparison] = field(default_factory=list)

    @property
    def mismatches(self) -> list[Comparison]:
        return [c for c in self.comparisons if not c.ok]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "mu": self.mu,
            "n_max": self.n_max,
            "compared": self.compared,
            "skipped": self.skipped,
            "comparisons": [
                {"class": c.kind, "weight": c.weight, "n": c.n, "count": c.count, "rbar": c.rbar}
                for c in self.comparisons
            ],
            "mismatches": len(self.mismatches),
            "passed": self.passed,
        }


def verify_seven_way(l: int, mu: int, n_max: int) -> SevenWayReport:
    """Compare each applicable class A-F at its own weight against Rbar_{l,mu}(n)."""
    if math.gcd(l, mu) != 1:
        raise ValueError(f"gcd({l}, {mu}) != 1")
    report = SevenWayReport(l, mu, n_max)
    rbar = ClassSpec("Rbar", l, mu)
    specs = []
    for kind in "ABCDEF":
        spec = ClassSpec(kind, l, mu)
        reason = spec.applicability()
        if reason:
            report.skipped[kind] = reason
        else:
            report.compared.append(kind)
            specs.append(spec)
    for n in range(n_max + 1):
        target = count_class(rbar, n)
        for spec in specs:
            w = spec.weight_factor * n
            report.comparisons.append(Comparison(spec.kind, w, n, count_class(spec, w), target))
    return report
