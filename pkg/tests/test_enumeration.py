import pytest

from regover.enumeration import (
    ClassSpec,
    Overpartition,
    count_class,
    count_overpartitions,
    iter_class,
    verify_seven_way,
)
from regover.errors import InapplicableClass
from regover.qseries import FamilyParams, Series, eta, gf_family


def test_overpartition_counts():
    assert [count_overpartitions(n) for n in range(6)] == [1, 2, 4, 8, 14, 24]


def test_overpartitions_match_eta_quotient():
    gf = eta({1: -2, 2: 1}, 30)
    assert gf.tolist() == [count_overpartitions(n) for n in range(31)]


def test_rbar_small_values():
    spec = ClassSpec("Rbar", 2, 3)
    assert [count_class(spec, n) for n in range(7)] == [1, 2, 2, 2, 2, 4, 6]


def test_rbarstar_listing():
    members = sorted(str(p) for p in iter_class(ClassSpec("RbarStar", 6), 2))
    assert len(members) == count_class(ClassSpec("RbarStar", 6), 2) == 4
    assert all(isinstance(p, Overpartition) for p in iter_class(ClassSpec("RbarStar", 6), 2))


@pytest.mark.parametrize("kind, l, mu", [("Rbar", 2, 3), ("A", 3, 4), ("B", 3, 5), ("D", 3, 4)])
def test_listing_agrees_with_count(kind, l, mu):
    spec = ClassSpec(kind, l, mu)
    for n in range(13):
        members = list(iter_class(spec, n))
        assert len(members) == len(set(members)) == count_class(spec, n)


def test_listing_limit():
    with pytest.raises(ValueError):
        list(iter_class(ClassSpec("Rbar", 2, 3), 31))


def test_overpartition_rejects_double_overline():
    with pytest.raises(ValueError):
        Overpartition(((2, True), (2, True)))


def _class_series(spec, n_max):
    return Series([count_class(spec, n) for n in range(n_max + 1)])


@pytest.mark.parametrize(
    "kind, l, mu",
    [("A", 2, 3), ("A", 3, 4), ("F", 2, 3), ("F", 3, 5), ("B", 3, 5), ("C", 3, 5),
     ("D", 3, 4), ("D", 5, 2), ("E", 3, 4), ("E", 5, 8)],
)
def test_class_generating_functions(kind, l, mu):
    # A and F at weight l*n, B-E at weight 2*n, versus the dilated family series
    spec = ClassSpec(kind, l, mu)
    N = 25
    scale = spec.weight_factor
    rbar = gf_family(FamilyParams("Rbar", l, mu), N).dilate(scale)
    counts = _class_series(spec, N)
    for n in range(0, N + 1, scale):
        assert counts[n] == rbar[n], (kind, n)


def test_parity_rbar():
    # overlined parts come in conjugate pairs, so the count is even for n >= 1
    spec = ClassSpec("Rbar", 3, 5)
    assert all(count_class(spec, n) % 2 == 0 for n in range(1, 30))


@pytest.mark.parametrize(
    "kind, l, mu",
    [("B", 2, 3), ("C", 5, 3), ("D", 2, 3), ("E", 5, 4), ("A", 2, 4), ("Rbar", 1, 3)],
)
def test_inapplicable(kind, l, mu):
    spec = ClassSpec(kind, l, mu)
    assert spec.applicability() is not None
    with pytest.raises(InapplicableClass):
        count_class(spec, 4)


def test_unknown_kind():
    with pytest.raises(ValueError):
        ClassSpec("G", 2, 3)


def test_literal_class_e_over_counts():
    assert count_class(ClassSpec("E_literal", 3, 4), 12) == 17
    assert count_class(ClassSpec("E", 3, 4), 12) == 16
    assert count_class(ClassSpec("Rbar", 3, 4), 6) == 16


@pytest.mark.parametrize("l, mu", [(2, 3), (3, 4), (3, 5), (2, 5), (4, 9)])
def test_seven_way(l, mu):
    report = verify_seven_way(l, mu, 10)
    assert report.passed, report.mismatches[:3]
    assert set(report.compared) | set(report.skipped) == set("ABCDEF")


def test_seven_way_skips():
    report = verify_seven_way(2, 3, 2)
    assert set(report.skipped) == {"B", "C", "D", "E"}
    assert report.to_dict()["mismatches"] == 0
