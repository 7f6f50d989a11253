from fractions import Fraction

import pytest

from regover.arith import divisors
from regover.enumeration import ClassSpec, count_class
from regover.errors import (
    CosetLemmaInapplicable,
    DeltaStarFailed,
    SpecMismatch,
)
from regover.qseries import FamilyParams, extract_ap, gf_family
from regover.radu import (
    RaduTuple,
    certificate_from_record,
    certify,
    check_delta_star,
    compute_nu,
    compute_Pt,
    p_gamma,
    p_prime_gamma,
    shipped_certificate,
    shipped_witness,
    verify_witness,
)

R35 = RaduTuple.from_vectors(9, 30, 30, 3, (-2, 1, 2, 2, -1, -1, -2, 1), (12,) + (0,) * 7)
R25 = RaduTuple.from_vectors(18, 20, 60, 9, (-2, 3, -1, 2, -3, 1), (54,) + (0,) * 11)


def test_k():
    assert R35.k == 8
    assert R25.k == 1


def test_delta_star_r35():
    conds = check_delta_star(R35)
    assert [c.index for c in conds] == [1, 2, 3, 4, 5, 6]
    assert all(c.passed for c in conds)


def test_delta_star_r25():
    assert all(c.passed for c in check_delta_star(R25))


def test_condition_one_fails():
    tu = RaduTuple.from_vectors(9, 30, 10, 3, (-2, 1, 2, 2, -1, -1, -2, 1), (0,) * 4)
    assert not check_delta_star(tu)[0].passed
    with pytest.raises(DeltaStarFailed) as info:
        certify(tu, 6)
    cert = info.value.certificate
    assert cert.finite_check is None and cert.check_bound is None


def test_pt():
    assert compute_Pt(R35).values == {3}
    assert compute_Pt(R25).values == {9}


def test_pt_trivial_modulus():
    tu = RaduTuple.from_vectors(1, 2, 2, 0, (-2, 1), (0, 0))
    assert compute_Pt(tu).values == {0}


@pytest.mark.parametrize("t", range(9))
def test_pt_contains_t(t):
    tu = RaduTuple.from_vectors(9, 30, 30, t, R35.r.r, R35.rprime.r)
    assert t in compute_Pt(tu).values


def test_p_prime():
    assert p_prime_gamma(R35, 1) == Fraction(1, 2)
    assert p_prime_gamma(R25, 1) == Fraction(9, 4)
    zero = RaduTuple.from_vectors(9, 30, 30, 3, R35.r.r, (0,) * 8)
    assert p_prime_gamma(zero, 1) == 0


@pytest.mark.parametrize("tu", [R35, R25])
def test_positivity(tu):
    assert all(p_gamma(tu, d) + p_prime_gamma(tu, d) >= 0 for d in divisors(tu.N))


@pytest.mark.parametrize("tu", [R35, R25])
def test_denominators(tu):
    bound = 24 * tu.m * tu.M * tu.N
    values = [p_gamma(tu, d) for d in divisors(tu.N)] + [p_prime_gamma(tu, d) for d in divisors(tu.N)]
    values.append(compute_nu(tu, tu.t)[0])
    assert all(bound % v.denominator == 0 for v in values)


def test_nu_zero_exponents():
    tu = RaduTuple.from_vectors(1, 1, 1, 0, (0,), (0,))
    assert compute_nu(tu, 0) == (Fraction(0), 0)


def test_nu_recomputed_values():
    assert compute_nu(R35, 3) == (Fraction(211, 6), 35)
    assert compute_nu(R25, 9) == (Fraction(1285, 4), 321)


def test_certify_r35():
    cert = certify(R35, 6, FamilyParams("Rbar", 3, 5), stated_floor_nu=101)
    assert cert.overall
    assert cert.check_bound == 101
    d = cert.to_dict()
    assert d["floor_nu"] == 35 and d["stated_floor_nu"] == 101


def test_certify_detects_false_congruence():
    cert = certify(R35, 7, FamilyParams("Rbar", 3, 5))
    assert not cert.overall and cert.counterexample is not None


def test_certify_spec_mismatch():
    with pytest.raises(SpecMismatch):
        certify(R35, 6, FamilyParams("Rbar", 2, 5))


def test_certify_coset_lemma():
    tu = RaduTuple.from_vectors(3, 1, 36, 0, (0,), (0,) * 9)
    with pytest.raises(CosetLemmaInapplicable):
        certify(tu, 2)


def test_shipped_records():
    tu, u, fam, stated = certificate_from_record(shipped_certificate("R35"))
    assert tu == R35 and u == 6 and fam == FamilyParams("Rbar", 3, 5) and stated == 101
    tu, u, fam, stated = certificate_from_record(shipped_certificate("R25"))
    assert tu == R25 and stated == 1322


def test_record_missing_field():
    rec = dict(shipped_certificate("R35"))
    del rec["rprime"]
    with pytest.raises(ValueError):
        certificate_from_record(rec)


# witness


def test_witness_passes():
    res = verify_witness(shipped_witness("cong-1"), 200)
    assert res.passed
    assert res.common_factor == 6 and res.rhs_content % 6 == 0


def test_witness_perturbed_fails_at_constant_term():
    w = shipped_witness("cong-1")
    res = verify_witness(w.with_poly((-5, -6, 6, 6)), 60)
    assert not res.passed and res.first_mismatch == 0


def test_witness_source_stream():
    w = shipped_witness("cong-1")
    stream = extract_ap(gf_family(w.family, 9 * 5 + 6), 9, 6)
    assert stream.tolist() == [count_class(ClassSpec("Rbar", 2, 3), 9 * n + 6) for n in range(6)]
