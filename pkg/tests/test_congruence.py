import json

import pytest
from hypothesis import given, settings, strategies as st

from regover.arith import divisor_stats
from regover.congruence import (
    ClaimFileError,
    CongruenceClaim,
    builtin_claims,
    check_mod4,
    classify_mod4,
    default_bound,
    load_claims,
    mod4_case,
    mod4_from_divisors,
    mod8_admissible,
    scan_conjecture,
    verify_claim,
    verify_claims,
    verify_mod8_family,
)
from regover.enumeration import ClassSpec, count_class
from regover.errors import BadPrime, InadmissibleR, TruncationTooSmall
from regover.qseries import FamilyParams, gf_family

R23 = FamilyParams("Rbar", 2, 3)


def test_claim_passes():
    res = verify_claim(CongruenceClaim(R23, 3, 2, 2, 50))
    assert res.passed and res.to_dict()["status"] == "pass"


def test_claim_fails_at_zero():
    res = verify_claim(CongruenceClaim(R23, 3, 0, 7, 50))
    assert not res.passed
    assert res.n == 0 and res.residue == 1
    assert res.to_dict()["counterexample"] == {"n": 0, "index": 0, "residue": 1}


def test_claim_truncation():
    series = gf_family(R23, 20)
    with pytest.raises(TruncationTooSmall):
        verify_claim(CongruenceClaim(R23, 3, 2, 2, 50), series)


def test_claim_incompatible_modulus():
    series = gf_family(R23, 200, modulus=4)
    with pytest.raises(ValueError):
        verify_claim(CongruenceClaim(R23, 3, 2, 3, 50), series)


def test_claim_validation():
    with pytest.raises(ValueError):
        CongruenceClaim(R23, 3, 3, 2, 10)
    with pytest.raises(ValueError):
        CongruenceClaim(R23, 3, 1, 1, 10)


def test_default_bound():
    assert default_bound(24) == 500
    assert default_bound(25) == 100


def test_builtin_claims_shape():
    claims = builtin_claims()
    assert len(claims) == 26
    assert len({c.label for c in claims}) == 26


def test_builtin_claims_against_enumeration():
    # independent oracle on the first few terms of every progression
    for claim in builtin_claims():
        f = claim.family
        spec = ClassSpec(f.kind, f.l, f.mu if f.kind == "Rbar" else 0)
        for n in range(3):
            idx = claim.m * n + claim.t
            if idx > 40:
                break
            assert count_class(spec, idx) % claim.u == 0, (claim.label, n)


def test_batch_keeps_order():
    claims = [CongruenceClaim(R23, 3, 0, 7, 10), CongruenceClaim(R23, 3, 2, 2, 10),
              CongruenceClaim(FamilyParams("RbarStar", 6), 3, 2, 4, 10)]
    assert [r.passed for r in verify_claims(claims)] == [False, True, True]
    assert [r.claim for r in verify_claims(claims)] == claims


# claim files


def test_load_claims_roundtrip():
    claims = builtin_claims(bound_override=5)
    text = json.dumps([c.to_dict() for c in claims])
    assert load_claims(text) == claims


def test_claim_file_missing_field():
    text = json.dumps([{"family": {"kind": "Rbar", "l": 2}, "m": 3, "t": 2, "u": 2}])
    with pytest.raises(ClaimFileError, match=r"claims\[0\]\.family: missing field 'mu'"):
        load_claims(text)


def test_claim_file_bad_json():
    with pytest.raises(ClaimFileError, match="line 1"):
        load_claims("[{")


def test_claim_file_bad_type():
    text = json.dumps([{"family": {"kind": "Rbar", "l": 2, "mu": 3}, "m": "3", "t": 2, "u": 2}])
    with pytest.raises(ClaimFileError, match=r"claims\[0\]\.m"):
        load_claims(text)


# mod 4


def test_mod4_cases():
    assert mod4_case(4, 3) == "i"
    assert mod4_case(3, 4) == "i"
    assert mod4_case(4, 9) == "ii"
    assert mod4_case(2, 3) == "iii"


@pytest.mark.parametrize("l, mu, n, expected", [(4, 3, 1, 2), (4, 3, 4, 0), (2, 3, 6, 2), (2, 3, 5, 0)])
def test_classify_examples(l, mu, n, expected):
    assert classify_mod4(l, mu, n).predicted == expected


@pytest.mark.parametrize("l, mu", [(4, 3), (3, 4), (4, 9), (2, 3), (3, 5), (9, 2)])
def test_check_mod4(l, mu):
    assert check_mod4(l, mu, 300).passed


def test_classify_strict_when_root_not_prime_power():
    # sqrt(36) = 6: the literal coprimality test disagrees with the divisor count
    report = check_mod4(36, 5, 200)
    assert not report.passed
    assert all(m["series"] == m["delta"] for m in report.mismatches)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(2, 12), st.integers(1, 40))
def test_delta_parity_matches_enumeration_oracle(l, mu, n):
    import math

    if math.gcd(l, mu) != 1:
        return
    assert count_class(ClassSpec("Rbar", l, mu), n) % 4 == mod4_from_divisors(l, mu, n)
    assert divisor_stats(n, l, mu).n == n


# mod 8


def test_mod8_admissible_sets():
    assert mod8_admissible(5) == {2, 4}
    assert mod8_admissible(7) == {2, 3, 5}
    assert mod8_admissible(11) == {1, 4, 8, 9, 10}


def test_mod8_errors():
    with pytest.raises(BadPrime):
        mod8_admissible(3)
    with pytest.raises(BadPrime):
        mod8_admissible(9)
    with pytest.raises(InadmissibleR):
        verify_mod8_family(5, 1, 10)


def test_mod8_family_passes():
    assert verify_mod8_family(5, 2, 100).passed
    assert verify_mod8_family(7, 5, 50).passed


def test_mod8_inadmissible_r_really_fails():
    # r=1 for p=5 is not merely unproved: the progression has a nonzero residue mod 8
    claim = CongruenceClaim(FamilyParams("RbarStar", 6), 15, 5, 8, 100)
    assert not verify_claim(claim).passed


# scan


def test_scan_counts():
    assert len(scan_conjecture(2, 10).entries) == 2
    report = scan_conjecture(5, 20)
    assert len(report.entries) == 14
    assert not report.counterexamples
    assert report.to_dict()["entries"][0]["progression"] == "8n+4"


def test_scan_rejects_small_lmax():
    with pytest.raises(ValueError):
        scan_conjecture(1, 10)
