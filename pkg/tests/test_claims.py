"""Claim-level verifications against independent oracles."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from psiverify.claims import (
    CLAIM_IDS,
    ClaimResult,
    VerifyConfig,
    champion_scan,
    claim_description,
    mertens_limit_trend,
    reduction_check,
    required_table_limit,
    run_claims,
    verify_lower,
    verify_upper,
)
from psiverify.errors import RangeError, UnknownClaimError


def brute_psi_ratio(n: int) -> Fraction:
    out = Fraction(1)
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out *= Fraction(p + 1, p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out *= Fraction(m + 1, m)
    return out


def brute_champions(limit: int) -> list[int]:
    best = Fraction(1)
    out = []
    for n in range(2, limit + 1):
        q = brute_psi_ratio(n)
        if q > best:
            out.append(n)
            best = q
    return out


def test_champions_tiny_limits():
    assert champion_scan(5).details["champions"] == [2]
    assert champion_scan(6).details["champions"] == [2, 6]
    assert champion_scan(4).details["champions"] == [2]  # psi(4)/4 ties psi(2)/2


def test_champions_match_brute_force_oracle():
    res = champion_scan(2000)
    assert res.details["champions"] == brute_champions(2000)
    assert res.holds


def test_champions_equal_primorials_to_1e4():
    res = champion_scan(10**4)
    assert res.holds
    assert res.details["champions"] == [2, 6, 30, 210, 2310]
    assert res.details["champions"] == res.details["primorials"]


def test_reduction_exhaustive_n3(table):
    res = reduction_check(3, None, table=table)
    assert res.holds
    assert res.covered["checked"] == 180  # all of [30, 210)
    assert res.covered["m"] == [30, 209]
    assert res.details["psi_ratio"] == [3 * 4 * 6, 30]


def test_reduction_equality_branch(table):
    # m = N_n itself is included and holds with equality
    res = reduction_check(2, None, table=table)
    assert res.covered["m"][0] == 6
    assert res.holds


def test_reduction_sampled_deterministic(table):
    a = reduction_check(5, 10**4, table=table, seed=7)
    b = reduction_check(5, 10**4, table=table, seed=7)
    assert a.holds and b.holds
    assert a.to_dict() == b.to_dict()


def test_reduction_oracle_on_block(table):
    # independent: exhaustive Fractions over [N_4, N_5)
    best = brute_psi_ratio(210)
    assert all(brute_psi_ratio(m) <= best for m in range(210, 2310))
    assert reduction_check(4, None, table=table).holds


def test_reduction_validation(table):
    with pytest.raises(RangeError):
        reduction_check(1, None, table=table)


def test_verify_upper(table):
    res = verify_upper(table)
    assert res.holds
    a = res.details["a"]
    assert a["counterexamples"] == []
    assert 30 in a["witnesses_below_31"]
    assert 7 not in a["witnesses_below_31"]  # R(7) < e^gamma already
    assert a["witness_30"] is True
    b = res.details["b"]
    assert b["counterexamples"] == []
    assert b["worst_at"] == 4  # margin is thinnest right at the start
    c = res.details["c"]
    assert c["counterexamples"] == []
    assert c["threshold_margin"][0] < 0  # lhs - zeta(2) stays negative


def test_verify_lower_shallow(table):
    res = verify_lower(table, 2000, checkpoints=(10, 100, 1000))
    assert res.holds
    assert res.details["dual_mismatch"] == []
    assert res.details["margins_decreasing"] is True
    assert res.details["min_margin"] > 0
    margins = res.details["checkpoint_margins"]
    assert set(margins) == {"10", "100", "1000"}
    assert margins["10"][0] > margins["100"][0] > margins["1000"][0] > 0


def test_verify_lower_validation(table):
    with pytest.raises(RangeError):
        verify_lower(table, 2)


def test_mertens_trend(table):
    res = mertens_limit_trend(table, (10, 100, 1000))
    assert res.holds
    m = res.details["margins"]
    assert m["10"][0] > m["100"][0] > m["1000"][0] > 0
    # frozen from the first run: R(N_10) - e^gamma/zeta(2) = 0.1608...
    assert m["10"][0] == pytest.approx(0.16082, abs=1e-4)


def test_mertens_trend_validation(table):
    with pytest.raises(RangeError):
        mertens_limit_trend(table, (table.count * 2,))


def test_claim_result_holds_semantics():
    ok = ClaimResult("x", {"n": [1, 2]})
    assert ok.holds and ok.to_dict()["holds"] is True
    bad = ClaimResult("x", {"n": [1, 2]}, counterexamples=[7])
    assert not bad.holds and bad.to_dict()["counterexamples"] == [7]


def test_registry_covers_descriptions():
    for cid in CLAIM_IDS:
        assert claim_description(cid)


def test_run_claims_unknown_id(table):
    with pytest.raises(UnknownClaimError):
        run_claims(["nope"], table, VerifyConfig())


def test_run_claims_subset_and_json(table):
    config = VerifyConfig(champion_limit=10**4, n_max=500, checkpoints=(10, 100))
    report = run_claims(["champions", "mertens-trend", "zeta-tail"], table, config)
    assert report["all_hold"]
    assert list(report["claims"]) == ["champions", "mertens-trend", "zeta-tail"]
    json.dumps(report, allow_nan=False)  # strict-JSON clean


def test_run_claims_worker_count_invariance(table):
    config = VerifyConfig(
        champion_limit=10**4,
        n_max=3000,
        reduction_samples=200,
        checkpoints=(10, 100, 1000),
    )
    r1 = run_claims(None, table, config, workers=1)
    r3 = run_claims(None, table, config, workers=3)
    assert json.dumps(r1, sort_keys=True) == json.dumps(r3, sort_keys=True)
    assert r1["all_hold"]


def test_required_table_limit_covers_nth_prime(table):
    # Rosser-style estimate must cover p_{n_max}
    config = VerifyConfig(n_max=10**5)
    assert required_table_limit(config) >= 1299709
    assert math.isqrt(required_table_limit(config)) < table.limit
