"""Analytic bound evaluators, scan machinery, and the escalation path."""

from __future__ import annotations

import json

import pytest

from psiverify.bounds import (
    StridePolicy,
    _interval_sides,
    criterion_gap_bound,
    primorial_psi_bound,
    robin_log_bound,
    rosser_schoenfeld_bound,
    scan_bound,
    stride_indices,
    threshold_condition,
    threshold_monotone_step,
    zeta_tail_bound,
)
from psiverify.errors import DomainError, RangeError
from psiverify.numerics import VerdictStatus


def test_rs_product_at_2(table):
    r = rosser_schoenfeld_bound(table, 2)
    assert r.verdict.status is VerdictStatus.HOLDS
    assert abs(r.lhs.value - 2.0) <= r.lhs.radius
    assert abs(r.rhs.value - 3.8040896698015638) < 1e-12


def test_rs_product_at_3(table):
    r = rosser_schoenfeld_bound(table, 3)
    assert r.verdict.status is VerdictStatus.HOLDS
    assert abs(r.lhs.value - 3.0) <= r.lhs.radius
    assert abs(r.rhs.value - 3.5779100257296446) < 1e-12


def test_rs_product_at_20000(table):
    r = rosser_schoenfeld_bound(table, 20000)
    assert r.verdict.status is VerdictStatus.HOLDS


def test_rs_product_domain(table):
    with pytest.raises(DomainError):
        rosser_schoenfeld_bound(table, 1)
    with pytest.raises(RangeError):
        rosser_schoenfeld_bound(table, table.limit + 1)


def test_zeta_tail_at_2(table):
    r = zeta_tail_bound(table, 2)
    assert r.verdict.status is VerdictStatus.HOLDS
    # zeta(2) (3/4)(8/9) = zeta(2) 2/3 and exp(2/3)
    assert abs(r.lhs.value - 1.0966227112321510) < 1e-12
    assert abs(r.rhs.value - 1.9477340410546759) < 1e-12


def test_zeta_tail_margin_shrinks(table):
    r2 = zeta_tail_bound(table, 2)
    r25 = zeta_tail_bound(table, 25)
    r500 = zeta_tail_bound(table, 500)
    assert r25.verdict.status is VerdictStatus.HOLDS
    assert r500.verdict.status is VerdictStatus.HOLDS
    assert r2.slack > r25.slack > r500.slack > 0
    # both sides head to 1 from above, staying ordered
    assert 1 < r500.lhs.value < r500.rhs.value < 1.01


def test_zeta_tail_domain(table):
    with pytest.raises(DomainError):
        zeta_tail_bound(table, 1)


def test_psi_bound_at_first_valid_index(table):
    r = primorial_psi_bound(table, 2263)
    assert r.verdict.status is VerdictStatus.HOLDS
    assert r.slack > 0.1  # regression: 0.1075 at first computation


@pytest.mark.parametrize("n", [5000, 10**4])
def test_psi_bound_scan_points(table, n):
    assert primorial_psi_bound(table, n).verdict.status is VerdictStatus.HOLDS


def test_psi_bound_domain_cites_hypothesis(table):
    with pytest.raises(DomainError, match="2263"):
        primorial_psi_bound(table, 2262)


def test_psi_bound_margin_reproducible_bitwise(table):
    a = primorial_psi_bound(table, 3000)
    b = primorial_psi_bound(table, 3000)
    assert a.verdict.margin.value == b.verdict.margin.value
    assert a.verdict.margin.radius == b.verdict.margin.radius
    assert a.verdict.margin.value < 0  # rhs - lhs stays positive
    s1 = scan_bound(table, "psi-bound", 2263, 2400)
    s2 = scan_bound(table, "psi-bound", 2263, 2400)
    assert s1.worst_slack == s2.worst_slack and s1.worst_at == s2.worst_at


def test_threshold_at_first_valid_index(table):
    r = threshold_condition(table, 2263)
    assert r.verdict.status is VerdictStatus.HOLDS
    assert abs(r.rhs.value - 1.6449340668482264) < 1e-15


def test_threshold_monotone_pairwise(table):
    # lhs(n+1) < lhs(n), certified, at the start of the validity range
    for n in (2263, 2264, 5000):
        assert threshold_monotone_step(table, n).status is VerdictStatus.HOLDS


def test_threshold_margin_grows(table):
    assert threshold_condition(table, 10**5).slack > threshold_condition(table, 2263).slack


def test_threshold_domain(table):
    with pytest.raises(DomainError):
        threshold_condition(table, 2262)


def test_robin_log_points(table):
    assert robin_log_bound(table, 2263).verdict.status is VerdictStatus.HOLDS
    assert robin_log_bound(table, 10**4).verdict.status is VerdictStatus.HOLDS
    # fails well below the validity start: the start is empirical, not assumed
    assert robin_log_bound(table, 3).verdict.status is VerdictStatus.FAILS
    with pytest.raises(DomainError):
        robin_log_bound(table, 2)


def test_robin_log_empirical_start(table):
    scan = scan_bound(table, "robin-log", 3, 4000)
    assert scan.fails > 0
    holds_from = max(scan.failed_at) + 1
    # frozen after the first full scan: settles at n = 2199 (p = 19421),
    # comfortably before the index 2263 the composite bound relies on
    assert holds_from == 2199
    assert all(x <= 2198 for x in scan.failed_at)


@pytest.mark.parametrize("x", [5, 100, 10**4, 20011])
def test_criterion_gap_points(table, x):
    r = criterion_gap_bound(table, x)
    assert r.verdict.status is VerdictStatus.HOLDS


def test_criterion_gap_domain(table):
    with pytest.raises(DomainError):
        criterion_gap_bound(table, 4)


def test_stride_indices():
    policy = StridePolicy(dense_until=10, ratio=1.5)
    got = list(stride_indices(2, 40, policy))
    assert got[0] == 2 and got[-1] == 40
    assert got == sorted(set(got))
    dense = [g for g in got if g <= 10]
    assert dense == list(range(2, 11))
    assert list(stride_indices(5, 5, policy)) == [5]
    assert list(stride_indices(6, 5, policy)) == []


def test_scan_counts_match_stride(table):
    policy = StridePolicy(dense_until=50, ratio=1.1)
    scan = scan_bound(table, "zeta-tail", 2, 300, policy=policy)
    assert scan.points_checked == len(list(stride_indices(2, 300, policy)))
    assert scan.all_hold
    assert scan.worst_slack > 0


def test_scan_json_shape(table):
    scan = scan_bound(table, "rs-product", 1, 100)
    payload = scan.to_dict()
    json.dumps(payload)  # serializable
    assert payload["bound"] == "rs-product"
    assert payload["range"] == [1, 100]
    assert set(payload["verdicts"]) == {"holds", "inconclusive", "fails"}
    assert payload["points_checked"] == payload["verdicts"]["holds"]
    assert payload["worst_at"] is not None


def test_scan_validation(table):
    with pytest.raises(ValueError):
        scan_bound(table, "no-such-bound", 1, 10)
    with pytest.raises(DomainError):
        scan_bound(table, "psi-bound", 100, 3000)
    with pytest.raises(RangeError):
        scan_bound(table, "zeta-tail", 10, 5)
    with pytest.raises(RangeError):
        scan_bound(table, "zeta-tail", 2, table.count + 1)


@pytest.mark.parametrize(
    "name,n",
    [
        ("rs-product", 25),
        ("zeta-tail", 25),
        ("psi-bound", 2263),
        ("threshold", 2263),
        ("robin-log", 2263),
        ("criterion-gap", 25),
    ],
)
def test_escalation_agrees_with_fast_path(table, name, n):
    """The 113-bit interval path must enclose the same reals, much tighter."""
    from psiverify.bounds import _CLAIMS, robin_log_bound

    fast = {
        "rs-product": lambda: rosser_schoenfeld_bound(table, table.nth_prime(n)),
        "zeta-tail": lambda: zeta_tail_bound(table, n),
        "psi-bound": lambda: primorial_psi_bound(table, n),
        "threshold": lambda: threshold_condition(table, n),
        "robin-log": lambda: robin_log_bound(table, n),
        "criterion-gap": lambda: criterion_gap_bound(table, table.nth_prime(n)),
    }[name]()
    lhs, rhs = _interval_sides(table, name, n)
    assert abs(lhs.value - fast.lhs.value) <= lhs.radius + fast.lhs.radius
    assert abs(rhs.value - fast.rhs.value) <= rhs.radius + fast.rhs.radius
    assert lhs.radius <= fast.lhs.radius
    from psiverify.numerics import compare

    assert compare(lhs, rhs, _CLAIMS[name]).status is fast.verdict.status


def test_scan_escalation_branch_on_forced_inconclusive(table, monkeypatch):
    """Force the fast path to be useless so the interval retry must decide."""
    import psiverify.bounds as bounds_mod
    from psiverify.numerics import Verdict, VerdictStatus

    real_compare = bounds_mod.compare
    state = {"first": True}

    def flaky_compare(lhs, rhs, claim):
        v = real_compare(lhs, rhs, claim)
        if state["first"] and lhs.radius > 1e-20:
            state["first"] = False
            return Verdict(VerdictStatus.INCONCLUSIVE, v.margin)
        return v

    monkeypatch.setattr(bounds_mod, "compare", flaky_compare)
    scan = scan_bound(table, "zeta-tail", 25, 25)
    assert scan.escalated_at == [25]
    assert scan.all_hold
