"""Checkable analytic bounds on Euler products over primes.

Each bound is exposed two ways: a point evaluator returning a
:class:`BoundReport`, and a streaming range scanner that shares one pass of
compensated prefix sums across all evaluation points.  The bounds:

* ``rs-product``     prod_{p<=x} (1-1/p)^(-1)  <=  e^gamma (log x + 1/log x)   (x >= 2)
* ``zeta-tail``      zeta(2) prod_{p<=p_n} (1-1/p^2)  <=  exp(2/p_n)           (n >= 2)
* ``psi-bound``      prod_{k<=n} (1+1/p_k)  <=  exp(gamma + 2/p_n)/zeta(2)
                     * (log log N_n + 1.125/log p_n)                           (n >= 2263)
* ``threshold``      exp(2/p_n) (1 + 1.125/(log p_n log log N_n)) <= zeta(2)   (n >= 2263)
* ``robin-log``      log p_n  <  log log N_n + 0.125/log p_n                   (validity
                     start not asserted; scans report it empirically)
* ``criterion-gap``  log g(x) >= log f(x) - 2/x                                (x >= 5)

A scan that meets an INCONCLUSIVE verdict retries the point on an interval
arithmetic path at 113-bit precision (about 34 digits) before reporting.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable

from mpmath.ctx_iv import MPIntervalContext

from .errors import DomainError, RangeError
from .numerics import (
    E_GAMMA,
    E_GAMMA_OVER_ZETA2,
    EULER_GAMMA,
    ZETA2,
    CertifiedAccumulator,
    CertifiedValue,
    Verdict,
    VerdictStatus,
    certified,
    compare,
    cv_add,
    cv_div,
    cv_exp,
    cv_from_int,
    cv_from_ratio,
    cv_log,
    cv_log1p,
    cv_mul,
    cv_neg,
    from_mp_interval,
)
from .primes import PrimeTable

__all__ = [
    "BOUND_NAMES",
    "BoundReport",
    "BoundScan",
    "StridePolicy",
    "rosser_schoenfeld_bound",
    "zeta_tail_bound",
    "primorial_psi_bound",
    "threshold_condition",
    "threshold_monotone_step",
    "robin_log_bound",
    "criterion_gap_bound",
    "scan_bound",
    "stride_indices",
]

ONE_EIGHTH = certified(0.125)  # both constants are exact in binary64
NINE_EIGHTHS = certified(1.125)

ESCALATION_PREC_BITS = 113


@dataclass(frozen=True, slots=True)
class BoundReport:
    """One bound evaluated at one point, with its certified verdict."""

    bound: str
    at: int  # primorial index n, or x for the x-parameterized bounds
    lhs: CertifiedValue
    rhs: CertifiedValue
    verdict: Verdict
    escalated: bool = False

    @property
    def slack(self) -> float:
        """Conservative distance from violating the claim (positive = safe)."""
        claim = _CLAIMS[self.bound]
        if claim in ("<", "<="):
            return -self.verdict.margin.hi
        return self.verdict.margin.lo


@dataclass
class StridePolicy:
    """Every index up to ``dense_until``, geometric ``ratio`` steps beyond."""

    dense_until: int = 10**4
    ratio: float = 1.01


@dataclass
class BoundScan:
    bound: str
    start: int
    stop: int
    policy: StridePolicy
    points_checked: int = 0
    holds: int = 0
    fails: int = 0
    inconclusive: int = 0
    worst_slack: float = math.inf
    worst_at: int | None = None
    escalated_at: list[int] = field(default_factory=list)
    failed_at: list[int] = field(default_factory=list)

    def record(self, report: BoundReport) -> None:
        self.points_checked += 1
        status = report.verdict.status
        if status is VerdictStatus.HOLDS:
            self.holds += 1
        elif status is VerdictStatus.FAILS:
            self.fails += 1
            self.failed_at.append(report.at)
        else:
            self.inconclusive += 1
            self.failed_at.append(report.at)
        if report.escalated:
            self.escalated_at.append(report.at)
        s = report.slack
        if s < self.worst_slack:
            self.worst_slack = s
            self.worst_at = report.at

    @property
    def all_hold(self) -> bool:
        return self.fails == 0 and self.inconclusive == 0 and self.points_checked > 0

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "range": [self.start, self.stop],
            "stride": {"dense_until": self.policy.dense_until, "ratio": self.policy.ratio},
            "points_checked": self.points_checked,
            "worst_margin": self.worst_slack,
            "worst_at": self.worst_at,
            "verdicts": {
                "holds": self.holds,
                "inconclusive": self.inconclusive,
                "fails": self.fails,
            },
        }


_CLAIMS = {
    "rs-product": "<=",
    "zeta-tail": "<=",
    "psi-bound": "<=",
    "threshold": "<=",
    "robin-log": "<",
    "criterion-gap": ">=",
}

# Smallest primorial index a scan may evaluate at.
_DOMAIN_START = {
    "rs-product": 1,
    "zeta-tail": 2,
    "psi-bound": 2263,
    "threshold": 2263,
    "robin-log": 3,
    "criterion-gap": 3,
}

BOUND_NAMES = tuple(_CLAIMS)

FIRST_INDEX_AT_20000 = 2263  # p_2263 is the first prime >= 20000


def _require_index(table: PrimeTable, n: int, minimum: int, what: str) -> int:
    if n < minimum:
        raise DomainError(f"{what}: needs n >= {minimum}, got n={n}")
    if n > table.count:
        raise RangeError(f"{what}: n={n} beyond table ({table.count} primes)")
    return table.nth_prime(n)


def _sum_over_primes(table: PrimeTable, k: int, term: Callable[[int], CertifiedValue]) -> CertifiedValue:
    acc = CertifiedAccumulator()
    for p in table.primes[:k]:
        t = term(p)
        acc.add(t.value, t.radius)
    return acc.total()


def _term_phi(p: int) -> CertifiedValue:
    return cv_log1p(cv_from_ratio(-1, p))


def _term_plus(p: int) -> CertifiedValue:
    return cv_log1p(cv_from_ratio(1, p))


def _term_inv(p: int) -> CertifiedValue:
    return cv_log1p(cv_from_ratio(-1, p + 1))


def _term_sq(p: int) -> CertifiedValue:
    return cv_log1p(cv_from_ratio(-1, p * p))


def _rs_sides(table: PrimeTable, x: int, s_phi: CertifiedValue) -> tuple[CertifiedValue, CertifiedValue]:
    lhs = cv_exp(cv_neg(s_phi))
    logx = cv_log(cv_from_int(x))
    rhs = cv_mul(E_GAMMA, cv_add(logx, cv_div(certified(1.0), logx)))
    return lhs, rhs


def rosser_schoenfeld_bound(table: PrimeTable, x: int) -> BoundReport:
    """Partial Euler product against e^gamma (log x + 1/log x), for x >= 2."""
    if x < 2:
        raise DomainError(f"rs-product: needs x >= 2, got {x}")
    if x > table.limit:
        raise RangeError(f"rs-product: x={x} beyond table limit {table.limit}")
    k = bisect_right(table.primes, x)
    lhs, rhs = _rs_sides(table, x, _sum_over_primes(table, k, _term_phi))
    return BoundReport("rs-product", x, lhs, rhs, compare(lhs, rhs, "<="))


def _zeta_tail_sides(table: PrimeTable, n: int, s_sq: CertifiedValue) -> tuple[CertifiedValue, CertifiedValue]:
    lhs = cv_mul(ZETA2, cv_exp(s_sq))
    rhs = cv_exp(cv_from_ratio(2, table.nth_prime(n)))
    return lhs, rhs


def zeta_tail_bound(table: PrimeTable, n: int) -> BoundReport:
    """zeta(2) prod_{p<=p_n} (1-1/p^2) against exp(2/p_n), for n >= 2."""
    _require_index(table, n, 2, "zeta-tail")
    lhs, rhs = _zeta_tail_sides(table, n, _sum_over_primes(table, n, _term_sq))
    return BoundReport("zeta-tail", n, lhs, rhs, compare(lhs, rhs, "<="))


def _psi_bound_sides(table: PrimeTable, n: int, s_plus: CertifiedValue) -> tuple[CertifiedValue, CertifiedValue]:
    p = table.nth_prime(n)
    lhs = cv_exp(s_plus)
    scale = cv_div(cv_exp(cv_add(EULER_GAMMA, cv_from_ratio(2, p))), ZETA2)
    logp = cv_log(cv_from_int(p))
    inner = cv_add(cv_log(table.theta_at_index(n)), cv_div(NINE_EIGHTHS, logp))
    return lhs, cv_mul(scale, inner)


def primorial_psi_bound(table: PrimeTable, n: int) -> BoundReport:
    """psi(N_n)/N_n against the explicit Mertens-type bound, for n >= 2263.

    The hypothesis is p_n >= 20000, which starts at index 2263.
    """
    _require_index(table, n, FIRST_INDEX_AT_20000, "psi-bound")
    lhs, rhs = _psi_bound_sides(table, n, _sum_over_primes(table, n, _term_plus))
    return BoundReport("psi-bound", n, lhs, rhs, compare(lhs, rhs, "<="))


def _threshold_lhs(table: PrimeTable, n: int) -> CertifiedValue:
    p = table.nth_prime(n)
    logp = cv_log(cv_from_int(p))
    loglog = cv_log(table.theta_at_index(n))
    bump = cv_div(NINE_EIGHTHS, cv_mul(logp, loglog))
    return cv_mul(cv_exp(cv_from_ratio(2, p)), cv_add(certified(1.0), bump))


def threshold_condition(table: PrimeTable, n: int) -> BoundReport:
    """exp(2/p_n)(1 + 1.125/(log p_n log log N_n)) against zeta(2), n >= 2263."""
    _require_index(table, n, FIRST_INDEX_AT_20000, "threshold")
    lhs = _threshold_lhs(table, n)
    return BoundReport("threshold", n, lhs, ZETA2, compare(lhs, ZETA2, "<="))


def threshold_monotone_step(table: PrimeTable, n: int) -> Verdict:
    """Certified check that the threshold LHS decreases from n to n+1."""
    _require_index(table, n + 1, FIRST_INDEX_AT_20000 + 1, "threshold-monotone")
    return compare(_threshold_lhs(table, n + 1), _threshold_lhs(table, n), "<")


def _robin_sides(table: PrimeTable, n: int) -> tuple[CertifiedValue, CertifiedValue]:
    p = table.nth_prime(n)
    logp = cv_log(cv_from_int(p))
    rhs = cv_add(cv_log(table.theta_at_index(n)), cv_div(ONE_EIGHTH, logp))
    return logp, rhs


def robin_log_bound(table: PrimeTable, n: int) -> BoundReport:
    """log p_n against log log N_n + 0.125/log p_n, for n >= 3.

    Holds for large n; where it begins to hold is reported by scans, not
    assumed.
    """
    _require_index(table, n, 3, "robin-log")
    lhs, rhs = _robin_sides(table, n)
    return BoundReport("robin-log", n, lhs, rhs, compare(lhs, rhs, "<"))


def _gap_sides(
    table: PrimeTable, n: int, x: int, s_inv: CertifiedValue, s_phi: CertifiedValue
) -> tuple[CertifiedValue, CertifiedValue]:
    log_loglog = cv_log(cv_log(table.theta_at_index(n)))
    lhs = cv_add(cv_add(cv_log(E_GAMMA_OVER_ZETA2), log_loglog), s_inv)
    rhs_f = cv_add(cv_add(cv_log(E_GAMMA), log_loglog), s_phi)
    rhs = cv_add(rhs_f, cv_from_ratio(-2, x))
    return lhs, rhs


def criterion_gap_bound(table: PrimeTable, x: int) -> BoundReport:
    """log g(x) against log f(x) - 2/x, for x >= 5 (x need not be prime)."""
    if x < 5:
        raise DomainError(f"criterion-gap: needs x >= 5, got {x}")
    if x > table.limit:
        raise RangeError(f"criterion-gap: x={x} beyond table limit {table.limit}")
    n = bisect_right(table.primes, x)
    lhs, rhs = _gap_sides(
        table,
        n,
        x,
        _sum_over_primes(table, n, _term_inv),
        _sum_over_primes(table, n, _term_phi),
    )
    return BoundReport("criterion-gap", x, lhs, rhs, compare(lhs, rhs, ">="))


def stride_indices(start: int, stop: int, policy: StridePolicy) -> Iterable[int]:
    """Deterministic evaluation points: dense, then geometric, always stop."""
    if start > stop:
        return
    n = start
    while True:
        yield n
        if n >= stop:
            return
        step = n + 1 if n < policy.dense_until else max(n + 1, int(n * policy.ratio))
        n = min(step, stop)


def scan_bound(
    table: PrimeTable,
    name: str,
    start: int,
    stop: int,
    *,
    policy: StridePolicy | None = None,
    escalate: bool = True,
) -> BoundScan:
    """Evaluate one bound over [start, stop] in a single streaming pass.

    ``start``/``stop`` are primorial indices n (the x-parameterized bounds
    are evaluated at x = p_n).  INCONCLUSIVE points are retried on the
    113-bit interval path when ``escalate`` is set.
    """
    if name not in _CLAIMS:
        raise ValueError(f"unknown bound {name!r}; known: {', '.join(BOUND_NAMES)}")
    if start < _DOMAIN_START[name]:
        raise DomainError(f"{name}: scan must start at n >= {_DOMAIN_START[name]}, got {start}")
    if stop < start:
        raise RangeError(f"scan_bound: empty range [{start}, {stop}]")
    if stop > table.count:
        raise RangeError(f"scan_bound: stop={stop} beyond table ({table.count} primes)")
    policy = policy or StridePolicy()
    selected = set(stride_indices(start, stop, policy))
    scan = BoundScan(bound=name, start=start, stop=stop, policy=policy)

    acc_phi = CertifiedAccumulator()
    acc_plus = CertifiedAccumulator()
    acc_inv = CertifiedAccumulator()
    acc_sq = CertifiedAccumulator()
    need_phi = name in ("rs-product", "criterion-gap")
    need_plus = name == "psi-bound"
    need_inv = name == "criterion-gap"
    need_sq = name == "zeta-tail"

    for n in range(1, stop + 1):
        p = table.nth_prime(n)
        if need_phi:
            t = _term_phi(p)
            acc_phi.add(t.value, t.radius)
        if need_plus:
            t = _term_plus(p)
            acc_plus.add(t.value, t.radius)
        if need_inv:
            t = _term_inv(p)
            acc_inv.add(t.value, t.radius)
        if need_sq:
            t = _term_sq(p)
            acc_sq.add(t.value, t.radius)
        if n < start or n not in selected:
            continue
        if name == "rs-product":
            lhs, rhs = _rs_sides(table, p, acc_phi.total())
            at = p
        elif name == "zeta-tail":
            lhs, rhs = _zeta_tail_sides(table, n, acc_sq.total())
            at = n
        elif name == "psi-bound":
            lhs, rhs = _psi_bound_sides(table, n, acc_plus.total())
            at = n
        elif name == "threshold":
            lhs, rhs = _threshold_lhs(table, n), ZETA2
            at = n
        elif name == "robin-log":
            lhs, rhs = _robin_sides(table, n)
            at = n
        else:
            lhs, rhs = _gap_sides(table, n, p, acc_inv.total(), acc_phi.total())
            at = p
        verdict = compare(lhs, rhs, _CLAIMS[name])
        escalated = False
        if verdict.status is VerdictStatus.INCONCLUSIVE and escalate:
            lhs, rhs = _interval_sides(table, name, n)
            verdict = compare(lhs, rhs, _CLAIMS[name])
            escalated = True
        scan.record(BoundReport(name, at, lhs, rhs, verdict, escalated))
    return scan


def _interval_sides(table: PrimeTable, name: str, n: int, prec: int = ESCALATION_PREC_BITS):
    """Recompute one bound point with outward-rounded interval arithmetic."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    one = ctx.mpf(1)
    p_n = table.nth_prime(n)
    gamma = +ctx.euler
    zeta2 = ctx.pi**2 / 6

    def prod_sum(term):
        s = ctx.mpf(0)
        for k in range(1, n + 1):
            s += term(ctx.mpf(table.nth_prime(k)))
        return s

    def theta():
        s = ctx.mpf(0)
        for k in range(1, n + 1):
            s += ctx.log(ctx.mpf(table.nth_prime(k)))
        return s

    if name == "rs-product":
        lhs = ctx.exp(-prod_sum(lambda q: ctx.log(1 - one / q)))
        logx = ctx.log(ctx.mpf(p_n))
        rhs = ctx.exp(gamma) * (logx + one / logx)
    elif name == "zeta-tail":
        lhs = zeta2 * ctx.exp(prod_sum(lambda q: ctx.log(1 - one / q**2)))
        rhs = ctx.exp(ctx.mpf(2) / p_n)
    elif name == "psi-bound":
        lhs = ctx.exp(prod_sum(lambda q: ctx.log(1 + one / q)))
        logp = ctx.log(ctx.mpf(p_n))
        rhs = ctx.exp(gamma + ctx.mpf(2) / p_n) / zeta2 * (ctx.log(theta()) + ctx.mpf("1.125") / logp)
    elif name == "threshold":
        logp = ctx.log(ctx.mpf(p_n))
        lhs = ctx.exp(ctx.mpf(2) / p_n) * (1 + ctx.mpf("1.125") / (logp * ctx.log(theta())))
        rhs = zeta2
    elif name == "robin-log":
        lhs = ctx.log(ctx.mpf(p_n))
        rhs = ctx.log(theta()) + ctx.mpf("0.125") / ctx.log(ctx.mpf(p_n))
    elif name == "criterion-gap":
        loglog2 = ctx.log(ctx.log(theta()))
        lhs = ctx.log(ctx.exp(gamma) / zeta2) + loglog2 + prod_sum(lambda q: ctx.log(1 - one / (q + 1)))
        rhs = ctx.log(ctx.exp(gamma)) + loglog2 + prod_sum(lambda q: ctx.log(1 - one / q)) - ctx.mpf(2) / p_n
    else:
        raise ValueError(f"unknown bound {name!r}")
    return from_mp_interval(lhs), from_mp_interval(rhs)
