"""Claim-level verifications: champions, reduction, upper/lower bounds, trends.

Each claim runs as an independent job against a shared immutable prime table
and returns a :class:`ClaimResult` that serializes to JSON.  Results are a
pure function of (table, config): sampling is seeded, scan strides are fixed
by configuration, and floats serialize as shortest round-trip decimals, so
reports are byte-identical regardless of how many workers run the claims.

The registry ids:

    champions       primorials are exactly the champions of psi(m)/m (exact ints)
    reduction       R(m) <= R(N_n) on [N_n, N_{n+1}) (exact ints + log log monotonicity)
    upper           R(n) < e^gamma for n > 30, in three labeled parts
    lower           R(N_n) > e^gamma/zeta(2) for 3 <= n <= n_max (RH criterion scan)
    mertens-trend   margin R(N_n) - e^gamma/zeta(2) positive and decreasing
    rs-product, zeta-tail, psi-bound, threshold, robin-log, criterion-gap
                    the analytic bound scans (see bounds module)
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from mpmath.ctx_iv import MPIntervalContext

from .arith import factorize, primorials_up_to, psi_from_factors, psi_ratio_tables, robin_ratio
from .bounds import (
    ESCALATION_PREC_BITS,
    FIRST_INDEX_AT_20000,
    StridePolicy,
    scan_bound,
    threshold_condition,
    threshold_monotone_step,
)
from .errors import RangeError, UnknownClaimError
from .numerics import (
    E_GAMMA,
    E_GAMMA_OVER_ZETA2,
    CertifiedValue,
    VerdictStatus,
    certified,
    compare,
    from_mp_interval,
)
from .primes import PrimeTable, build_table
from .series import stream_points

__all__ = [
    "ClaimResult",
    "VerifyConfig",
    "CLAIM_IDS",
    "claim_description",
    "required_table_limit",
    "build_default_table",
    "champion_scan",
    "reduction_check",
    "verify_upper",
    "verify_lower",
    "mertens_limit_trend",
    "run_claims",
]


@dataclass(frozen=True)
class VerifyConfig:
    """Depths and determinism knobs for the claim registry."""

    champion_limit: int = 10**6
    n_max: int = 10**5
    upper_small_stop: int = 210
    upper_primorial_stop: int = 2262
    reduction_exhaustive_max: int = 5
    reduction_sampled_max: int = 8
    reduction_samples: int = 2000
    seed: int = 1018
    checkpoints: tuple[int, ...] = (10, 100, 1000, 10**4, 10**5)
    stride_dense_until: int = 10**4
    stride_ratio: float = 1.01
    escalate: bool = True

    def stride(self) -> StridePolicy:
        return StridePolicy(self.stride_dense_until, self.stride_ratio)

    def live_checkpoints(self) -> tuple[int, ...]:
        return tuple(c for c in self.checkpoints if c <= self.n_max)

    def to_dict(self) -> dict:
        return {
            "champion_limit": self.champion_limit,
            "n_max": self.n_max,
            "upper_small_stop": self.upper_small_stop,
            "upper_primorial_stop": self.upper_primorial_stop,
            "reduction_exhaustive_max": self.reduction_exhaustive_max,
            "reduction_sampled_max": self.reduction_sampled_max,
            "reduction_samples": self.reduction_samples,
            "seed": self.seed,
            "checkpoints": list(self.live_checkpoints()),
            "stride": {"dense_until": self.stride_dense_until, "ratio": self.stride_ratio},
            "escalate": self.escalate,
        }


@dataclass
class ClaimResult:
    """Outcome of one claim: HOLDS iff counterexamples is empty."""

    claim_id: str
    covered: dict
    counterexamples: list[int] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "claim": self.claim_id,
            "holds": self.holds,
            "covered": self.covered,
            "counterexamples": self.counterexamples,
            "details": self.details,
        }


def _cv_pair(cv: CertifiedValue) -> list[float]:
    return [cv.value, cv.radius]


def required_table_limit(config: VerifyConfig) -> int:
    """Sieve bound covering p_{n_max} (Rosser-style upper estimate) and 20000."""
    n = max(config.n_max, FIRST_INDEX_AT_20000 + 2, 6)
    estimate = int(n * (math.log(n) + math.log(math.log(n)))) + 10
    return max(estimate, 20011 + 2)


def build_default_table(config: VerifyConfig, cache_dir=None) -> PrimeTable:
    table = build_table(required_table_limit(config), cache_dir=cache_dir)
    if table.count < config.n_max:
        raise RangeError(
            f"table holds {table.count} primes but n_max={config.n_max}; "
            "the size estimate should not allow this"
        )
    return table


# ---------------------------------------------------------------------------
# champions
# ---------------------------------------------------------------------------


def champion_scan(limit: int, table: PrimeTable | None = None) -> ClaimResult:
    """Exact champion set of psi(m)/m on [1, limit] vs the primorial set.

    A champion strictly exceeds psi(m)/m for every smaller m >= 1, so ties
    (psi(4)/4 = psi(2)/2) are not champions.  All comparisons are integer
    cross-multiplications; no floating point is involved.
    """
    num, den = psi_ratio_tables(limit)
    nums = num.tolist()
    dens = den.tolist()
    champions: list[int] = []
    best_n, best_d = 1, 1  # psi(1)/1
    for m in range(2, limit + 1):
        nm = nums[m]
        dm = dens[m]
        if nm * best_d > best_n * dm:
            champions.append(m)
            best_n, best_d = nm, dm
    primorials = primorials_up_to(limit, table)
    extra = sorted(set(champions) - set(primorials))
    missing = sorted(set(primorials) - set(champions))
    return ClaimResult(
        claim_id="champions",
        covered={"m": [1, limit]},
        counterexamples=extra + missing,
        details={
            "champions": champions,
            "primorials": primorials,
            "not_primorial": extra,
            "not_champion": missing,
        },
    )


# ---------------------------------------------------------------------------
# reduction to primorials
# ---------------------------------------------------------------------------


def _primorial_ratio_ints(table: PrimeTable, n_index: int) -> tuple[int, int]:
    num = 1
    den = 1
    for k in range(1, n_index + 1):
        p = table.nth_prime(k)
        num *= p + 1
        den *= p
    return num, den


def reduction_check(
    n_index: int,
    samples: int | None = None,
    *,
    table: PrimeTable | None = None,
    seed: int = 1018,
) -> ClaimResult:
    """Check R(m) <= R(N_n) for m in [N_n, N_{n+1}), exactly.

    Since psi(m)/m <= psi(N_n)/N_n (exact rational comparison) and
    log log m >= log log N_n > 0 for m >= N_n >= 6, the ratio inequality
    follows with no floating point at all.  ``samples=None`` checks the
    whole block; otherwise ``samples`` seeded random points.
    """
    if n_index < 2:
        raise RangeError(f"reduction_check: n_index must be >= 2, got {n_index}")
    if table is None or table.count < n_index + 1:
        table = build_table(max(10**6, 2))
    best_num, best_den = _primorial_ratio_ints(table, n_index)
    lo = best_den  # N_n
    hi = best_den * table.nth_prime(n_index + 1)  # N_{n+1}

    bad: list[int] = []
    if samples is None:
        num, den = psi_ratio_tables(hi - 1)
        seg_n = num[lo:hi].astype(object)
        seg_d = den[lo:hi].astype(object)
        viol = seg_n * best_den > best_num * seg_d
        bad = [int(lo + i) for i in np.nonzero(viol)[0]]
        checked = hi - lo
    else:
        rng = random.Random(seed)
        points = sorted({lo} | {rng.randrange(lo, hi) for _ in range(samples)})
        for m in points:
            fz = factorize(m, table)
            if psi_from_factors(fz) * best_den > best_num * m:
                bad.append(m)
        checked = len(points)
    return ClaimResult(
        claim_id=f"reduction-{n_index}",
        covered={"m": [lo, hi - 1], "exhaustive": samples is None, "checked": checked},
        counterexamples=bad,
        details={"n_index": n_index, "psi_ratio": [best_num, best_den]},
    )


def _reduction_claim(table: PrimeTable, config: VerifyConfig) -> ClaimResult:
    blocks = []
    bad: list[int] = []
    checked = 0
    for idx in range(2, config.reduction_sampled_max + 1):
        samples = None if idx <= config.reduction_exhaustive_max else config.reduction_samples
        sub = reduction_check(idx, samples, table=table, seed=config.seed + idx)
        blocks.append(sub.to_dict())
        bad.extend(sub.counterexamples)
        checked += sub.covered["checked"]
    return ClaimResult(
        claim_id="reduction",
        covered={"n_index": [2, config.reduction_sampled_max], "checked": checked},
        counterexamples=bad,
        details={"blocks": blocks},
    )


# ---------------------------------------------------------------------------
# upper bound: R(n) < e^gamma for n > 30
# ---------------------------------------------------------------------------


def verify_upper(table: PrimeTable, config: VerifyConfig | None = None) -> ClaimResult:
    """Three-part upper-bound verification mirroring the proof structure.

    (a) exhaustive certified R(n) < e^gamma on 31..210 (plus the witness
        list of n <= 30 where R(n) >= e^gamma, showing 30 is sharp);
    (b) R(N_n) < e^gamma along primorials for 4 <= n <= 2262;
    (c) the threshold condition at index 2263 plus certified monotonicity
        steps, which covers every n >= 2263.
    """
    config = config or VerifyConfig()

    # (a) exhaustive small range, certified; witnesses below 31
    a_bad: list[int] = []
    witnesses: list[int] = []
    for n in range(3, 31):
        if compare(robin_ratio(n), E_GAMMA, ">=").status is VerdictStatus.HOLDS:
            witnesses.append(n)
    for n in range(31, config.upper_small_stop + 1):
        if compare(robin_ratio(n), E_GAMMA, "<").status is not VerdictStatus.HOLDS:
            a_bad.append(n)

    # (b) primorial scan 4..2262
    b_bad: list[int] = []
    worst_slack = math.inf
    worst_at = None
    for point in stream_points(table, config.upper_primorial_stop):
        if point.n < 4:
            continue
        verdict = compare(point.ratio, E_GAMMA, "<")
        if verdict.status is not VerdictStatus.HOLDS:
            b_bad.append(point.n)
        slack = -verdict.margin.hi
        if slack < worst_slack:
            worst_slack = slack
            worst_at = point.n
    # R(N_3) = R(30) >= e^gamma: the bound genuinely starts at n = 4
    r30_high = compare(robin_ratio(30), E_GAMMA, ">").status is VerdictStatus.HOLDS

    # (c) threshold at the first valid index, plus monotone steps
    c_bad: list[int] = []
    first = threshold_condition(table, FIRST_INDEX_AT_20000)
    if first.verdict.status is not VerdictStatus.HOLDS:
        c_bad.append(FIRST_INDEX_AT_20000)
    monotone_at = [n for n in (2263, 2500, 5000, 10**4) if n + 1 <= table.count]
    for n in monotone_at:
        if threshold_monotone_step(table, n).status is not VerdictStatus.HOLDS:
            c_bad.append(n)

    bad = a_bad + b_bad + c_bad
    return ClaimResult(
        claim_id="upper",
        covered={
            "a_small": [31, config.upper_small_stop],
            "b_primorial_index": [4, config.upper_primorial_stop],
            "c_threshold_from": FIRST_INDEX_AT_20000,
        },
        counterexamples=bad,
        details={
            "a": {"counterexamples": a_bad, "witnesses_below_31": witnesses, "witness_30": r30_high},
            "b": {
                "counterexamples": b_bad,
                "worst_margin": worst_slack,
                "worst_at": worst_at,
            },
            "c": {
                "counterexamples": c_bad,
                "threshold_margin": _cv_pair(first.verdict.margin),
                "monotone_checked_at": monotone_at,
            },
        },
    )


# ---------------------------------------------------------------------------
# lower bound: the RH-criterion scan
# ---------------------------------------------------------------------------


def _interval_lower_point(
    table: PrimeTable, n: int
) -> tuple[CertifiedValue, CertifiedValue, CertifiedValue]:
    """113-bit interval recomputation of (R(N_n), e^gamma/zeta(2), g(p_n))."""
    ctx = MPIntervalContext()
    ctx.prec = ESCALATION_PREC_BITS
    one = ctx.mpf(1)
    s_plus = ctx.mpf(0)
    theta = ctx.mpf(0)
    for k in range(1, n + 1):
        p = ctx.mpf(table.nth_prime(k))
        s_plus += ctx.log(1 + one / p)
        theta += ctx.log(p)
    loglog = ctx.log(theta)
    ratio = ctx.exp(s_plus) / loglog
    limit = ctx.exp(+ctx.euler) / (ctx.pi**2 / 6)
    g = limit * loglog * ctx.exp(-s_plus)
    return from_mp_interval(ratio), from_mp_interval(limit), from_mp_interval(g)


def verify_lower(
    table: PrimeTable,
    n_max: int,
    *,
    checkpoints: tuple[int, ...] = (10, 100, 1000, 10**4, 10**5),
    escalate: bool = True,
) -> ClaimResult:
    """Certified scan of R(N_n) > e^gamma/zeta(2) for 3 <= n <= n_max.

    Any FAILS here would contradict a scan range where the criterion is
    known to hold, so failures are re-verified on the interval path and
    surfaced loudly rather than swallowed.  The equivalent criterion
    g(p_n) < 1 is checked at every n as a dual consistency condition.
    """
    if n_max < 3:
        raise RangeError(f"verify_lower: n_max must be >= 3, got {n_max}")
    live = tuple(c for c in checkpoints if c <= n_max)
    bad: list[int] = []
    escalated: list[int] = []
    dual_mismatch: list[int] = []
    margin_at: dict[int, list[float]] = {}
    min_margin = math.inf
    min_at = None
    one = certified(1.0)
    for point in stream_points(table, n_max):
        if point.n < 3:
            continue
        verdict = compare(point.ratio, E_GAMMA_OVER_ZETA2, ">")
        dual = compare(point.g, one, "<")
        if escalate and (
            verdict.status is not VerdictStatus.HOLDS or dual.status is not VerdictStatus.HOLDS
        ):
            escalated.append(point.n)
            lhs, rhs, g_iv = _interval_lower_point(table, point.n)
            verdict = compare(lhs, rhs, ">")
            dual = compare(g_iv, one, "<")
        if verdict.status is not VerdictStatus.HOLDS:
            bad.append(point.n)
        if dual.status is not verdict.status:
            dual_mismatch.append(point.n)
        slack = verdict.margin.lo
        if slack < min_margin:
            min_margin = slack
            min_at = point.n
        if point.n in live:
            margin_at[point.n] = _cv_pair(verdict.margin)
    trend_bad: list[int] = []
    for a, b in zip(live, live[1:]):
        va, ra = margin_at[a]
        vb, rb = margin_at[b]
        if not (vb + rb < va - ra):
            trend_bad.append(b)
    return ClaimResult(
        claim_id="lower",
        covered={"n": [3, n_max]},
        counterexamples=bad + trend_bad + dual_mismatch,
        details={
            "checkpoint_margins": {str(k): margin_at[k] for k in live},
            "margins_decreasing": not trend_bad,
            "min_margin": min_margin,
            "min_at": min_at,
            "escalated_at": escalated,
            "dual_mismatch": dual_mismatch,
        },
    )


def mertens_limit_trend(
    table: PrimeTable,
    checkpoints: tuple[int, ...] = (10, 100, 1000, 10**4, 10**5),
) -> ClaimResult:
    """Margins R(N_n) - e^gamma/zeta(2) at geometric checkpoints.

    Asserts each margin is certified positive and the sequence strictly
    decreases; a trend consistent with the limit, not a proof of it.
    """
    live = tuple(c for c in checkpoints if c <= table.count)
    if not live:
        raise RangeError("mertens_limit_trend: no checkpoint within table range")
    margins: list[CertifiedValue] = []
    bad: list[int] = []
    it = iter(stream_points(table, max(live)))
    want = set(live)
    for point in it:
        if point.n in want:
            margins.append(point.margin_lower)
            if compare(point.ratio, E_GAMMA_OVER_ZETA2, ">").status is not VerdictStatus.HOLDS:
                bad.append(point.n)
    for i, (a, b) in enumerate(zip(margins, margins[1:])):
        if compare(b, a, "<").status is not VerdictStatus.HOLDS:
            bad.append(live[i + 1])
    return ClaimResult(
        claim_id="mertens-trend",
        covered={"checkpoints": list(live)},
        counterexamples=sorted(set(bad)),
        details={"margins": {str(n): _cv_pair(m) for n, m in zip(live, margins)}},
    )


# ---------------------------------------------------------------------------
# bound-scan claims and the registry
# ---------------------------------------------------------------------------


def _bound_claim(table: PrimeTable, config: VerifyConfig, name: str, start: int) -> ClaimResult:
    stop = min(config.n_max, table.count)
    scan = scan_bound(table, name, start, stop, policy=config.stride(), escalate=config.escalate)
    return ClaimResult(
        claim_id=name,
        covered={"n": [start, stop], "points_checked": scan.points_checked},
        counterexamples=list(scan.failed_at),
        details=scan.to_dict(),
    )


def _robin_claim(table: PrimeTable, config: VerifyConfig) -> ClaimResult:
    stop = min(config.n_max, table.count)
    scan = scan_bound(table, "robin-log", 3, stop, policy=config.stride(), escalate=config.escalate)
    below = list(scan.failed_at)
    holds_from = (max(below) + 1) if below else 3
    # the bound must have settled before the index the composite bound relies on
    bad = [] if holds_from <= FIRST_INDEX_AT_20000 else [holds_from]
    return ClaimResult(
        claim_id="robin-log",
        covered={"n": [3, stop], "points_checked": scan.points_checked},
        counterexamples=bad,
        details={
            "holds_from_index": holds_from,
            "below_validity": below,
            "scan": scan.to_dict(),
        },
    )


_REGISTRY: dict[str, str] = {
    "champions": "primorials are exactly the champions of psi(m)/m (exact)",
    "reduction": "R(m) <= R(N_n) for N_n <= m < N_{n+1} (exact)",
    "upper": "R(n) < e^gamma for n > 30 (three-part certified argument)",
    "lower": "R(N_n) > e^gamma/zeta(2) for 3 <= n <= n_max (RH criterion scan)",
    "mertens-trend": "margin to e^gamma/zeta(2) positive and decreasing at checkpoints",
    "rs-product": "partial Euler product bound e^gamma(log x + 1/log x)",
    "zeta-tail": "tail bound zeta(2) prod(1-1/p^2) <= exp(2/p_n)",
    "psi-bound": "psi(N_n)/N_n composite bound for p_n >= 20000",
    "threshold": "exp(2/p_n)(1 + 1.125/(log p_n log log N_n)) <= zeta(2)",
    "robin-log": "log p_n < log log N_n + 0.125/log p_n (validity start reported)",
    "criterion-gap": "log g(x) >= log f(x) - 2/x at x = p_n",
}

CLAIM_IDS = tuple(_REGISTRY)


def claim_description(claim_id: str) -> str:
    return _REGISTRY[claim_id]


def _run_one(claim_id: str, table: PrimeTable, config: VerifyConfig) -> ClaimResult:
    if claim_id == "champions":
        return champion_scan(config.champion_limit, table)
    if claim_id == "reduction":
        return _reduction_claim(table, config)
    if claim_id == "upper":
        return verify_upper(table, config)
    if claim_id == "lower":
        return verify_lower(
            table,
            min(config.n_max, table.count),
            checkpoints=config.checkpoints,
            escalate=config.escalate,
        )
    if claim_id == "mertens-trend":
        return mertens_limit_trend(table, config.live_checkpoints())
    if claim_id == "robin-log":
        return _robin_claim(table, config)
    if claim_id in ("rs-product", "zeta-tail", "psi-bound", "threshold", "criterion-gap"):
        starts = {"rs-product": 1, "zeta-tail": 2, "psi-bound": 2263, "threshold": 2263, "criterion-gap": 3}
        return _bound_claim(table, config, claim_id, starts[claim_id])
    raise UnknownClaimError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIM_IDS)}")


def run_claims(
    claim_ids: list[str] | None,
    table: PrimeTable,
    config: VerifyConfig | None = None,
    *,
    workers: int = 1,
) -> dict:
    """Run claims (default: all) and assemble the deterministic report.

    Claims are independent jobs; worker count affects wall time only, never
    the report bytes.  Results are keyed in registry order.
    """
    config = config or VerifyConfig()
    ids = list(CLAIM_IDS) if claim_ids is None else list(claim_ids)
    for cid in ids:
        if cid not in _REGISTRY:
            raise UnknownClaimError(f"unknown claim {cid!r}; known: {', '.join(CLAIM_IDS)}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda cid: _run_one(cid, table, config), ids))
    else:
        results = [_run_one(cid, table, config) for cid in ids]
    by_id = dict(zip(ids, results))
    ordered = [cid for cid in CLAIM_IDS if cid in by_id]
    return {
        "config": config.to_dict(),
        "claims": {cid: by_id[cid].to_dict() for cid in ordered},
        "all_hold": all(by_id[cid].holds for cid in ordered),
    }
