"""Per-index primorial data streamed without materializing the primorials.

For N_n = p_1 ... p_n the interesting quantities only need log-space prefix
sums over the primes:

    log N_n            = theta(p_n)              (from the prime table)
    psi(N_n)/N_n       = exp( sum log(1 + 1/p_k) )
    R(N_n)             = psi(N_n)/N_n / log log N_n
    g(x) = (e^g / zeta(2)) * log theta(x) * prod_{p <= x} (1 + 1/p)^(-1)
    f(x) =  e^g          * log theta(x) * prod_{p <= x} (1 - 1/p)

Three compensated accumulators run side by side:

    S_plus = sum log1p( 1/p )          for psi(N_n)/N_n and R
    S_inv  = sum log1p(-1/(p+1))       for g  (1/(1+1/p) = 1 - 1/(p+1))
    S_phi  = sum log1p(-1/p)           for f

S_inv equals -S_plus as a real number but is accumulated from differently
rounded terms, so the identity g(p_n) * R(N_n) = e^g/zeta(2) exercises two
genuinely independent floating-point paths.

g and f need log theta(x) > 0; theta(x) > 1 certainly holds from x = 5 on,
so both are restricted to x >= 5 and the stream leaves them unset at n = 2.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, RangeError
from .numerics import (
    E_GAMMA,
    E_GAMMA_OVER_ZETA2,
    CertifiedAccumulator,
    CertifiedValue,
    cv_div,
    cv_exp,
    cv_from_ratio,
    cv_log,
    cv_log1p,
    cv_mul,
    cv_sub,
)
from .primes import PrimeTable

__all__ = [
    "MIN_CRITERION_X",
    "PrimorialPoint",
    "StreamCheckpoint",
    "stream_points",
    "make_checkpoint",
    "criterion_g",
    "criterion_f",
]

MIN_CRITERION_X = 5


@dataclass(frozen=True, slots=True)
class PrimorialPoint:
    """Certified snapshot of the primorial of index n (n >= 2).

    ``g`` and ``f`` are None at n = 2 where p_n < 5 puts them outside the
    criterion functions' domain.
    """

    n: int
    p: int
    theta: CertifiedValue
    psi_over_n: CertifiedValue
    ratio: CertifiedValue
    g: CertifiedValue | None
    f: CertifiedValue | None
    margin_lower: CertifiedValue
    margin_upper: CertifiedValue


@dataclass(frozen=True)
class StreamCheckpoint:
    """Exact accumulator state after absorbing p_1 .. p_n.

    Resuming from a checkpoint reproduces the sequential stream bit for bit,
    which is what lets scans be partitioned into deterministic blocks.
    """

    n: int
    plus_state: tuple[float, float, float, int]
    inv_state: tuple[float, float, float, int]
    phi_state: tuple[float, float, float, int]


def _absorb(
    p: int,
    plus: CertifiedAccumulator,
    inv: CertifiedAccumulator,
    phi: CertifiedAccumulator,
) -> None:
    t = cv_log1p(cv_from_ratio(1, p))
    plus.add(t.value, t.radius)
    t = cv_log1p(cv_from_ratio(-1, p + 1))
    inv.add(t.value, t.radius)
    t = cv_log1p(cv_from_ratio(-1, p))
    phi.add(t.value, t.radius)


def _point(
    table: PrimeTable,
    n: int,
    plus: CertifiedAccumulator,
    inv: CertifiedAccumulator,
    phi: CertifiedAccumulator,
) -> PrimorialPoint:
    p = table.nth_prime(n)
    theta = table.theta_at_index(n)
    psi_over_n = cv_exp(plus.total())
    loglog = cv_log(theta)
    ratio = cv_div(psi_over_n, loglog)
    g = f = None
    if p >= MIN_CRITERION_X:
        g = cv_mul(cv_mul(E_GAMMA_OVER_ZETA2, loglog), cv_exp(inv.total()))
        f = cv_mul(cv_mul(E_GAMMA, loglog), cv_exp(phi.total()))
    return PrimorialPoint(
        n=n,
        p=p,
        theta=theta,
        psi_over_n=psi_over_n,
        ratio=ratio,
        g=g,
        f=f,
        margin_lower=cv_sub(ratio, E_GAMMA_OVER_ZETA2),
        margin_upper=cv_sub(E_GAMMA, ratio),
    )


def _restore(start: StreamCheckpoint | None):
    if start is None:
        return 0, CertifiedAccumulator(), CertifiedAccumulator(), CertifiedAccumulator()
    return (
        start.n,
        CertifiedAccumulator.restore(start.plus_state),
        CertifiedAccumulator.restore(start.inv_state),
        CertifiedAccumulator.restore(start.phi_state),
    )


def stream_points(
    table: PrimeTable,
    n_max: int,
    *,
    start: StreamCheckpoint | None = None,
) -> Iterator[PrimorialPoint]:
    """Yield PrimorialPoints for n = 2 .. n_max (or from a checkpoint).

    O(1) work per step beyond the table; with ``start`` the first yielded
    index is ``start.n + 1`` (which must be >= 2).
    """
    if n_max > table.count:
        raise RangeError(f"stream_points: n_max={n_max} beyond table ({table.count} primes)")
    n0, plus, inv, phi = _restore(start)
    if n_max < max(n0 + 1, 2):
        raise RangeError(f"stream_points: n_max={n_max} below stream start {max(n0 + 1, 2)}")
    for n in range(n0 + 1, n_max + 1):
        _absorb(table.nth_prime(n), plus, inv, phi)
        if n >= 2:
            yield _point(table, n, plus, inv, phi)


def make_checkpoint(table: PrimeTable, n: int, *, start: StreamCheckpoint | None = None) -> StreamCheckpoint:
    """Accumulator state after index n, for deterministic block resumes."""
    if not 1 <= n <= table.count:
        raise RangeError(f"make_checkpoint: n={n} outside [1, {table.count}]")
    n0, plus, inv, phi = _restore(start)
    if n < n0:
        raise RangeError(f"make_checkpoint: n={n} precedes checkpoint at {n0}")
    for k in range(n0 + 1, n + 1):
        _absorb(table.nth_prime(k), plus, inv, phi)
    return StreamCheckpoint(n=n, plus_state=plus.state(), inv_state=inv.state(), phi_state=phi.state())


def _criterion_common(table: PrimeTable, x: int) -> tuple[int, CertifiedValue]:
    if x < MIN_CRITERION_X:
        raise DomainError(
            f"criterion functions need x >= {MIN_CRITERION_X} so that log theta(x) > 0, got x={x}"
        )
    if x > table.limit:
        raise RangeError(f"criterion: x={x} beyond table limit {table.limit}")
    k = bisect_right(table.primes, x)
    return k, cv_log(table.theta(x))


def criterion_g(table: PrimeTable, x: int) -> CertifiedValue:
    """g(x) = (e^gamma/zeta(2)) log theta(x) prod_{p<=x} (1+1/p)^(-1), certified.

    g(p_n) < 1 is equivalent to R(N_n) > e^gamma/zeta(2).  Cost is one pass
    over the primes up to x; use the stream for dense evaluation.
    """
    k, loglog = _criterion_common(table, x)
    inv = CertifiedAccumulator()
    for p in table.primes[:k]:
        t = cv_log1p(cv_from_ratio(-1, p + 1))
        inv.add(t.value, t.radius)
    return cv_mul(cv_mul(E_GAMMA_OVER_ZETA2, loglog), cv_exp(inv.total()))


def criterion_f(table: PrimeTable, x: int) -> CertifiedValue:
    """f(x) = e^gamma log theta(x) prod_{p<=x} (1-1/p), certified (Nicolas)."""
    k, loglog = _criterion_common(table, x)
    phi = CertifiedAccumulator()
    for p in table.primes[:k]:
        t = cv_log1p(cv_from_ratio(-1, p))
        phi.add(t.value, t.radius)
    return cv_mul(cv_mul(E_GAMMA, loglog), cv_exp(phi.total()))
