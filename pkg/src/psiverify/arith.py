"""Exact multiplicative arithmetic functions: factorization, psi, phi, sigma.

Everything here is exact integer arithmetic (Python ints are arbitrary
precision, so nothing overflows); the only certified-float surface is
``robin_ratio``, which divides the exact rational psi(n)/n by log log n.

Dedekind psi:  psi(n) = n * prod_{p | n} (1 + 1/p)
Euler totient: phi(n) = n * prod_{p | n} (1 - 1/p)
Divisor sum:   sigma(n) = prod_{p^e || n} (p^(e+1) - 1) / (p - 1)
Robin ratio:   psi(n) / (n log log n), defined for n >= 3
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DomainError
from .numerics import CertifiedValue, cv_div, cv_from_ratio, cv_log, cv_log_int
from .primes import PrimeTable, build_table

__all__ = [
    "DEFAULT_FACTOR_LIMIT",
    "Factorization",
    "factorize",
    "psi",
    "phi",
    "sigma",
    "psi_from_factors",
    "phi_from_factors",
    "sigma_from_factors",
    "squarefree_kernel",
    "robin_ratio",
    "robin_ratio_from_factors",
    "primorial",
    "primorials_up_to",
    "psi_ratio_tables",
]

DEFAULT_FACTOR_LIMIT = 10**12

_shared_table: PrimeTable | None = None


def _trial_table(min_limit: int) -> PrimeTable:
    """Shared prime table for trial division, grown on demand."""
    global _shared_table
    if _shared_table is None or _shared_table.limit < min_limit:
        _shared_table = build_table(max(min_limit, 10**6))
    return _shared_table


@dataclass(frozen=True)
class Factorization:
    """n as an ordered multiset of (prime, exponent) pairs; empty for n = 1."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        m = 1
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError("factors must be strictly increasing with e >= 1")
            prev = p
            m *= p**e
        if m != self.n:
            raise ValueError(f"factors do not multiply back to {self.n}")

    @property
    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(
    n: int,
    table: PrimeTable | None = None,
    *,
    limit: int = DEFAULT_FACTOR_LIMIT,
) -> Factorization:
    """Factor n by trial division against the sieved prime table.

    Raises CapabilityError above ``limit``; raise the limit (and accept the
    bigger sieve) if you need more.
    """
    if n < 1:
        raise DomainError(f"factorize: n must be positive, got {n}")
    if n > limit:
        raise CapabilityError(
            f"factorize: n={n} exceeds the factorization limit {limit}; "
            "pass a larger limit to extend the sieve bound"
        )
    if n == 1:
        return Factorization(1, ())
    root = math.isqrt(n)
    if table is None or table.limit < root:
        table = _trial_table(root)
    m = n
    out: list[tuple[int, int]] = []
    for p in table.primes:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def psi_from_factors(fz: Factorization) -> int:
    out = 1
    for p, e in fz.factors:
        out *= p ** (e - 1) * (p + 1)
    return out


def phi_from_factors(fz: Factorization) -> int:
    out = 1
    for p, e in fz.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def sigma_from_factors(fz: Factorization) -> int:
    out = 1
    for p, e in fz.factors:
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def psi(n: int, table: PrimeTable | None = None) -> int:
    """Exact Dedekind psi; multiplicative, psi(1) = 1."""
    return psi_from_factors(factorize(n, table))


def phi(n: int, table: PrimeTable | None = None) -> int:
    return phi_from_factors(factorize(n, table))


def sigma(n: int, table: PrimeTable | None = None) -> int:
    return sigma_from_factors(factorize(n, table))


def squarefree_kernel(n: int, table: PrimeTable | None = None) -> int:
    """rad(n): product of the distinct primes dividing n."""
    out = 1
    for p in factorize(n, table).distinct_primes:
        out *= p
    return out


def robin_ratio_from_factors(fz: Factorization) -> CertifiedValue:
    """Certified psi(n) / (n log log n) from a known factorization."""
    n = fz.n
    if n < 3:
        raise DomainError(f"robin_ratio: undefined below 3, got n={n}")
    ratio = cv_from_ratio(psi_from_factors(fz), n)
    loglog = cv_log(cv_log_int(n))
    return cv_div(ratio, loglog)


def robin_ratio(n: int, table: PrimeTable | None = None) -> CertifiedValue:
    """Certified enclosure of psi(n) / (n log log n) for n >= 3.

    The rational part psi(n)/n is exact before the single rounded
    conversion; log log n comes from the certified log of the exact
    integer, so the enclosure stays rigorous for n beyond 53 bits.
    """
    if n < 3:
        raise DomainError(f"robin_ratio: undefined below 3, got n={n}")
    return robin_ratio_from_factors(factorize(n, table))


def primorial(n: int, table: PrimeTable | None = None) -> int:
    """Exact product of the first n primes."""
    if n < 1:
        raise DomainError(f"primorial: index must be >= 1, got {n}")
    if table is None or table.count < n:
        table = _trial_table(2)
        while table.count < n:
            table = _trial_table(table.limit * 4)
    out = 1
    for k in range(1, n + 1):
        out *= table.nth_prime(k)
    return out


def primorials_up_to(limit: int, table: PrimeTable | None = None) -> list[int]:
    """All primorial numbers <= limit, in increasing order."""
    if table is None:
        table = _trial_table(2)
    out: list[int] = []
    prod = 1
    k = 1
    while True:
        if k > table.count:
            table = _trial_table(table.limit * 4)
        prod *= table.nth_prime(k)
        if prod > limit:
            return out
        out.append(prod)
        k += 1


def psi_ratio_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact numerators/denominators of psi(m)/m for every m <= limit.

    psi(m)/m depends only on the distinct primes of m, so one pass per prime
    suffices: num[m] = prod (p+1), den[m] = prod p over p | m.  int64 is
    exact here (m <= limit has at most 15 distinct primes, and the largest
    numerator stays far below 2^63; checked before returning).
    """
    if limit < 1:
        raise DomainError("psi_ratio_tables: limit must be >= 1")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    num = np.ones(limit + 1, dtype=np.int64)
    den = np.ones(limit + 1, dtype=np.int64)
    for p in np.nonzero(flags)[0]:
        p = int(p)
        num[p::p] *= p + 1
        den[p::p] *= p
    if int(num.max()) >= (1 << 62):
        raise CapabilityError("psi_ratio_tables: int64 headroom exceeded")
    return num, den
