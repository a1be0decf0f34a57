"""Exact divisor-function machinery.

Everything here is integer-exact and deterministic: primality via a
Miller-Rabin variant whose fixed witness set is proven correct far beyond
the 64-bit range, factorization by trial division against a cached prime
list, d(n) tables by an additive sieve, and exact divisor sums over
arithmetic progressions.
"""

from __future__ import annotations

import bisect
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, prod

import numpy as np

# Trial division is sized for inputs up to this bound; the backing prime
# cache then never exceeds isqrt(FACTOR_LIMIT) = 10**7 entries.
FACTOR_LIMIT = 10**14

# Default ceiling for divisor_sieve allocations (2 bytes per entry).
SIEVE_MEMORY_BUDGET = 512 * 1024 * 1024

# This witness set decides primality for every n < 3317044064679887385961981
# (Sorenson-Webster), comfortably past FACTOR_LIMIT and the 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981


class SieveBudgetError(MemoryError):
    """Raised when a requested divisor table would exceed the memory budget."""


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**81 (and a bit beyond)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= _MR_DETERMINISTIC_BOUND:
        raise ValueError(f"{n} exceeds the deterministic witness range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_primes: list[int] = []
_prime_limit = 0
_prime_lock = threading.Lock()


def _extend_primes(limit: int) -> None:
    global _primes, _prime_limit
    with _prime_lock:
        if limit <= _prime_limit:
            return
        limit = max(limit, 2 * _prime_limit, 1 << 16)
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        _primes = np.flatnonzero(sieve).tolist()
        _prime_limit = limit


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit, ascending."""
    if limit < 2:
        return []
    _extend_primes(limit)
    return _primes[: bisect.bisect_right(_primes, limit)]


def primes_in_range(low: int, high: int) -> list[int]:
    """All primes p with low <= p <= high, ascending."""
    if high < low or high < 2:
        return []
    _extend_primes(high)
    i = bisect.bisect_left(_primes, low)
    j = bisect.bisect_right(_primes, high)
    return _primes[i:j]


@dataclass(frozen=True)
class FactorMap:
    """Prime factorization as ((prime, exponent), ...) sorted by prime."""

    entries: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return prod(p**e for p, e in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> FactorMap:
    """Full prime factorization of n >= 1 by deterministic trial division.

    Inputs above FACTOR_LIMIT are rejected rather than risking an unbounded
    prime sieve.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n > FACTOR_LIMIT:
        raise ValueError(f"factorize supports n <= {FACTOR_LIMIT}, got {n}")
    if n == 1:
        return FactorMap(())
    entries: list[tuple[int, int]] = []
    rem = n
    idx = 0
    while rem > 1:
        if is_prime(rem):
            entries.append((rem, 1))
            break
        # rem is composite, so its smallest prime factor is <= sqrt(rem).
        bound = isqrt(rem)
        while True:
            if idx >= len(_primes):
                _extend_primes(max(1 << 16, 2 * _prime_limit))
            p = _primes[idx]
            idx += 1
            if p > bound:
                raise AssertionError(
                    f"composite {rem} with no prime factor <= {bound}"
                )
            if rem % p == 0:
                break
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        entries.append((p, e))
    return FactorMap(tuple(entries))


def divisor_count(n: int) -> int:
    """d(n), the number of positive divisors of n >= 1."""
    return prod(e + 1 for _, e in factorize(n))


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n; p must be prime."""
    if n < 1:
        raise ValueError("valuation requires n >= 1")
    if not is_prime(p):
        raise ValueError(f"valuation requires a prime modulus, got {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class DivisorTable:
    """counts[n] = d(n) for 1 <= n <= limit (counts[0] is unused)."""

    limit: int
    counts: np.ndarray


def _fill_counts(counts: np.ndarray, lo: int, hi: int) -> None:
    # Adds the contribution of every divisor d < n for n in [lo, hi);
    # the divisor d = n itself is the table's initial 1.
    for d in range(1, (hi - 1) // 2 + 1):
        start = max(2 * d, ((lo + d - 1) // d) * d)
        if start < hi:
            counts[start:hi:d] += 1


def divisor_sieve(limit: int, *, memory_budget: int | None = None,
                  threads: int = 1) -> DivisorTable:
    """Divisor-count table for 1..limit in O(limit log limit) additions.

    Entries are 16-bit, wide enough for every d(n) with n within any
    budget-permitted limit. Chunked filling is deterministic: chunks are
    disjoint, so the result is identical for any thread count.
    """
    if limit < 1:
        raise ValueError("divisor_sieve requires limit >= 1")
    budget = SIEVE_MEMORY_BUDGET if memory_budget is None else memory_budget
    need = 2 * (limit + 1)
    if need > budget:
        raise SieveBudgetError(
            f"divisor table for limit {limit} needs {need} bytes but the "
            f"budget is {budget}; raise memory_budget or lower the limit"
        )
    counts = np.zeros(limit + 1, dtype=np.uint16)
    counts[1:] = 1
    if threads <= 1:
        _fill_counts(counts, 1, limit + 1)
    else:
        edges = np.linspace(1, limit + 1, threads + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            jobs = [
                pool.submit(_fill_counts, counts, int(edges[i]), int(edges[i + 1]))
                for i in range(threads)
            ]
            for job in jobs:
                job.result()
    return DivisorTable(limit, counts)


_shared_table: DivisorTable | None = None
_SHARED_TABLE_CAP = 4 * 10**6


def _shared_counts(limit: int) -> np.ndarray | None:
    """Process-wide divisor table for repeated small-range sums."""
    global _shared_table
    if limit > _SHARED_TABLE_CAP:
        return None
    if _shared_table is None or _shared_table.limit < limit:
        _shared_table = divisor_sieve(max(limit, 1 << 16))
    return _shared_table.counts


def progression_divisor_sum(a: int, step: int, count: int) -> int:
    """Exact sum of d(a + m*step) over m = 0..count-1."""
    if a < 1 or step < 1 or count < 1:
        raise ValueError("progression_divisor_sum requires a, step, count >= 1")
    last = a + (count - 1) * step
    if last > FACTOR_LIMIT:
        raise ValueError(
            f"last term {last} exceeds the supported range {FACTOR_LIMIT}"
        )
    if count >= 16:
        counts = _shared_counts(last)
        if counts is not None:
            return int(counts[a : last + 1 : step].sum(dtype=np.int64))
    return sum(divisor_count(a + m * step) for m in range(count))
