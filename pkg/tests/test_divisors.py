import random
from math import gcd, isqrt

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ebconst.divisors import (
    FACTOR_LIMIT,
    SieveBudgetError,
    divisor_count,
    divisor_sieve,
    factorize,
    is_prime,
    primes_in_range,
    primes_upto,
    progression_divisor_sum,
    valuation,
)


def brute_divisor_count(n: int) -> int:
    count = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


def brute_factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class TestFactorize:
    def test_one_is_empty_product(self):
        assert factorize(1).entries == ()
        assert factorize(1).n == 1

    @pytest.mark.parametrize("n", [12, 45, 2, 97, 1024, 2 * 3 * 5 * 7 * 11])
    def test_matches_trial_division(self, n):
        assert factorize(n).as_dict() == brute_factorize(n)

    def test_examples(self):
        assert factorize(12).as_dict() == {2: 2, 3: 1}
        assert factorize(45).as_dict() == {3: 2, 5: 1}

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            factorize(0)

    def test_over_limit_rejected(self):
        with pytest.raises(ValueError):
            factorize(FACTOR_LIMIT + 1)

    def test_entries_sorted_and_positive(self):
        fm = factorize(2**3 * 17 * 101**2)
        primes = [p for p, _ in fm]
        assert primes == sorted(primes)
        assert all(e >= 1 for _, e in fm)
        assert fm.n == 2**3 * 17 * 101**2

    @given(st.integers(min_value=1, max_value=10**9))
    @settings(max_examples=150, deadline=None)
    def test_reconstructs_input(self, n):
        fm = factorize(n)
        assert fm.n == n
        assert all(is_prime(p) for p, _ in fm)

    def test_large_semiprime(self):
        p, q = 1000003, 1000033
        assert factorize(p * q).as_dict() == {p: 1, q: 1}


class TestDivisorCount:
    @pytest.mark.parametrize("n,expected", [(1, 1), (12, 6), (45, 6)])
    def test_examples(self, n, expected):
        assert divisor_count(n) == expected

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_matches_enumeration(self, n):
        assert divisor_count(n) == brute_divisor_count(n)

    @given(st.integers(min_value=1, max_value=10**4),
           st.integers(min_value=1, max_value=10**4))
    @settings(max_examples=200, deadline=None)
    def test_multiplicative_on_coprime_pairs(self, m, n):
        if gcd(m, n) == 1:
            assert divisor_count(m * n) == divisor_count(m) * divisor_count(n)

    def test_sympy_agreement_sampled(self):
        rng = random.Random(20240517)
        for _ in range(200):
            n = rng.randint(1, 10**10)
            assert divisor_count(n) == sympy.divisor_count(n)


class TestValuation:
    @pytest.mark.parametrize("n,p,expected", [(12, 7, 0), (12, 2, 2), (45, 3, 2)])
    def test_examples(self, n, p, expected):
        assert valuation(n, p) == expected

    def test_nonprime_rejected(self):
        with pytest.raises(ValueError):
            valuation(12, 6)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            valuation(0, 2)

    @given(st.integers(min_value=1, max_value=10**6),
           st.sampled_from([2, 3, 5, 7, 11, 13]))
    @settings(max_examples=200, deadline=None)
    def test_repeated_division(self, n, p):
        e = valuation(n, p)
        assert n % p**e == 0
        assert n % p ** (e + 1) != 0


class TestPrimality:
    def test_small_values(self):
        known = {p for p in sympy.primerange(0, 2000)}
        for n in range(2000):
            assert is_prime(n) == (n in known)

    def test_sympy_agreement_sampled(self):
        rng = random.Random(99)
        for _ in range(300):
            n = rng.randint(2, 10**12)
            assert is_prime(n) == sympy.isprime(n)

    def test_prime_ranges(self):
        assert primes_in_range(5, 20) == [5, 7, 11, 13, 17, 19]
        assert primes_in_range(14, 16) == []
        assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestDivisorSieve:
    def test_examples(self):
        assert divisor_sieve(1).counts[1:].tolist() == [1]
        assert divisor_sieve(6).counts[1:].tolist() == [1, 2, 2, 3, 2, 4]
        assert divisor_sieve(12).counts[12] == 6

    def test_budget_rejection_names_sizes(self):
        with pytest.raises(SieveBudgetError, match="budget"):
            divisor_sieve(10**6, memory_budget=1000)

    def test_invariants_against_independent_sieve(self):
        # Full-range cross-check to 10**6: the additive divisor-count fill
        # against a multiplicative build from a smallest-prime-factor sieve.
        limit = 10**6
        counts = divisor_sieve(limit).counts
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, isqrt(limit) + 1):
            if spf[p] == 0:
                spf[p * p :: p][spf[p * p :: p] == 0] = p
        expected = np.ones(limit + 1, dtype=np.int64)
        for n in range(2, limit + 1):
            p = spf[n] or n
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            expected[n] = expected[m] * (e + 1)
        assert np.array_equal(counts[1:].astype(np.int64), expected[1:])
        # d(1) = 1 and d(p) = 2 for every prime p in range.
        assert counts[1] == 1
        prime_mask = np.zeros(limit + 1, dtype=bool)
        prime_mask[primes_upto(limit)] = True
        assert np.all(counts[prime_mask] == 2)
        # Pairing bound as an integer inequality: d(n)**2 <= 4n.
        n_values = np.arange(1, limit + 1, dtype=np.int64)
        d_values = counts[1:].astype(np.int64)
        assert np.all(d_values * d_values <= 4 * n_values)

    def test_random_entries_match_divisor_count(self):
        limit = 10**6
        counts = divisor_sieve(limit).counts
        rng = random.Random(1234)
        for _ in range(10**4):
            n = rng.randint(1, limit)
            assert counts[n] == divisor_count(n)

    def test_thread_count_does_not_change_output(self):
        one = divisor_sieve(10**5, threads=1).counts
        two = divisor_sieve(10**5, threads=2).counts
        four = divisor_sieve(10**5, threads=4).counts
        assert np.array_equal(one, two)
        assert np.array_equal(one, four)

    def test_zero_limit_rejected(self):
        with pytest.raises(ValueError):
            divisor_sieve(0)


class TestProgressionDivisorSum:
    @pytest.mark.parametrize("a,A,M,expected", [
        (5, 7, 1, 2),
        (1, 2, 5, 10),
        (1, 1, 3, 5),
    ])
    def test_examples(self, a, A, M, expected):
        assert progression_divisor_sum(a, A, M) == expected

    def test_random_triples_match_termwise_sum(self):
        rng = random.Random(42)
        for _ in range(10**3):
            a = rng.randint(1, 500)
            step = rng.randint(1, 300)
            count = rng.randint(1, 60)
            expected = sum(divisor_count(a + m * step) for m in range(count))
            assert progression_divisor_sum(a, step, count) == expected

    def test_range_rejection(self):
        with pytest.raises(ValueError, match="supported range"):
            progression_divisor_sum(1, FACTOR_LIMIT, 2)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            progression_divisor_sum(0, 1, 1)
