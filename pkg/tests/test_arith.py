import random
from math import gcd

import pytest

from opnkit.arith import (
    Factorization,
    divisor_sum_naive,
    factorize,
    is_perfect,
    is_prime,
    largest_prime_factor,
    mult_order,
    repunit,
    sieve_primes,
    sigma,
    sigma_prime_power,
    valuation,
)
from opnkit.errors import BudgetError, DomainError


def naive_trial_division(n: int) -> list[tuple[int, int]]:
    """Independent oracle: factor by dividing out 2, 3, 5, ... in order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


class TestFactorize:
    def test_unit_has_empty_factorization(self):
        assert factorize(1).pairs == ()
        assert factorize(1).value == 1

    @pytest.mark.parametrize("n", [496, 2047, 2, 97, 1024, 600851475143])
    def test_matches_trial_division_oracle(self, n):
        assert list(factorize(n).pairs) == naive_trial_division(n)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            factorize(0)

    def test_round_trip(self):
        rng = random.Random(12345)
        for _ in range(200):
            n = rng.randrange(1, 10**12)
            assert factorize(n).value == n

    def test_deterministic(self):
        n = (2**61 - 1) * (2**31 - 1) * 73
        assert factorize(n).pairs == factorize(n).pairs

    def test_large_semiprime_split(self):
        p, q = 1_000_000_007, 999_999_999_989
        assert factorize(p * q).pairs == ((p, 1), (q, 1))

    def test_budget_refusal_is_explicit(self):
        # Two ~70-digit primes: the cofactor is far beyond any sane budget.
        p = 10**70 + 33
        assert is_prime(p)
        with pytest.raises(BudgetError, match="bit"):
            factorize(p * (p + 96), max_cofactor_bits=128)

    def test_canonical_form_validated(self):
        with pytest.raises(DomainError):
            Factorization(((4, 1),))
        with pytest.raises(DomainError):
            Factorization(((5, 1), (3, 1)))
        with pytest.raises(DomainError):
            Factorization(((3, 0),))


class TestSigma:
    @pytest.mark.parametrize(
        "n,expected", [(1, 1), (28, 56), (9, 13), (496, 992), (6, 12)]
    )
    def test_known_values(self, n, expected):
        assert sigma(factorize(n)) == expected

    def test_oracle_equivalence_sample(self):
        rng = random.Random(99)
        for _ in range(300):
            n = rng.randrange(1, 10**6)
            assert sigma(factorize(n)) == divisor_sum_naive(n)

    def test_multiplicative_on_coprime_pairs(self):
        rng = random.Random(4)
        checked = 0
        while checked < 100:
            a = rng.randrange(2, 10**5)
            b = rng.randrange(2, 10**5)
            if gcd(a, b) != 1:
                continue
            assert sigma(factorize(a * b)) == sigma(factorize(a)) * sigma(factorize(b))
            checked += 1

    def test_sigma_prime_power_is_repunit(self):
        for p in sieve_primes(101):
            for lam in range(0, 21):
                assert sigma_prime_power(p, lam) == repunit(p, lam + 1)

    def test_prime_power_coprime_to_sigma(self):
        # gcd(q^a, sigma(q^a)) = 1 for odd prime powers
        for q in sieve_primes(101):
            if q == 2:
                continue
            for a in range(1, 21):
                assert gcd(q**a, sigma_prime_power(q, a)) == 1


class TestDivisorSumNaive:
    @pytest.mark.parametrize("n,expected", [(1, 1), (6, 12), (496, 992)])
    def test_known(self, n, expected):
        assert divisor_sum_naive(n) == expected

    def test_cap_refusal(self):
        with pytest.raises(BudgetError):
            divisor_sum_naive(10**7 + 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            divisor_sum_naive(0)


class TestIsPerfect:
    @pytest.mark.parametrize("n,expected", [(6, True), (12, False), (8128, True), (28, True), (496, True), (1, False)])
    def test_known(self, n, expected):
        assert is_perfect(n) is expected

    def test_oracle_agreement(self):
        for n in range(1, 9000):
            if is_perfect(n):
                assert divisor_sum_naive(n) == 2 * n


class TestRepunit:
    @pytest.mark.parametrize("p,n,expected", [(7, 1, 1), (3, 5, 121), (5, 4, 156), (2, 10, 1023)])
    def test_known(self, p, n, expected):
        assert repunit(p, n) == expected

    def test_direct_sum_oracle(self):
        rng = random.Random(8)
        for _ in range(100):
            p = rng.randrange(2, 50)
            n = rng.randrange(1, 30)
            assert repunit(p, n) == sum(p**k for k in range(n))

    def test_domain(self):
        with pytest.raises(DomainError):
            repunit(1, 5)
        with pytest.raises(DomainError):
            repunit(3, 0)


class TestMultOrder:
    @pytest.mark.parametrize("p,n,expected", [(3, 2, 1), (3, 7, 6), (11, 3, 2), (2, 7, 3), (2, 2047, 11)])
    def test_known(self, p, n, expected):
        assert mult_order(p, n) == expected

    def test_brute_force_oracle(self):
        rng = random.Random(77)
        checked = 0
        while checked < 120:
            p = rng.randrange(2, 500)
            n = rng.randrange(2, 500)
            if gcd(p, n) != 1:
                continue
            e, x = 1, p % n
            while x != 1:
                x = x * p % n
                e += 1
            assert mult_order(p, n) == e
            checked += 1

    def test_divides_group_order(self):
        rng = random.Random(13)
        checked = 0
        while checked < 120:
            p = rng.randrange(2, 10**4)
            n = rng.randrange(2, 10**4)
            if gcd(p, n) != 1:
                continue
            phi = 1
            for prime, e in factorize(n).pairs:
                phi *= (prime - 1) * prime ** (e - 1)
            assert phi % mult_order(p, n) == 0
            checked += 1

    def test_domain(self):
        with pytest.raises(DomainError):
            mult_order(6, 9)
        with pytest.raises(DomainError):
            mult_order(3, 1)


class TestLargestPrimeFactor:
    @pytest.mark.parametrize("t,expected", [(2, 2), (121, 11), (2047, 89), (720, 5)])
    def test_known(self, t, expected):
        assert largest_prime_factor(t) == expected

    def test_domain(self):
        with pytest.raises(DomainError):
            largest_prime_factor(1)


class TestValuation:
    @pytest.mark.parametrize("p,n,expected", [(3, 120, 1), (2, 496, 4), (7, 10, 0), (5, 625, 4)])
    def test_known(self, p, n, expected):
        assert valuation(p, n) == expected

    def test_composite_p_rejected(self):
        with pytest.raises(DomainError):
            valuation(6, 36)

    def test_matches_factorization(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randrange(1, 10**9)
            pairs = dict(factorize(n).pairs)
            for p in (2, 3, 5, 7, 11):
                assert valuation(p, n) == pairs.get(p, 0)


class TestIsPrime:
    def test_small_agree_with_sieve(self):
        marks = set(sieve_primes(2000))
        for n in range(2000):
            assert is_prime(n) == (n in marks)

    @pytest.mark.parametrize(
        "n,expected",
        [
            (2**31 - 1, True),
            (2**61 - 1, True),
            (2**67 - 1, False),  # 193707721 * 761838257287
            (3215031751, False),  # strong pseudoprime to bases 2,3,5,7
            (10**24 + 7, True),
            ((10**12 + 39) ** 2, False),  # square above trial range
        ],
    )
    def test_structured_cases(self, n, expected):
        assert is_prime(n) is expected
