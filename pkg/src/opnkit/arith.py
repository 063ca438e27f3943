"""Exact integer arithmetic primitives.

Everything here is pure and exact: arbitrary-precision integers in,
arbitrary-precision integers out, no floating point anywhere.  These
functions back every other module, so determinism matters more than raw
speed: factorization uses trial division plus Brent's cycle method with a
fixed parameter schedule, and primality testing is deterministic for the
sizes this toolkit handles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd, isqrt

from .errors import BudgetError, DomainError

# Trial division pulls out every prime below this before any cycle-finding
# method runs.
TRIAL_DIVISION_LIMIT = 1_000_000

# Composite cofactors above this many bits are refused rather than risking
# an open-ended factoring job.  OPNKIT_BIT_BUDGET overrides.  Above 128
# bits the worst case is a balanced semiprime whose ~64-bit factors sit
# at the edge of what the ECM fallback finds in seconds; raising this
# buys coverage at the price of unbounded worst-case runtime.
DEFAULT_BIT_BUDGET = 128

# Strong-pseudoprime bases proving primality for everything below
# 3,317,044,064,679,887,385,961,981 (~3.3e24).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981

# Naive divisor-sum oracle cap; it exists for testing only.
DIVISOR_SUM_NAIVE_CAP = 10**7

_SMALL_PRIMES: list[int] | None = None


def bit_budget() -> int:
    """Factoring bit budget: OPNKIT_BIT_BUDGET env var or the default."""
    raw = os.environ.get("OPNKIT_BIT_BUDGET")
    if raw is None:
        return DEFAULT_BIT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"OPNKIT_BIT_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError(f"OPNKIT_BIT_BUDGET must be positive, got {value}")
    return value


def small_primes() -> list[int]:
    """All primes below TRIAL_DIVISION_LIMIT (sieved once, cached)."""
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = sieve_primes(TRIAL_DIVISION_LIMIT)
    return _SMALL_PRIMES


def sieve_primes(limit: int) -> list[int]:
    """Primes below `limit` by a plain sieve of Eratosthenes."""
    if limit <= 2:
        return []
    sieve = bytearray(b"\x01") * limit
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit - 1) + 1):
        if sieve[p]:
            start = p * p
            sieve[start::p] = b"\x00" * ((limit - 1 - start) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


# ----------------------------------------------------------------------
# Primality
# ----------------------------------------------------------------------


def _is_spsp(n: int, base: int) -> bool:
    """Strong-pseudoprime test of odd n > 2 to the given base."""
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters.

    Callers guarantee n is odd, > 2, not a perfect square, and has no
    small prime factors.
    """
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    p, q = 1, (1 - d) // 4

    k = n + 1
    s = (k & -k).bit_length() - 1
    k >>= s

    # Lucas chain: compute U_k, V_k by left-to-right binary doubling.
    u, v, qk = 1, p, q % n
    inv2 = (n + 1) // 2  # n odd, so 2 * inv2 = n + 1 = 1 (mod n)
    for bit in bin(k)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u * p + v) * inv2 % n, (v * p + u * d) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Below ~3.3e24 the fixed Miller-Rabin base set is a proof.  Above
    that, the verdict combines those bases with a strong Lucas test
    (fixed parameters, no randomness); no composite passing both is
    known, so run-to-run output is stable either way.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    for base in _MR_BASES:
        if not _is_spsp(n, base):
            return False
    if n < _MR_PROVEN_LIMIT:
        return True
    r = isqrt(n)
    if r * r == n:
        return False
    return _is_strong_lucas_prp(n)


# ----------------------------------------------------------------------
# Factorization
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Canonical prime-power form: strictly increasing primes, exponents >= 1.

    The empty tuple represents 1.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.pairs:
            if p <= last:
                raise DomainError(f"primes must be strictly increasing, got {p} after {last}")
            if e < 1:
                raise DomainError(f"exponent for prime {p} must be >= 1, got {e}")
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
            last = p

    @property
    def value(self) -> int:
        n = 1
        for p, e in self.pairs:
            n *= p**e
        return n

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)


def _pollard_brent(n: int, c: int, max_iters: int) -> int | None:
    """One Brent-rho attempt on odd composite n with x -> x^2 + c.

    Returns a nontrivial factor or None when the cycle closed or the
    iteration budget ran out.  Fully deterministic for fixed (n, c).
    """
    y, m = 2, 128
    g = r = q = 1
    x = ys = y
    count = 0
    while g == 1 and count < max_iters:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        count += r
    if g == n:
        # Backtrack one step at a time to split the batched gcd.
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    if 1 < g < n:
        return g
    return None


def _pollard_pm1(n: int, bound: int) -> int | None:
    """Pollard p-1 with a fixed smoothness bound; deterministic."""
    a = 2
    for p in small_primes():
        if p > bound:
            break
        pk = p
        while pk * p <= bound:
            pk *= p
        a = pow(a, pk, n)
        if a == 1:
            return None
    g = gcd(a - 1, n)
    if 1 < g < n:
        return g
    return None


def _split_composite(n: int) -> int:
    """Find some nontrivial factor of an odd composite n with no factor
    below TRIAL_DIVISION_LIMIT.

    Order of attack: perfect square, Pollard p-1, a short deterministic
    Brent-rho schedule (catches factors up to ~40 bits quickly), then
    sympy's factorint with its fixed-seed rho/p-1/ECM escalation for the
    stubborn cofactors.  Every stage is deterministic for a given n.
    """
    r = isqrt(n)
    if r * r == n:
        return r
    factor = _pollard_pm1(n, 100_000)
    if factor is not None:
        return factor
    for c in (1, 3, 5):
        factor = _pollard_brent(n, c, 1 << 19)
        if factor is not None:
            return factor
    from sympy import factorint as _sympy_factorint

    result = _sympy_factorint(n, multiple=False)
    smallest = min(result)
    return int(smallest)


def factorize(n: int, *, max_cofactor_bits: int | None = None) -> Factorization:
    """Canonical factorization of n >= 1.

    Trial division below TRIAL_DIVISION_LIMIT, then deterministic
    Brent-rho splitting.  If, after trial division, a composite cofactor
    wider than the bit budget remains, the call is refused with an
    explicit BudgetError (never a silent partial answer).
    """
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    budget = bit_budget() if max_cofactor_bits is None else max_cofactor_bits

    found: dict[int, int] = {}
    rest = n
    for p in small_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        if rest < TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT or is_prime(rest):
            # Below the square of the trial bound any survivor is prime.
            found[rest] = found.get(rest, 0) + 1
        else:
            if rest.bit_length() > budget:
                raise BudgetError(
                    f"composite cofactor has {rest.bit_length()} bits, above the "
                    f"{budget}-bit budget; refusing to factor"
                )
            stack = [rest]
            while stack:
                m = stack.pop()
                if is_prime(m):
                    found[m] = found.get(m, 0) + 1
                    continue
                d = _split_composite(m)
                stack.append(d)
                stack.append(m // d)
    return Factorization(tuple(sorted(found.items())))


# ----------------------------------------------------------------------
# Divisor sums and friends
# ----------------------------------------------------------------------


def sigma(f: Factorization) -> int:
    """Sum of divisors from a factorization: prod (p^(e+1)-1)/(p-1)."""
    total = 1
    for p, e in f.pairs:
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def sigma_prime_power(p: int, e: int) -> int:
    """sigma(p^e) = 1 + p + ... + p^e, p prime, e >= 0."""
    return (p ** (e + 1) - 1) // (p - 1)


def divisor_sum_naive(n: int) -> int:
    """Test oracle: sum of divisors by direct enumeration up to sqrt(n).

    Deliberately independent of factorize/sigma, and capped so nobody
    leans on it in production paths.
    """
    if n < 1:
        raise DomainError(f"divisor_sum_naive requires n >= 1, got {n}")
    if n > DIVISOR_SUM_NAIVE_CAP:
        raise BudgetError(
            f"divisor_sum_naive is a test oracle capped at {DIVISOR_SUM_NAIVE_CAP}, got {n}"
        )
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def is_perfect(n: int) -> bool:
    """True iff sigma(n) = 2n."""
    if n < 1:
        raise DomainError(f"is_perfect requires n >= 1, got {n}")
    return sigma(factorize(n)) == 2 * n


def repunit(p: int, n: int) -> int:
    """1 + p + ... + p^(n-1) = (p^n - 1)/(p - 1), exactly."""
    if p <= 1:
        raise DomainError(f"repunit requires base p >= 2, got {p}")
    if n < 1:
        raise DomainError(f"repunit requires length n >= 1, got {n}")
    return (p**n - 1) // (p - 1)


def mult_order(p: int, n: int) -> int:
    """Least e >= 1 with p^e = 1 (mod n), for gcd(p, n) = 1, n >= 2.

    Computed by reducing the group order along its prime factorization,
    then verified directly: p^e = 1 and p^(e/r) != 1 for every prime
    r | e.
    """
    if n < 2:
        raise DomainError(f"mult_order requires modulus n >= 2, got {n}")
    if gcd(p, n) != 1:
        raise DomainError(f"mult_order requires gcd(p, n) = 1, got p={p}, n={n}")
    phi = 1
    for prime, e in factorize(n).pairs:
        phi *= (prime - 1) * prime ** (e - 1)
    order = phi
    for r, _ in factorize(phi).pairs:
        while order % r == 0 and pow(p, order // r, n) == 1:
            order //= r
    if pow(p, order, n) != 1:
        raise DomainError(f"internal error: claimed order {order} fails for p={p}, n={n}")
    for r, _ in factorize(order).pairs:
        assert pow(p, order // r, n) != 1
    return order


def largest_prime_factor(t: int) -> int:
    """P(t): the largest prime dividing t >= 2."""
    if t < 2:
        raise DomainError(f"largest_prime_factor requires t >= 2, got {t}")
    return factorize(t).pairs[-1][0]


def valuation(p: int, n: int) -> int:
    """Largest e with p^e | n (e = 0 allowed), for prime p and n >= 1.

    p is primality-checked rather than trusted: a composite slipping in
    here would silently corrupt every exponent computed downstream.
    """
    if not is_prime(p):
        raise DomainError(f"valuation requires a prime p, got {p}")
    if n < 1:
        raise DomainError(f"valuation requires n >= 1, got {n}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
