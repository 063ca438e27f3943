"""Primitive prime divisors of a^n - 1 and the z-order machinery.

A prime P dividing a^n - 1 is primitive when it divides no a^m - 1 with
m < n; such a prime has multiplicative order exactly n, hence P = 1
(mod n).  For n >= 7 one always exists (Bang's theorem; n = 6, a = 2 is
the classical exception).  On top of that sits z_p(m), the smallest
possible index such that m | 1 + p + ... + p^(z-1), and the exponent
bound lambda + 1 <= m^2 for repunit cofactor equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .arith import factorize, is_prime, mult_order, repunit, sieve_primes
from .errors import BudgetError, DomainError, InconsistencyError
from .diophantine import RepunitSolution

CONGRUENT_CASE = "congruent-case"
ORDER_CASE = "order-case"


@dataclass(frozen=True)
class BangWitness:
    """Primitive-prime classification of a^n - 1."""

    a: int
    n: int
    primitive_primes: tuple[int, ...]
    exists: bool


@dataclass(frozen=True)
class ZOrderSpec:
    """z_p(m) with its per-prime-power breakdown.

    Each entry is (r^delta, z value, branch): the z value is r^delta
    itself when p = 1 (mod r), else the order of p mod r^delta.
    z_value is the lcm over all entries; for m >= 2 it sits in [2, m].
    """

    p: int
    m: int
    z_value: int
    per_prime_power: tuple[tuple[int, int, str], ...]


@dataclass(frozen=True)
class Lemma1Verdict:
    """Outcome of the exponent bound lambda + 1 <= m^2 on one solution.

    applicable reflects the bound's working context (m >= 2, both
    primes odd, 4 does not divide m); outside it nothing is claimed.
    contradiction marks an applicable violation, which no valid
    solution can produce.
    """

    applicable: bool
    holds: bool

    @property
    def contradiction(self) -> bool:
        return self.applicable and not self.holds


def _proper_divisors(n: int) -> list[int]:
    out = [d for d in range(1, n // 2 + 1) if n % d == 0]
    return out


def primitive_prime_divisors(
    a: int, n: int, *, max_cofactor_bits: int | None = None
) -> BangWitness:
    """Factor a^n - 1 and classify each prime as primitive or not.

    A prime is primitive exactly when it divides no a^m - 1 for a proper
    divisor m of n (any other m < n reduces to gcd(m, n)).  Factoring
    refuses with BudgetError when the composite cofactor exceeds the bit
    budget, rather than running without a time bound.
    """
    if a < 2:
        raise DomainError(f"base a must be >= 2, got {a}")
    if n < 2:
        raise DomainError(f"exponent n must be >= 2, got {n}")
    try:
        factors = factorize(a**n - 1, max_cofactor_bits=max_cofactor_bits)
    except BudgetError as exc:
        raise BudgetError(f"refusing ({a}, {n}): {exc}") from exc
    divisors = _proper_divisors(n)
    primitive = []
    for prime, _ in factors.pairs:
        if all(pow(a, m, prime) != 1 for m in divisors):
            primitive.append(prime)
            if prime % n != 1:
                raise InconsistencyError(
                    f"primitive prime {prime} of {a}^{n}-1 is not 1 mod {n}"
                )
    witness = BangWitness(a, n, tuple(primitive), bool(primitive))
    if n >= 7 and not witness.exists:
        raise InconsistencyError(
            f"no primitive prime divisor of {a}^{n}-1 despite n={n} >= 7"
        )
    return witness


def z_prime_power(p: int, r: int, delta: int) -> int:
    """z for a single prime power r^delta: r^delta if p = 1 (mod r),
    else the multiplicative order of p mod r^delta."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    if not is_prime(r):
        raise DomainError(f"r must be prime, got {r}")
    if delta < 1:
        raise DomainError(f"delta must be >= 1, got {delta}")
    if p == r:
        raise DomainError(f"p = r = {p}: order is undefined")
    if p % r == 1:
        return r**delta
    return mult_order(p, r**delta)


def z_composite(p: int, m: int) -> ZOrderSpec:
    """z_p(m): lcm of z over the prime powers exactly dividing m."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if gcd(p, m) != 1:
        raise DomainError(f"gcd(p, m) must be 1, got p={p}, m={m}")
    entries = []
    for r, delta in factorize(m).pairs:
        z = z_prime_power(p, r, delta)
        branch = CONGRUENT_CASE if p % r == 1 else ORDER_CASE
        entries.append((r**delta, z, branch))
    z_value = lcm(*(z for _, z, _ in entries)) if entries else 1
    return ZOrderSpec(p=p, m=m, z_value=z_value, per_prime_power=tuple(entries))


def lemma1_bound_check(sol: RepunitSolution) -> Lemma1Verdict:
    """Exponent bound lambda + 1 <= m^2 for one validated solution.

    The bound is only claimed when m >= 2, both primes are odd, and
    4 does not divide m; other solutions are recorded as outside
    applicability, never asserted false.
    """
    sol.revalidate()
    applicable = (
        sol.m >= 2 and sol.p % 2 == 1 and sol.q % 2 == 1 and sol.m % 4 != 0
    )
    holds = sol.lam + 1 <= sol.m**2
    return Lemma1Verdict(applicable=applicable, holds=holds)


@dataclass(frozen=True)
class Lemma1BoxReport:
    """Exhaustive exponent-bound audit over a (p, lambda, m) box."""

    p_max: int
    lambda_max: int
    m_max: int
    q_max: int | None
    solutions: tuple[tuple[RepunitSolution, Lemma1Verdict], ...]
    violations: tuple[RepunitSolution, ...]


def lemma1_box_check(
    p_max: int, lambda_max: int, m_max: int, q_max: int | None = None
) -> Lemma1BoxReport:
    """Enumerate every solution in the box and run the bound on each.

    Skips m divisible by 4 (outside the bound's context) and cofactor-1
    cells (no q to name).  A violation here would contradict a proven
    bound, so callers treat any as an internal-inconsistency event.
    """
    if p_max < 3 or lambda_max < 1 or m_max < 2:
        raise DomainError("box must contain at least one cell")
    checked: list[tuple[RepunitSolution, Lemma1Verdict]] = []
    violations: list[RepunitSolution] = []
    odd_primes = [p for p in sieve_primes(p_max + 1) if p != 2]
    sieve = sieve_primes(q_max + 1) if q_max is not None else None
    for p in odd_primes:
        u = 1
        for lam in range(1, lambda_max + 1):
            u = u * p + 1
            for m in range(2, m_max + 1):
                if m % 4 == 0 or u % m:
                    continue
                cofactor = u // m
                if cofactor == 1:
                    continue
                q, beta = _power_of_bounded_prime(cofactor, sieve)
                if q is None or q == 2 or gcd(m, q) != 1:
                    continue
                sol = RepunitSolution(p, lam, m, q, beta)
                verdict = lemma1_bound_check(sol)
                checked.append((sol, verdict))
                if verdict.contradiction:
                    violations.append(sol)
    return Lemma1BoxReport(
        p_max=p_max,
        lambda_max=lambda_max,
        m_max=m_max,
        q_max=q_max,
        solutions=tuple(checked),
        violations=tuple(violations),
    )


def _power_of_bounded_prime(
    c: int, sieve: list[int] | None
) -> tuple[int | None, int]:
    """(q, beta) with c = q^beta for a prime q in the sieve, else (None, 0).

    With no sieve, falls back to the general odd-prime-power split.
    """
    if sieve is None:
        from .diophantine import odd_prime_power_split

        split = odd_prime_power_split(c)
        return (None, 0) if split is None else split
    for q in sieve:
        if c % q == 0:
            beta = 0
            while c % q == 0:
                c //= q
                beta += 1
            return (q, beta) if c == 1 else (None, 0)
    return (None, 0)
