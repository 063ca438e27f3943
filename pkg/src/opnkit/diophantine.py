"""Solvers and refuters for repunit prime-power equations.

The central object is the exact equation

    1 + p + ... + p^lambda = m * q^beta     (p, q odd primes, gcd(m, q) = 1)

This module enumerates its solutions over bounded boxes, refutes the
pure prime-power cases (m = 1, fixed lambda and q) by residue sweeps
modulo q^2 plus integer root extraction, and packages the outcomes as
deterministic certificates.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from math import gcd

from . import __version__
from .arith import is_prime, repunit, sieve_primes, valuation
from .errors import DomainError, InconsistencyError

NO_SOLUTIONS = "no-solutions"
SOLUTIONS_LISTED = "solutions-listed"
# The mod-q^2 sweep can only certify valuations 0 and 1.  When some
# residue class is divisible by q^2 the valuation there is unbounded by
# this method, so a clean nonexistence verdict is unavailable and the
# certificate says so instead of overclaiming.
INCONCLUSIVE = "inconclusive"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class RepunitSolution:
    """One exact solution (p, lambda, m, q, beta), validated on build.

    beta is the full q-valuation of the repunit value, so gcd(m, q) = 1.
    """

    p: int
    lam: int
    m: int
    q: int
    beta: int

    def __post_init__(self) -> None:
        if self.p < 3 or self.p % 2 == 0 or not is_prime(self.p):
            raise DomainError(f"p must be an odd prime, got {self.p}")
        if self.q < 3 or self.q % 2 == 0 or not is_prime(self.q):
            raise DomainError(f"q must be an odd prime, got {self.q}")
        if self.lam < 1:
            raise DomainError(f"lambda must be >= 1, got {self.lam}")
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        if self.beta < 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if gcd(self.m, self.q) != 1:
            raise DomainError(f"gcd(m, q) must be 1, got m={self.m}, q={self.q}")
        if repunit(self.p, self.lam + 1) != self.m * self.q**self.beta:
            raise DomainError(
                f"not a solution: repunit({self.p}, {self.lam + 1}) != {self.m} * {self.q}^{self.beta}"
            )

    def revalidate(self) -> None:
        """Re-run the construction checks (cheap; used as an op precondition)."""
        self.__post_init__()

    def sort_key(self) -> tuple[int, int]:
        return (self.p, self.lam)


@dataclass(frozen=True)
class RefutationCertificate:
    """Residue-class record that u(p) = q^(stride*beta) has no solutions.

    residue_table holds, for every class c mod q^2, the q-valuation of
    the repunit value as seen modulo q^2: 0 and 1 are exact, 2 means
    "at least 2, not resolved at this modulus".  capped is True when no
    class hit the unresolved marker, i.e. beta_cap bounds every p.
    """

    lam: int
    q: int
    beta_stride: int
    beta_cap: int
    capped: bool
    residue_table: tuple[tuple[int, int], ...]
    residual_checks: tuple[tuple[int, str], ...]
    solutions: tuple[RepunitSolution, ...]
    conclusion: str
    p_search_bound: int


@dataclass(frozen=True)
class SearchCertificate:
    """Record that a (q, lambda, p) box was exhaustively enumerated."""

    k_bound: int
    gamma: int
    p_bound: int
    solutions: tuple[RepunitSolution, ...]
    exhaustive: bool
    toolkit_version: str = __version__
    timestamp: str = field(default_factory=_utc_now)


def odd_prime_power_split(c: int) -> tuple[int, int] | None:
    """(q, beta) with c = q^beta, q an odd prime, or None.

    Works for arbitrary sizes: reduce perfect powers first, then one
    primality test on the base.
    """
    if c < 3 or c % 2 == 0:
        return None
    base, exp = c, 1
    reduced = True
    while reduced:
        reduced = False
        for e in sieve_primes(base.bit_length() + 1):
            root = _exact_root(base, e)
            if root is not None:
                base, exp = root, exp * e
                reduced = True
                break
    if is_prime(base):
        return base, exp
    return None


def _exact_root(n: int, e: int) -> int | None:
    """Integer r with r^e = n, or None."""
    if n < 2:
        return None
    r = round(n ** (1.0 / e)) if n.bit_length() < 50 else None
    if r is not None and r**e == n:
        return r
    lo, hi = 1, 1 << (n.bit_length() // e + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**e
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def solve_repunit_mq(
    m: int, p_max: int, lambda_max: int, q_max: int | None = None
) -> list[RepunitSolution]:
    """All solutions of repunit(p, lambda+1) = m * q^beta in the box.

    Covers odd primes p <= p_max and 1 <= lambda <= lambda_max; q is
    whatever odd prime the cofactor turns out to be a power of (capped
    by q_max when given).  Cofactor 1 determines no q at all and is not
    a listable solution.  Output sorted by (p, lambda).
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if p_max < 3 or lambda_max < 1:
        raise DomainError("bounds must allow at least one cell")
    out: list[RepunitSolution] = []
    for p in sieve_primes(p_max + 1):
        if p == 2:
            continue
        u = 1
        for lam in range(1, lambda_max + 1):
            u = u * p + 1
            if u % m:
                continue
            cofactor = u // m
            if cofactor == 1:
                continue
            split = odd_prime_power_split(cofactor)
            if split is None:
                continue
            q, beta = split
            if q_max is not None and q > q_max:
                continue
            if gcd(m, q) != 1:
                continue
            out.append(RepunitSolution(p, lam, m, q, beta))
    out.sort(key=RepunitSolution.sort_key)
    return out


def repunit_mod(p: int, n: int, mod: int) -> int:
    """(1 + p + ... + p^(n-1)) mod `mod` without the big intermediate.

    Doubling on the pair (u_t, p^t): u_{2t} = u_t * (p^t + 1) and
    u_{t+1} = u_t * p + 1, driven by the bits of n.
    """
    if mod == 1:
        return 0
    if n < 1:
        raise DomainError(f"repunit_mod requires n >= 1, got {n}")
    u, pk = 1 % mod, p % mod  # (u_1, p^1)
    for b in bin(n)[3:]:
        u = u * (pk + 1) % mod
        pk = pk * pk % mod
        if b == "1":
            u = (u * p + 1) % mod
            pk = pk * p % mod
    return u


def _lemma2_modulus(p: int, lam: int) -> int:
    """Required divisor of alpha+1: p^(lambda-1), trivially 1 at lambda=1."""
    return p ** (lam - 1)


def lemma2_conclusion(sol: RepunitSolution) -> int:
    """For a pure solution (m = 1), the forced modulus p^(lambda-1).

    Also re-derives the two stepping stones behind it: p divides
    q^beta - 1 exactly once, and likewise q^ord - 1 where ord is the
    order of q mod p.  These hold for every valid input; a failure is an
    internal contradiction, not a property of the data.
    """
    sol.revalidate()
    if sol.m != 1:
        raise DomainError(f"pure prime-power case requires m = 1, got m={sol.m}")
    if sol.lam == 1:
        return 1
    if valuation(sol.p, sol.q**sol.beta - 1) != 1:
        raise InconsistencyError(
            f"p={sol.p} should exactly divide q^beta - 1 = {sol.q**sol.beta - 1}"
        )
    from .arith import mult_order

    ord_q = mult_order(sol.q, sol.p)
    if valuation(sol.p, sol.q**ord_q - 1) != 1:
        raise InconsistencyError(
            f"p={sol.p} should exactly divide q^ord - 1 with ord={ord_q}"
        )
    return _lemma2_modulus(sol.p, sol.lam)


def lemma2_holds_for(sol: RepunitSolution, q_alpha: tuple[int, int]) -> bool:
    """Whether p^lambda divides repunit(q, alpha+1).

    Whenever it does, alpha+1 must be a multiple of p^(lambda-1); that
    implication is asserted and a failure raises InconsistencyError.
    """
    q, alpha = q_alpha
    sol.revalidate()
    if sol.m != 1:
        raise DomainError(f"pure prime-power case requires m = 1, got m={sol.m}")
    if sol.q != q:
        raise DomainError(f"q mismatch: solution has q={sol.q}, query has q={q}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    holds = repunit(q, alpha + 1) % sol.p**sol.lam == 0
    if holds and (alpha + 1) % _lemma2_modulus(sol.p, sol.lam) != 0:
        raise InconsistencyError(
            f"divisibility held but alpha+1={alpha + 1} is not a multiple of "
            f"{sol.p}^{sol.lam - 1}"
        )
    return holds


def refute_prime_power_eq(
    lam: int, q: int, p_search_bound: int = 10**6, beta_stride: int = 1
) -> RefutationCertificate:
    """Certificate for u(p) = 1 + p + ... + p^lam = q^(stride*beta).

    Sweep every residue class p mod q^2, reading off the q-valuation of
    u(p) as far as that modulus resolves it (0 or 1; divisible-by-q^2
    classes are marked unresolved).  When every class resolves, beta is
    globally capped and each admissible exponent is settled by exact
    integer root extraction, yielding an unconditional verdict.  When
    some class stays unresolved, every exponent reachable below
    u(p_search_bound) is still settled exactly, and the conclusion is
    "inconclusive" unless a solution turned up.

    beta_stride = 2 expresses the even-exponent reading q^(2 beta).
    """
    if q % 2 == 0:
        raise DomainError(f"q must be odd, got {q}")
    if not is_prime(q):
        raise DomainError(f"q must be prime, got {q}")
    if lam < 2 or lam % 2 != 0:
        raise DomainError(f"lambda must be even and >= 2, got {lam}")
    if beta_stride not in (1, 2):
        raise DomainError(f"beta_stride must be 1 or 2, got {beta_stride}")
    if p_search_bound < 3:
        raise DomainError(f"p_search_bound must be >= 3, got {p_search_bound}")

    qq = q * q
    table: list[tuple[int, int]] = []
    for c in range(qq):
        u_mod = sum(pow(c, j, qq) for j in range(lam + 1)) % qq
        if u_mod % q != 0:
            v = 0
        elif u_mod != 0:
            v = 1
        else:
            v = 2  # >= 2: not resolved modulo q^2
        table.append((c, v))
    beta_cap = max(v for _, v in table)
    capped = beta_cap <= 1

    if capped:
        max_exponent = beta_cap
    else:
        # Exponents whose target stays below u(p_search_bound) are still
        # decidable exactly; beyond that the certificate stops claiming.
        u_top = repunit(p_search_bound, lam + 1)
        max_exponent = 0
        while q ** (max_exponent + 1) <= u_top:
            max_exponent += 1

    checks: list[tuple[int, str]] = []
    found: list[RepunitSolution] = []
    beta = 0
    while beta * beta_stride <= max_exponent:
        target = q ** (beta * beta_stride)
        root = _monotone_root(lam, target)
        if root is None:
            checks.append((beta, "no-integer-root"))
        elif root < 3 or root % 2 == 0 or not is_prime(root):
            checks.append((beta, f"root-not-odd-prime:{root}"))
        else:
            checks.append((beta, f"solution:{root}"))
            found.append(RepunitSolution(root, lam, 1, q, beta * beta_stride))
        beta += 1

    if found:
        conclusion = SOLUTIONS_LISTED
    elif capped:
        conclusion = NO_SOLUTIONS
    else:
        conclusion = INCONCLUSIVE
    return RefutationCertificate(
        lam=lam,
        q=q,
        beta_stride=beta_stride,
        beta_cap=beta_cap,
        capped=capped,
        residue_table=tuple(table),
        residual_checks=tuple(checks),
        solutions=tuple(sorted(found, key=RepunitSolution.sort_key)),
        conclusion=conclusion,
        p_search_bound=p_search_bound,
    )


def _monotone_root(lam: int, target: int) -> int | None:
    """The integer p >= 1 with 1 + p + ... + p^lam = target, if any."""
    if target < 1:
        return None
    lo, hi = 1, 1
    while repunit_value(hi, lam) < target:
        hi *= 2
    while lo <= hi:
        mid = (lo + hi) // 2
        v = repunit_value(mid, lam)
        if v == target:
            return mid
        if v < target:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def repunit_value(p: int, lam: int) -> int:
    """1 + p + ... + p^lam for any integer p >= 1."""
    if p == 1:
        return lam + 1
    return (p ** (lam + 1) - 1) // (p - 1)


def _search_chunk(args: tuple[tuple[int, ...], int, int]) -> list[tuple[int, int, int, int]]:
    """Worker: all (q, lam, p, beta) hits for the given q values."""
    q_values, gamma, p_bound = args
    hits: list[tuple[int, int, int, int]] = []
    primes = [p for p in sieve_primes(p_bound + 1) if p != 2]
    for q in q_values:
        for lam in range(2, gamma + 1):
            for p in primes:
                if p == q:
                    # u(p) = 1 mod p, so p never divides it; q = p is vacuous.
                    continue
                if repunit_mod(p, lam + 1, q) != 0:
                    continue
                u = repunit(p, lam + 1)
                beta = 0
                while u % q == 0:
                    u //= q
                    beta += 1
                if u == 1:
                    hits.append((q, lam, p, beta))
    return hits


def theorem2_bounded_search(
    k_bound: int, gamma: int, p_bound: int, workers: int = 1
) -> SearchCertificate:
    """Exhaustively enumerate u(p) = q^beta over the stated box.

    Cells are (q odd prime <= k_bound) x (2 <= lambda <= gamma) x
    (p odd prime <= p_bound).  Work is partitioned by q; results are
    merged and sorted so the certificate is identical for any worker
    count.
    """
    if k_bound < 3:
        raise DomainError(f"k_bound must be >= 3, got {k_bound}")
    if gamma < 2:
        raise DomainError(f"gamma must be >= 2, got {gamma}")
    if p_bound < 3:
        raise DomainError(f"p_bound must be >= 3, got {p_bound}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    q_values = [q for q in sieve_primes(k_bound + 1) if q != 2]
    if workers == 1 or len(q_values) <= 1:
        hits = _search_chunk((tuple(q_values), gamma, p_bound))
    else:
        chunks = [
            (tuple(q_values[i::workers]), gamma, p_bound) for i in range(workers)
        ]
        chunks = [c for c in chunks if c[0]]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            hits = [hit for part in pool.map(_search_chunk, chunks) for hit in part]
    hits.sort()
    solutions = tuple(
        RepunitSolution(p, lam, 1, q, beta) for q, lam, p, beta in hits
    )
    return SearchCertificate(
        k_bound=k_bound,
        gamma=gamma,
        p_bound=p_bound,
        solutions=solutions,
        exhaustive=True,
    )
