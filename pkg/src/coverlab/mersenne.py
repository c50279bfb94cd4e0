"""Primitive prime divisors of 2^n - 1, Wieferich tests, prime-table audit.

A prime p is a primitive divisor of 2^n - 1 when it divides 2^n - 1 but no
2^m - 1 with 0 < m < n; equivalently the multiplicative order of 2 mod p is
exactly n.  All order and valuation work here runs modulo p, p^2, ... --
2^n - 1 itself is never materialized for large n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .arith import (FactorBudget, Factorization, factor, is_probable_prime,
                    order_dividing)
from .covers import CoveringSystem


@dataclass(frozen=True)
class PrimitiveDivisorWitness:
    """(exponent n, prime p, valuation of p in 2^n - 1)."""

    n: int
    p: int
    alpha: int


@dataclass
class PrimeTable:
    """Claimed primitive prime divisors per exponent, plus omitted exponents.

    `entries` maps n to the ordered list of claimed primes; `omitted` lists
    exponents whose (single) primitive prime is not recorded.
    """

    entries: dict[int, list[int]]
    omitted: list[int]

    def all_primes(self) -> list[int]:
        return [p for primes in self.entries.values() for p in primes]


def load_prime_table(path) -> PrimeTable:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    entries = {int(e["n"]): [int(p) for p in e["primes"]] for e in raw["entries"]}
    omitted = [int(n) for n in raw.get("omitted", [])]
    return PrimeTable(entries=entries, omitted=omitted)


def store_prime_table(table: PrimeTable, path) -> None:
    payload = {
        "entries": [{"n": str(n), "primes": [str(p) for p in ps]}
                    for n, ps in table.entries.items()],
        "omitted": [str(n) for n in table.omitted],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


@lru_cache(maxsize=None)
def _factored_exponent(n: int) -> Factorization:
    f = factor(n)
    if not f.complete:
        raise ValueError(f"could not fully factor exponent {n}")
    return f


def is_primitive_divisor(p: int, n: int, n_factors: Factorization | None = None) -> bool:
    """True iff the order of 2 mod p is exactly n (so p | 2^n - 1 primitively)."""
    if n < 2:
        raise ValueError(f"exponent must be >= 2, got {n}")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if n_factors is None:
        n_factors = _factored_exponent(n)
    if pow(2, n, p) != 1:
        return False
    return order_dividing(2, p, n, n_factors) == n


def wieferich_test(p: int) -> bool:
    """2^(p-1) = 1 (mod p^2)?  Only 1093 and 3511 are known to satisfy this."""
    if p < 3 or p % 2 == 0 or not is_probable_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return pow(2, p - 1, p * p) == 1


def mersenne_valuation(p: int, n: int) -> int:
    """Largest a with p^a | 2^n - 1, by lifting the modulus p, p^2, ...

    Returns 0 when p does not divide 2^n - 1 at all.
    """
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"exponent must be >= 1, got {n}")
    if pow(2, n, p) != 1:
        return 0
    a = 1
    mod = p * p
    while pow(2, n, mod) == 1:
        a += 1
        mod *= p
    return a


@lru_cache(maxsize=None)
def _moebius(n: int) -> int:
    f = _factored_exponent(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def cyclotomic_mersenne(n: int) -> int:
    """Value of the n-th cyclotomic polynomial at 2.

    Computed as prod over d | n of (2^d - 1)^moebius(n/d); this carries
    exactly the prime factors of 2^n - 1 whose order is n, plus possibly one
    copy of the largest prime factor of n.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1:
        return 1
    num = 1
    den = 1
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _moebius(n // d)
        if mu == 1:
            num *= (1 << d) - 1
        elif mu == -1:
            den *= (1 << d) - 1
    q, r = divmod(num, den)
    if r:
        raise AssertionError("cyclotomic product did not divide exactly")
    return q


def find_primitive_divisors(
    n: int,
    budget: FactorBudget | None = None,
    candidate_bound: int = 10_000,
) -> tuple[list[PrimitiveDivisorWitness], bool]:
    """All primitive prime divisors of 2^n - 1 reachable within the budget.

    Strategy: factor the cyclotomic value at 2 (the primitive part).  Any
    prime of order n is = 1 (mod 2n when n is odd, mod n otherwise), so an
    arithmetic-progression scan up to `candidate_bound` steps strips medium
    primes cheaply before trial division and rho take over.  The boolean is
    True when the primitive part was factored completely, i.e. the witness
    list is provably exhaustive.
    """
    if n < 2:
        raise ValueError(f"exponent must be >= 2, got {n}")
    if budget is None:
        budget = FactorBudget()
    value = cyclotomic_mersenne(n)
    found: dict[int, int] = {}
    rest = value

    step = 2 * n if n % 2 else n
    for k in range(1, candidate_bound + 1):
        q = step * k + 1
        if q * q > rest:
            break
        if rest % q == 0 and is_probable_prime(q):
            while rest % q == 0:
                found[q] = found.get(q, 0) + 1
                rest //= q

    if rest > 1:
        sub = factor(rest, budget)
        for p, e in sub.factors:
            found[p] = found.get(p, 0) + e
        rest = sub.cofactor

    n_factors = _factored_exponent(n)
    witnesses = []
    for p in sorted(found):
        if order_dividing(2, p, n, n_factors) == n:
            witnesses.append(
                PrimitiveDivisorWitness(n=n, p=p, alpha=mersenne_valuation(p, n)))
    return witnesses, rest == 1


@dataclass
class TableRow:
    n: int
    p: int
    ok: bool
    reason: str = ""


@dataclass
class Erratum:
    n: int
    bad_value: int
    reason: str
    replacement: int | None
    verified: bool


@dataclass
class PrimeTableReport:
    rows: list[TableRow]
    count_mismatches: list[tuple[int, int, int]]   # (n, listed, expected)
    duplicates: list[int]
    omitted: list[int]
    omitted_consistent: bool
    errata: list[Erratum]

    @property
    def failing_rows(self) -> list[TableRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def passed(self) -> bool:
        if self.count_mismatches or self.duplicates or not self.omitted_consistent:
            return False
        explained = {(e.n, e.bad_value) for e in self.errata if e.verified}
        return all((r.n, r.p) in explained for r in self.failing_rows)


def verify_prime_table(
    cover: CoveringSystem,
    table: PrimeTable,
    errata_budget: FactorBudget | None = None,
    candidate_bound: int = 10_000,
) -> PrimeTableReport:
    """Audit a claimed prime table against a cover with odd moduli.

    Checks, per exponent n occurring among the cover moduli: the table lists
    exactly as many primes as n occurs; every listed p is prime, greater
    than 5, and has order of 2 exactly n.  Globally, all listed primes must
    be pairwise distinct, and the omitted exponents must be exactly the
    moduli with no listed primes, each occurring once.  Failing entries are
    treated as transcription errata: for each one a replacement primitive
    prime is searched within the errata budget and re-verified, never
    silently substituted.
    """
    if errata_budget is None:
        # The primitive parts behind errata rows are far beyond rho range;
        # the progression scan is what actually finds replacements.
        errata_budget = FactorBudget(trial_bound=10**5, rho_iterations=0,
                                     rho_attempts=0)
    multiplicity: dict[int, int] = {}
    for c in cover.classes:
        multiplicity[c.n] = multiplicity.get(c.n, 0) + 1

    rows: list[TableRow] = []
    count_mismatches: list[tuple[int, int, int]] = []
    for n, primes in table.entries.items():
        expected = multiplicity.get(n, 0)
        if len(primes) != expected:
            count_mismatches.append((n, len(primes), expected))
        for p in primes:
            if not is_probable_prime(p):
                rows.append(TableRow(n, p, False, "not prime"))
                continue
            if p <= 5:
                rows.append(TableRow(n, p, False, "not greater than 5"))
                continue
            if pow(2, n, p) != 1:
                rows.append(TableRow(n, p, False, f"does not divide 2^{n}-1"))
                continue
            order = order_dividing(2, p, n, _factored_exponent(n))
            if order != n:
                rows.append(TableRow(n, p, False, f"order of 2 is {order}, not {n}"))
                continue
            rows.append(TableRow(n, p, True))

    listed = table.all_primes()
    seen: set[int] = set()
    duplicates: list[int] = []
    for p in listed:
        if p in seen:
            duplicates.append(p)
        seen.add(p)

    expected_omitted = sorted(set(multiplicity) - set(table.entries))
    omitted_consistent = (
        sorted(table.omitted) == expected_omitted
        and all(multiplicity[n] == 1 for n in expected_omitted))

    errata: list[Erratum] = []
    taken = set(listed)
    for row in rows:
        if row.ok:
            continue
        witnesses, _ = find_primitive_divisors(
            row.n, budget=errata_budget, candidate_bound=candidate_bound)
        replacement = None
        for w in witnesses:
            if w.p not in taken:
                replacement = w.p
                break
        verified = (replacement is not None
                    and replacement > 5
                    and is_primitive_divisor(replacement, row.n))
        if replacement is not None:
            taken.add(replacement)
        errata.append(Erratum(n=row.n, bad_value=row.p, reason=row.reason,
                              replacement=replacement, verified=verified))

    return PrimeTableReport(
        rows=rows,
        count_mismatches=count_mismatches,
        duplicates=duplicates,
        omitted=sorted(table.omitted),
        omitted_consistent=omitted_consistent,
        errata=errata,
    )
