"""Second-order Lucas sequences U_0=0, U_1=1, U_{n+1} = c*U_n + U_{n-1}.

c=4 gives the halved every-third-Fibonacci sequence (2*U_n = F_{3n}) whose
terms the residue-class certificates track; c=1 is Fibonacci itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_probable_prime


@dataclass(frozen=True)
class LucasSpec:
    """Recurrence parameter c >= 1 of U_{n+1} = c*U_n + U_{n-1}."""

    c: int = 4

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"recurrence parameter must be >= 1, got {self.c}")


@dataclass(frozen=True)
class SequencePeriod:
    """Least pi > 0 with (U_pi, U_{pi+1}) = (0, 1) mod the modulus.

    The whole sequence repeats mod the modulus with this period.
    """

    modulus: int
    period: int


def u_term(spec: LucasSpec, n: int) -> int:
    """Exact U_n by plain iteration (terms stay small enough here)."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    x, y = 0, 1
    for _ in range(n):
        x, y = y, spec.c * y + x
    return x


def iter_terms_mod(spec: LucasSpec, m: int, count: int) -> list[int]:
    """[U_0 mod m, ..., U_{count-1} mod m] by iteration."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    out = []
    x, y = 0, 1 % m
    for _ in range(count):
        out.append(x)
        x, y = y, (spec.c * y + x) % m
    return out


def u_term_mod(spec: LucasSpec, n: int, m: int) -> int:
    """U_n mod m in O(log n) steps via 2x2 matrix powering.

    [[c,1],[1,0]]^n = [[U_{n+1}, U_n], [U_n, U_{n-1}]], so the off-diagonal
    entry of the powered matrix is the answer.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n == 0:
        return 0
    a, b, c2, d = spec.c % m, 1 % m, 1 % m, 0   # the companion matrix
    r00, r01, r10, r11 = 1 % m, 0, 0, 1 % m     # identity
    e = n
    while e:
        if e & 1:
            r00, r01, r10, r11 = (
                (r00 * a + r01 * c2) % m, (r00 * b + r01 * d) % m,
                (r10 * a + r11 * c2) % m, (r10 * b + r11 * d) % m)
        a, b, c2, d = (
            (a * a + b * c2) % m, (a * b + b * d) % m,
            (c2 * a + d * c2) % m, (c2 * b + d * d) % m)
        e >>= 1
    return r01


def period_mod(spec: LucasSpec, m: int) -> SequencePeriod:
    """Cycle length of the pair state (U_n, U_{n+1}) mod m.

    Found by direct iteration; 6*m^2 is a defensive bound (the pair walk
    lives on at most m^2 states and returns to (0, 1)).
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    bound = 6 * m * m
    x, y = 0, 1 % m
    for n in range(1, bound + 1):
        x, y = y, (spec.c * y + x) % m
        if x == 0 and y == 1 % m:
            return SequencePeriod(modulus=m, period=n)
    raise RuntimeError(f"no period below {bound} for modulus {m}")


def rank_of_apparition(spec: LucasSpec, p: int, search_bound: int = 10**6) -> int | None:
    """Least n > 0 with p | U_n, or None if none occurs up to the bound."""
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    x, y = 0, 1 % p
    for n in range(1, search_bound + 1):
        x, y = y, (spec.c * y + x) % p
        if x == 0:
            return n
    return None


def is_primitive_divisor_u(spec: LucasSpec, p: int, n: int) -> bool:
    """True iff p divides U_n but none of U_1..U_{n-1}, i.e. rank(p) == n."""
    if n < 1:
        raise ValueError("index must be >= 1")
    return rank_of_apparition(spec, p, search_bound=n) == n


def fibonacci(n: int) -> int:
    """Exact F_n by fast doubling."""
    if n < 0:
        raise ValueError("index must be nonnegative")

    def pair(k: int) -> tuple[int, int]:
        if k == 0:
            return 0, 1
        a, b = pair(k >> 1)
        c = a * (2 * b - a)
        d = a * a + b * b
        if k & 1:
            return d, c + d
        return c, d

    return pair(n)[0]


def check_u_identity(n: int) -> bool:
    """2 * U_n(c=4) == F_{3n}."""
    return 2 * u_term(LucasSpec(4), n) == fibonacci(3 * n)


def check_rank_periodicity(spec: LucasSpec, n: int, p: int, k_max: int) -> bool:
    """Verify that U is purely periodic mod p with period n.

    Preconditions (checked, violations raise): n = 2 (mod 4), p prime, and p
    divides U_n but none of U_1..U_{n-1}.  Under these, U_{n+1} = 1 (mod p)
    and hence U_{kn+r} = U_r (mod p) for every k and r; both facts are
    verified by brute iteration for all r < n and k <= k_max.
    """
    if n <= 0 or n % 4 != 2:
        raise ValueError(f"index {n} is not = 2 (mod 4)")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    head = iter_terms_mod(spec, p, n + 1)
    if head[n] != 0:
        raise ValueError(f"{p} does not divide U_{n}")
    for i in range(1, n):
        if head[i] == 0:
            raise ValueError(f"{p} divides U_{i}, so it is not primitive at {n}")
    terms = iter_terms_mod(spec, p, (k_max + 1) * n + 2)
    if terms[n + 1] != 1 % p:
        return False
    for k in range(1, k_max + 1):
        base = k * n
        for r in range(n):
            if terms[base + r] != terms[r]:
                return False
    return True
