"""Prime generation, Mobius/square-free primitives, square-divisor witness
extraction, and square-free sieving over integer ranges.

Everything here is exact integer arithmetic. The square-free decision
procedures come in two flavors:

* exact mode (``is_squarefree``, ``mobius``): trial division by all primes up
  to the cube root of the input, after which the remaining cofactor has at
  most two prime factors and is classified by a perfect-square check plus a
  deterministic Miller-Rabin primality test;
* bounded mode (``smallest_square_divisor``, ``squarefree_status``): trial
  division by primes up to a caller-chosen bound, with an explicit
  "undecided" outcome when the leftover cofactor is too large to classify.
  A bounded search never reports "square-free" unless that is certain.
"""

from __future__ import annotations

import enum
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

__all__ = [
    "UnverifiableError",
    "PrimeTable",
    "SieveSegment",
    "Squarefreeness",
    "primes_up_to",
    "mobius",
    "is_squarefree",
    "smallest_square_divisor",
    "squarefree_status",
    "sieve_squarefree",
    "count_in_class",
]


class UnverifiableError(Exception):
    """A square-freeness question could not be decided at the configured
    factor bound. Distinct from a refutation: nothing was proved either way."""


# ---------------------------------------------------------------------------
# primes


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``bound``, in increasing order."""

    bound: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def count_leq(self, y: int) -> int:
        """pi(y): the number of primes <= y (requires y <= bound)."""
        if y > self.bound:
            raise ValueError(f"table only covers primes <= {self.bound}")
        return bisect_right(self.primes, y)

    def next_prime_after(self, n: int) -> int:
        """Smallest prime > n in the table."""
        i = bisect_right(self.primes, n)
        if i >= len(self.primes):
            raise ValueError(f"no prime > {n} within table bound {self.bound}")
        return self.primes[i]


# Grow-only cache of the largest sieve run so far.
_cached_bound = 0
_cached_primes: tuple[int, ...] = ()

# Exact square-free decisions need primes up to cbrt(n); this cap keeps the
# prime sieve affordable (covers n up to ~1e21, comfortably past 2^64).
_MAX_EXACT_SIEVE = 10**7


def _sieve(bound: int) -> tuple[int, ...]:
    flags = bytearray(b"\x01") * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, bound + 1, p)))
    return tuple(i for i in range(2, bound + 1) if flags[i])


def primes_up_to(bound: int) -> PrimeTable:
    """All primes <= bound. Raises ValueError for bound < 2 (empty table)."""
    global _cached_bound, _cached_primes
    if bound < 2:
        raise ValueError(f"bound {bound} < 2 would give an empty prime table")
    if bound > _cached_bound:
        _cached_bound = max(bound, min(2 * bound, _MAX_EXACT_SIEVE, 10**8))
        _cached_primes = _sieve(_cached_bound)
    return PrimeTable(bound, _cached_primes[: bisect_right(_cached_primes, bound)])


# ---------------------------------------------------------------------------
# primality / perfect squares

# Deterministic witness set for n < 3317044064679887385961981.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def _miller_rabin(n: int) -> bool:
    """Primality test: deterministic below ~3.3e24; above that the same
    witness set plus a few more fixed bases (no known counterexamples)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_LIMIT else _MR_BASES + (41, 43, 47, 53, 59)
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _is_perfect_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


def _icbrt(n: int) -> int:
    """Integer cube root: largest r with r**3 <= n."""
    r = round(n ** (1.0 / 3.0))
    while r > 0 and r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


# ---------------------------------------------------------------------------
# square-free classification


class Squarefreeness(enum.Enum):
    SQUAREFREE = "squarefree"
    HAS_SQUARE = "has-square"
    UNKNOWN = "unknown"


def _classify(n: int, prime_bound: Optional[int]) -> tuple[Squarefreeness, Optional[int], int]:
    """Shared engine behind the public decision procedures.

    Returns ``(status, square_prime, distinct_factors)`` where
    ``square_prime`` is the smallest prime whose square divides n (None when
    a square divisor is proved to exist but its prime cannot be identified
    at the bound), and ``distinct_factors`` counts the distinct prime factors
    (meaningful only when status is SQUAREFREE).

    With ``prime_bound=None`` the trial division runs far enough (cube root
    of the shrinking cofactor) that the answer is always exact.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if prime_bound is not None and prime_bound < 2:
        raise ValueError(f"prime_bound must be >= 2, got {prime_bound}")
    if n == 1:
        return Squarefreeness.SQUAREFREE, None, 0
    if prime_bound is None and _icbrt(n) > _MAX_EXACT_SIEVE:
        raise ValueError(
            f"n={n} is too large for an exact square-free decision; "
            "use squarefree_status() with a prime bound"
        )

    m = n
    k = 0
    exhausted_bound = False
    limit = prime_bound if prime_bound is not None else _icbrt(n)
    table = primes_up_to(max(2, limit))
    for p in table.primes:
        if p * p * p > m:
            break
        if m % p == 0:
            m //= p
            k += 1
            if m % p == 0:
                return Squarefreeness.HAS_SQUARE, p, 0
    else:
        exhausted_bound = True

    # All prime factors of m now exceed the last trial divisor.
    if m == 1:
        return Squarefreeness.SQUAREFREE, None, k
    if _is_perfect_square(m):
        r = math.isqrt(m)
        return Squarefreeness.HAS_SQUARE, (r if _miller_rabin(r) else None), 0
    if not exhausted_bound:
        # Trial division reached cbrt of the cofactor: m is prime or a
        # product of two distinct primes; either way square-free.
        k += 1 if _miller_rabin(m) else 2
        return Squarefreeness.SQUAREFREE, None, k
    # Bound exhausted: every prime factor of m exceeds table.bound, so a
    # cofactor below (table.bound + 1)^3 has at most two prime factors.
    if _miller_rabin(m):
        return Squarefreeness.SQUAREFREE, None, k + 1
    if m < (table.bound + 1) ** 3:
        # Composite, not a square, at most two factors: square-free.
        return Squarefreeness.SQUAREFREE, None, k + 2
    return Squarefreeness.UNKNOWN, None, 0


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides n. Exact for all supported n."""
    status, _, _ = _classify(n, None)
    return status is Squarefreeness.SQUAREFREE


def mobius(n: int) -> int:
    """The Mobius function: mu(1)=1, 0 when a prime square divides n, else
    (-1)^k for k distinct prime factors. Exact for all supported n."""
    status, _, k = _classify(n, None)
    if status is Squarefreeness.HAS_SQUARE:
        return 0
    return -1 if k % 2 else 1


def smallest_square_divisor(n: int, prime_bound: int = 10**6) -> Optional[int]:
    """Smallest prime p with p*p | n, or None when n is certified square-free.

    Raises UnverifiableError when the question cannot be settled by trial
    division up to ``prime_bound`` (or when a square divisor is proved to
    exist but its prime lies beyond the bound).
    """
    status, p, _ = _classify(n, prime_bound)
    if status is Squarefreeness.SQUAREFREE:
        return None
    if status is Squarefreeness.HAS_SQUARE:
        if p is None:
            raise UnverifiableError(
                f"n={n} has a square divisor but its prime exceeds bound {prime_bound}"
            )
        return p
    raise UnverifiableError(
        f"square-freeness of n={n} undecided at prime bound {prime_bound}"
    )


def squarefree_status(
    n: int, prime_bound: int = 10**6
) -> tuple[Squarefreeness, Optional[int]]:
    """Three-way bounded verdict: (SQUAREFREE, None), (HAS_SQUARE, p or None
    when the prime could not be identified), or (UNKNOWN, None)."""
    status, p, _ = _classify(n, prime_bound)
    return status, p


# ---------------------------------------------------------------------------
# range sieving

# Guard against accidentally materializing a multi-GB segment.
_MAX_SEGMENT_SPAN = 1 << 31


@dataclass(frozen=True)
class SieveSegment:
    """Square-free flags over [lo, hi], one bit per integer.

    Bit j of ``flags`` (little-endian: ``(flags >> j) & 1``) is 1 exactly
    when lo + j is square-free.
    """

    lo: int
    hi: int
    flags: int

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def flag(self, n: int) -> bool:
        if not self.lo <= n <= self.hi:
            raise ValueError(f"{n} outside segment [{self.lo}, {self.hi}]")
        return bool((self.flags >> (n - self.lo)) & 1)

    def count(self) -> int:
        return self.flags.bit_count()

    def true_values(self) -> Iterator[int]:
        f = self.flags
        while f:
            low = f & -f
            yield self.lo + low.bit_length() - 1
            f ^= low


def _strided_mask(count: int, step: int) -> int:
    """Bits set at 0, step, 2*step, ..., (count-1)*step."""
    if step == 1:
        return (1 << count) - 1
    return ((1 << (count * step)) - 1) // ((1 << step) - 1)


def sieve_squarefree(lo: int, hi: int) -> SieveSegment:
    """Square-free flags for [lo, hi], by crossing out multiples of p*p for
    every prime p with p*p <= hi."""
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid range [{lo}, {hi}]: need 1 <= lo <= hi")
    n = hi - lo + 1
    if n > _MAX_SEGMENT_SPAN:
        raise ValueError(f"segment of {n} integers exceeds capacity {_MAX_SEGMENT_SPAN}")
    flags = (1 << n) - 1
    if hi >= 4:
        for p in primes_up_to(math.isqrt(hi)).primes:
            q = p * p
            start = ((lo + q - 1) // q) * q
            if start > hi:
                continue
            count = (hi - start) // q + 1
            flags &= ~(_strided_mask(count, q) << (start - lo))
    return SieveSegment(lo, hi, flags)


def count_in_class(X: int, M: int, a: int) -> int:
    """Exact count of n in [1, X] with n = a (mod M)."""
    if X < 0:
        raise ValueError(f"X must be >= 0, got {X}")
    if M < 1 or not 0 <= a < M:
        raise ValueError(f"need M >= 1 and 0 <= a < M, got M={M}, a={a}")
    if a == 0:
        return X // M
    if a > X:
        return 0
    return (X - a) // M + 1
