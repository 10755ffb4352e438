"""Per-prime local data for digit subsets: the bad-residue set B_p(S) modulo
p^2 and its cardinality nu.

A residue n mod p^2 is *bad* for (p, base b, digit set S) when p^2 divides n
or divides b*n + d for some d in S. A prime is *regular* for base b when
p does not divide b and p^2 >= b; in that regime b is invertible mod p^2 and
distinct digits select distinct residue classes, giving the closed form
nu = 1 + |S| - [0 in S]. All other primes are handled by brute-force
enumeration, which is exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import arith

__all__ = [
    "CapacityError",
    "DigitSet",
    "LocalData",
    "bad_residues_bruteforce",
    "nu_closed_form",
    "nu",
    "is_regular",
    "regular_threshold",
]

# Inclusion-exclusion in the euler module walks all 2^b subsets.
MAX_BASE = 24

# Guardrail for brute-force residue enumeration (cannot bind for b <= 1e4).
_MAX_BRUTE_PSQ = 10**8


class CapacityError(Exception):
    """A request exceeds a documented capacity cap (not a math error)."""


@dataclass(frozen=True)
class DigitSet:
    """A subset of the base-b digits {0, ..., b-1}, stored as a bitmask."""

    base: int
    mask: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.base > MAX_BASE:
            raise CapacityError(f"base {self.base} exceeds cap {MAX_BASE}")
        if not 0 <= self.mask < (1 << self.base):
            raise ValueError(
                f"mask {self.mask:#x} has digits outside 0..{self.base - 1}"
            )

    @classmethod
    def from_digits(cls, base: int, digits: Iterable[int]) -> "DigitSet":
        mask = 0
        for d in digits:
            if not 0 <= d < base:
                raise ValueError(f"digit {d} out of range for base {base}")
            mask |= 1 << d
        return cls(base, mask)

    @classmethod
    def empty(cls, base: int) -> "DigitSet":
        return cls(base, 0)

    @classmethod
    def full(cls, base: int) -> "DigitSet":
        return cls(base, (1 << base) - 1)

    @classmethod
    def parse(cls, base: int, text: str) -> "DigitSet":
        """Comma-separated digits; empty string = empty set; 'all' = full."""
        text = text.strip()
        if text == "":
            return cls.empty(base)
        if text.lower() == "all":
            return cls.full(base)
        try:
            digits = [int(part) for part in text.split(",")]
        except ValueError:
            raise ValueError(f"malformed digit subset {text!r}") from None
        return cls.from_digits(base, digits)

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(d for d in range(self.base) if self.mask >> d & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, d: int) -> bool:
        return 0 <= d < self.base and bool(self.mask >> d & 1)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.digits)) + "}"


@dataclass(frozen=True)
class LocalData:
    """B_p(S) and nu = |B_p(S)| for one prime."""

    p: int
    base: int
    subset: DigitSet
    bad_residues: frozenset[int]
    nu: int


def _check_prime(p: int) -> None:
    if p < 2 or not arith._miller_rabin(p):
        raise ValueError(f"p={p} is not prime")


@lru_cache(maxsize=None)
def _digit_residues(p: int, base: int, d: int) -> frozenset[int]:
    """Residues r in [0, p^2) with p^2 | (base*r + d), by full enumeration."""
    q = p * p
    return frozenset(r for r in range(q) if (base * r + d) % q == 0)


def bad_residues_bruteforce(p: int, subset: DigitSet) -> LocalData:
    """Enumerate all residues n in [0, p^2) and keep those with p^2 | n or
    p^2 | (b*n + d) for some d in the subset. Exact by construction."""
    _check_prime(p)
    if p * p > _MAX_BRUTE_PSQ:
        raise CapacityError(f"brute force refused for p^2 = {p * p} > {_MAX_BRUTE_PSQ}")
    bad = {0}
    for d in subset.digits:
        bad |= _digit_residues(p, subset.base, d)
    return LocalData(p, subset.base, subset, frozenset(bad), len(bad))


def is_regular(p: int, base: int) -> bool:
    """Regular regime: p does not divide the base and p^2 >= base."""
    return base % p != 0 and p * p >= base


def nu_closed_form(p: int, subset: DigitSet) -> int:
    """nu for regular primes: 1 + |S| - [0 in S].

    Raises ValueError outside the regular regime (caller must brute-force).
    """
    _check_prime(p)
    if not is_regular(p, subset.base):
        raise ValueError(
            f"p={p} is not regular for base {subset.base}; use brute force"
        )
    return 1 + len(subset) - (1 if 0 in subset else 0)


def nu(p: int, subset: DigitSet) -> int:
    """|B_p(S)|: closed form in the regular regime, brute force otherwise."""
    if is_regular(p, subset.base):
        _check_prime(p)
        return 1 + len(subset) - (1 if 0 in subset else 0)
    return bad_residues_bruteforce(p, subset).nu


def regular_threshold(base: int) -> int:
    """Smallest prime P0 such that every prime p >= P0 is regular for the
    base; all primes below P0 are treated as irregular."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    # Irregular primes divide the base or have p^2 < base, so they are <= base.
    table = arith.primes_up_to(2 * base + 30)
    irregular = [p for p in table.primes if p <= base and not is_regular(p, base)]
    if not irregular:
        return 2
    return table.next_prime_after(max(irregular))


def irregular_primes(base: int) -> tuple[int, ...]:
    """All primes below regular_threshold(base), the brute-forced set."""
    p0 = regular_threshold(base)
    if p0 == 2:
        return ()
    return tuple(p for p in arith.primes_up_to(p0 - 1).primes)
