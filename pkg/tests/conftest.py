"""Shared naive oracles and comparison helpers.

The oracles here are deliberately primitive re-implementations (per-integer
trial division, exhaustive residue scans, byte-marking of square multiples)
that share no code with the package; tests compare the fast paths against
them exactly.
"""

from __future__ import annotations

from decimal import ROUND_DOWN, Decimal

import mpmath
import pytest


# ---------------------------------------------------------------------------
# naive arithmetic oracles


def naive_is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def naive_mobius(n: int) -> int:
    if n < 1:
        raise ValueError(n)
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def naive_primes(bound: int) -> list[int]:
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, bound + 1, p))
    return [i for i, f in enumerate(flags) if f]


def naive_squarefree_flags(limit: int) -> bytearray:
    """flags[n] = 1 iff n is square-free, for 0 <= n <= limit, by marking
    multiples of every square d^2 (composite d included -- redundant but
    obviously correct)."""
    flags = bytearray([1]) * (limit + 1)
    flags[0] = 0
    d = 2
    while d * d <= limit:
        step = d * d
        flags[step::step] = b"\x00" * (limit // step)
        d += 1
    return flags


def naive_bad_residues(p: int, base: int, digits) -> set[int]:
    """B_p(S) by full scan of n mod p^2."""
    q = p * p
    bad = set()
    for r in range(q):
        if r % q == 0 or any((base * r + d) % q == 0 for d in digits):
            bad.add(r)
    return bad


def naive_dead_ends(base: int, limit: int) -> list[int]:
    flags = naive_squarefree_flags(base * limit + base)
    out = []
    for n in range(1, limit + 1):
        if flags[n] and not any(flags[base * n + d] for d in range(base)):
            out.append(n)
    return out


def naive_q_count(base: int, digits, limit: int) -> int:
    flags = naive_squarefree_flags(base * limit + base)
    count = 0
    for n in range(1, limit + 1):
        if flags[n] and all(flags[base * n + d] for d in digits):
            count += 1
    return count


# ---------------------------------------------------------------------------
# printed-figure comparison (values are printed truncated, not rounded)


def truncate_sig(x, k: int) -> Decimal:
    """Truncate x toward zero to k significant decimal digits."""
    d = x if isinstance(x, Decimal) else Decimal(str(x))
    if d == 0:
        return Decimal(0)
    return d.quantize(Decimal(1).scaleb(d.adjusted() - k + 1), rounding=ROUND_DOWN)


def matches_printed(value, printed: str) -> bool:
    """True when value, truncated to the number of significant digits in the
    printed string, equals it."""
    target = Decimal(printed)
    k = len(target.as_tuple().digits)
    got = Decimal(mpmath.nstr(value, k + 10))
    return truncate_sig(got, k) == target


@pytest.fixture
def mp_workprec():
    """Context manager fixture: temporarily raise mpmath precision."""
    from contextlib import contextmanager

    @contextmanager
    def setter(dps: int):
        old = mpmath.mp.dps
        mpmath.mp.dps = dps
        try:
            yield
        finally:
            mpmath.mp.dps = old

    return setter
