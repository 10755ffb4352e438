"""Sieve kernel dispatch: compiled extension when available, pure Python
otherwise.

``BACKEND`` names the backend actually in use ("cython" or "pure"). Both
implement the same contract over byte-per-integer flag buffers; the test
suite runs the two against each other and ``benchmarks/bench_kernels.py``
compares their throughput.
"""

from __future__ import annotations

from math import isqrt

from . import arith

try:
    from . import _kernels as _impl  # type: ignore[attr-defined]
except ImportError:  # extension not built
    from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND_NAME

__all__ = [
    "BACKEND",
    "squarefree_flags",
    "dead_end_mask",
    "subset_mask",
    "popcount",
    "one_positions",
]


def squarefree_flags(lo: int, hi: int) -> bytearray:
    """Byte flags for the integers in [lo, hi): 1 if square-free, else 0."""
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi})")
    primes = arith.primes_up_to(isqrt(hi - 1)).primes if hi > 4 else ()
    flags = _impl.squarefree_flags(lo, hi, primes)
    if lo == 0 and len(flags):
        flags[0] = 0  # 0 is divisible by every square
    return flags


def dead_end_mask(parent, child, base: int) -> bytearray:
    """1 where parent[i] is square-free and all of child[base*i .. base*i+base-1]
    are non-square-free."""
    return _impl.dead_end_mask(parent, child, base)


def subset_mask(parent, child, base: int, digit_mask: int) -> bytearray:
    """1 where parent[i] is square-free and child[base*i+d] is square-free for
    every digit d set in digit_mask."""
    return _impl.subset_mask(parent, child, base, digit_mask)


def popcount(buf) -> int:
    """Number of 1-bytes in a 0/1 flag buffer."""
    return int.from_bytes(buf, "little").bit_count()


def one_positions(buf) -> list[int]:
    """Indices of the 1-bytes in a 0/1 flag buffer, ascending."""
    out = []
    view = bytes(buf)
    pos = view.find(b"\x01")
    while pos != -1:
        out.append(pos)
        pos = view.find(b"\x01", pos + 1)
    return out
