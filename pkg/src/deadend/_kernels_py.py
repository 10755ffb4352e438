"""Pure-Python sieve kernels.

Fallback backend used when the compiled extension is unavailable. The hot
loops are expressed as byte-slice assignments and whole-buffer big-integer
bitwise operations, which run at C speed inside CPython even without the
extension.

All buffers are one byte per integer with value 0 or 1.
"""

from __future__ import annotations

BACKEND_NAME = "pure"


def squarefree_flags(lo: int, hi: int, primes) -> bytearray:
    """Byte flags for [lo, hi): 1 where the integer is square-free.

    ``primes`` must contain every prime p with p*p < hi."""
    n = hi - lo
    flags = bytearray(b"\x01") * n
    for p in primes:
        q = p * p
        if q >= hi:
            break
        start = -(-lo // q) * q  # first multiple of q >= lo
        first = start - lo
        if first < n:
            count = (n - first + q - 1) // q
            flags[first::q] = b"\x00" * count
    return flags


def _lane_or(child: bytes, base: int, length: int) -> int:
    acc = 0
    for d in range(base):
        acc |= int.from_bytes(bytes(child[d::base])[:length], "little")
    return acc


def dead_end_mask(parent, child, base: int) -> bytearray:
    """Byte mask over the parent range: 1 where parent[i] is square-free and
    every child value base*i + d (0 <= d < base) is non-square-free.

    ``child`` must cover indices 0 .. base*len(parent)-1."""
    length = len(parent)
    if len(child) < base * length:
        raise ValueError("child buffer too short for parent range")
    any_child = _lane_or(child, base, length)
    ones = int.from_bytes(b"\x01" * length, "little")
    dead = int.from_bytes(bytes(parent), "little") & (any_child ^ ones)
    return bytearray(dead.to_bytes(length, "little"))


def subset_mask(parent, child, base: int, digit_mask: int) -> bytearray:
    """Byte mask over the parent range: 1 where parent[i] is square-free and
    the child base*i + d is square-free for every digit d in digit_mask."""
    length = len(parent)
    if len(child) < base * length:
        raise ValueError("child buffer too short for parent range")
    acc = int.from_bytes(bytes(parent), "little")
    for d in range(base):
        if digit_mask >> d & 1:
            acc &= int.from_bytes(bytes(child[d::base])[:length], "little")
    return bytearray(acc.to_bytes(length, "little"))
