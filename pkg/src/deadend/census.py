"""Empirical census of dead ends: enumeration, subset counts Q_S(X), the
z-sifted counts Q_S(X; z), witness verification, and density reports.

A dead end in base b is a square-free n all of whose children b*n + d
(d = 0..b-1) are non-square-free. Enumeration pairs two segmented sieves:
parent flags over [lo, hi) and child flags over [b*lo, b*hi), so the test
for n is pure buffer lookups. Segments are processed by a thread pool and
merged in ascending order, making output deterministic regardless of
scheduling.

Environment knobs: ``DEADEND_SEGMENT_BYTES`` (total flag bytes per segment,
parent plus child; default 2^24) and ``DEADEND_THREADS`` (worker count;
default: machine parallelism).
"""

from __future__ import annotations

import itertools
import os
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import mpmath

from . import arith, euler, kernels, local
from .arith import UnverifiableError
from .local import DigitSet

__all__ = [
    "Obstruction",
    "DeadEndWitness",
    "Refutation",
    "Checkpoint",
    "CensusReport",
    "enumerate_dead_ends",
    "verify_dead_end",
    "q_count",
    "q_sifted",
    "density_report",
    "to_csv",
    "to_text",
]

DEFAULT_SEGMENT_BYTES = 1 << 24
DEFAULT_FACTOR_BOUND = 10**6


def _segment_bytes() -> int:
    raw = os.environ.get("DEADEND_SEGMENT_BYTES")
    if raw is None:
        return DEFAULT_SEGMENT_BYTES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DEADEND_SEGMENT_BYTES must be an integer, got {raw!r}") from None
    if value < 4096:
        raise ValueError(f"DEADEND_SEGMENT_BYTES must be >= 4096, got {value}")
    return value


def _thread_count() -> int:
    raw = os.environ.get("DEADEND_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DEADEND_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"DEADEND_THREADS must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class Obstruction:
    """One digit's certificate: prime with prime^2 | child = base*n + digit."""

    digit: int
    child: int
    prime: int

    def holds(self) -> bool:
        return self.child % (self.prime * self.prime) == 0


@dataclass(frozen=True)
class DeadEndWitness:
    """Full certificate that n is a dead end in the given base."""

    base: int
    n: int
    n_squarefree: bool
    obstructions: tuple[Obstruction, ...]

    def validate(self) -> bool:
        """Recheck the whole certificate by independent modular arithmetic."""
        if not self.n_squarefree or len(self.obstructions) != self.base:
            return False
        for d, ob in enumerate(self.obstructions):
            if ob.digit != d or ob.child != self.base * self.n + d:
                return False
            if ob.prime < 2 or not ob.holds():
                return False
        return True


@dataclass(frozen=True)
class Refutation:
    """Proof that n is not a dead end: either n itself is not square-free, or
    some child is square-free."""

    base: int
    n: int
    reason: str
    digit: Optional[int] = None
    child: Optional[int] = None


@dataclass(frozen=True)
class Checkpoint:
    x: int
    count: int

    @property
    def density(self) -> float:
        return self.count / self.x


@dataclass(frozen=True)
class CensusReport:
    base: int
    limit: int
    dead_end_count: int
    checkpoints: tuple[Checkpoint, ...]
    constant: euler.HPReal


# ---------------------------------------------------------------------------
# segmented scanning


def _check_base(base: int) -> None:
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if base > local.MAX_BASE:
        raise local.CapacityError(f"base {base} exceeds cap {local.MAX_BASE}")


def _segments(start: int, stop: int, seg_len: int) -> Iterator[tuple[int, int]]:
    lo = start
    while lo < stop:
        hi = min(lo + seg_len, stop)
        yield lo, hi
        lo = hi


def _spot_check_pairing(base: int, lo: int, parent, child) -> None:
    """Verify on a few random samples that the child flag consulted for
    (n, d) equals is_squarefree(base*n + d)."""
    length = len(parent)
    if length == 0:
        return
    rng = random.Random(f"{base}:{lo}:{length}")
    for _ in range(4):
        i = rng.randrange(length)
        d = rng.randrange(base)
        n = lo + i
        expected = arith.is_squarefree(base * n + d) if base * n + d > 0 else False
        got = bool(child[base * i + d])
        if got != expected:
            raise AssertionError(
                f"sieve pairing broken at n={n}, d={d}: flag {got}, truth {expected}"
            )


def _scan_segment(base: int, lo: int, hi: int) -> bytearray:
    parent = kernels.squarefree_flags(lo, hi)
    child = kernels.squarefree_flags(base * lo, base * hi)
    _spot_check_pairing(base, lo, parent, child)
    return kernels.dead_end_mask(parent, child, base)


def _scan_masks(base: int, limit: int, scan) -> Iterator[tuple[int, int, bytearray]]:
    """Yield (lo, hi, mask) in ascending segment order, scanning segments with
    a worker pool."""
    seg_len = max(1024, _segment_bytes() // (base + 1))
    segs = list(_segments(1, limit + 1, seg_len))
    workers = min(_thread_count(), len(segs))
    if workers <= 1:
        for lo, hi in segs:
            yield lo, hi, scan(base, lo, hi)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending: deque = deque()
        seg_iter = iter(segs)
        for seg in itertools.islice(seg_iter, workers + 2):
            pending.append((seg, pool.submit(scan, base, *seg)))
        while pending:
            (lo, hi), fut = pending.popleft()
            result = fut.result()
            nxt = next(seg_iter, None)
            if nxt is not None:
                pending.append((nxt, pool.submit(scan, base, *nxt)))
            yield lo, hi, result


def enumerate_dead_ends(
    base: int, limit: int, emit: Optional[Callable[[int], None]] = None
) -> int:
    """Visit every dead end n <= limit in increasing order exactly once,
    calling emit(n) for each; returns the count."""
    _check_base(base)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    count = 0
    for lo, _hi, mask in _scan_masks(base, limit, _scan_segment):
        count += kernels.popcount(mask)
        if emit is not None:
            for i in kernels.one_positions(mask):
                emit(lo + i)
    return count


def q_count(subset: DigitSet, limit: int) -> int:
    """Q_S(X): the number of n <= limit with n square-free and base*n + d
    square-free for every digit d in the subset."""
    base = subset.base
    _check_base(base)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    count = 0
    if len(subset) == 0:
        seg_len = max(4096, _segment_bytes())
        for lo, hi in _segments(1, limit + 1, seg_len):
            count += kernels.popcount(kernels.squarefree_flags(lo, hi))
        return count

    def scan(b: int, lo: int, hi: int) -> bytearray:
        parent = kernels.squarefree_flags(lo, hi)
        child = kernels.squarefree_flags(b * lo, b * hi)
        _spot_check_pairing(b, lo, parent, child)
        return kernels.subset_mask(parent, child, b, subset.mask)

    for _lo, _hi, mask in _scan_masks(base, limit, scan):
        count += kernels.popcount(mask)
    return count


def q_sifted(subset: DigitSet, limit: int, z: int) -> int:
    """Q_S(X; z): the number of n <= limit avoiding every bad residue class
    B_p(S) mod p^2 for all primes p <= z.

    Deliberately an independent code path from q_count: a plain congruence
    sieve with no square-freeness logic, so the sifted-count identity is
    tested against different machinery."""
    base = subset.base
    _check_base(base)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if z < 2:
        raise ValueError(f"z must be >= 2, got {z}")
    sieve_data = [
        (p * p, sorted(local.bad_residues_bruteforce(p, subset).bad_residues))
        for p in arith.primes_up_to(z).primes
    ]
    count = 0
    seg_len = max(4096, _segment_bytes())
    for lo, hi in _segments(1, limit + 1, seg_len):
        length = hi - lo
        buf = bytearray(b"\x01") * length
        for q, residues in sieve_data:
            for r in residues:
                first = (r - lo) % q
                if first < length:
                    n_hits = (length - first + q - 1) // q
                    buf[first::q] = b"\x00" * n_hits
        count += kernels.popcount(buf)
    return count


# ---------------------------------------------------------------------------
# verification


def verify_dead_end(
    base: int, n: int, prime_bound: int = DEFAULT_FACTOR_BOUND
) -> DeadEndWitness | Refutation:
    """Decide whether n is a dead end, with proof either way.

    Returns a DeadEndWitness (per-digit obstruction primes) or a Refutation
    (n not square-free, or the first digit whose child is square-free).
    Raises UnverifiableError when trial division up to prime_bound cannot
    settle a needed square-freeness question -- never claims a refutation
    merely because a witness was not found."""
    _check_base(base)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    undecided: list[str] = []
    n_known_squarefree = True
    try:
        q = arith.smallest_square_divisor(n, prime_bound)
    except UnverifiableError:
        n_known_squarefree = False
        undecided.append(f"square-freeness of n={n}")
    else:
        if q is not None:
            return Refutation(
                base, n, reason=f"{n} is not square-free: divisible by {q}^2"
            )
    obstructions: list[Obstruction] = []
    for d in range(base):
        child = base * n + d
        try:
            p = arith.smallest_square_divisor(child, prime_bound)
        except UnverifiableError:
            undecided.append(f"digit {d} (child {child})")
            continue
        if p is None:
            return Refutation(
                base,
                n,
                reason=f"digit {d} gives child {child}, which is square-free",
                digit=d,
                child=child,
            )
        obstructions.append(Obstruction(d, child, p))
    if undecided:
        raise UnverifiableError(
            f"unverifiable at configured bound {prime_bound}: " + "; ".join(undecided)
        )
    assert n_known_squarefree
    return DeadEndWitness(base, n, True, tuple(obstructions))


# ---------------------------------------------------------------------------
# reports


def density_report(
    base: int,
    limit: int,
    checkpoints: Optional[list[int]] = None,
    precision: int = 12,
) -> CensusReport:
    """Count dead ends up to limit, sampling D_b(x) at each checkpoint, and
    attach the reference constant c_dead(base). Pure reporting: the counts
    are exact integers and no tolerance is enforced."""
    _check_base(base)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if checkpoints is None:
        checkpoints = []
        x = 10_000
        while x < limit:
            checkpoints.append(x)
            x *= 10
    if sorted(checkpoints) != list(checkpoints):
        raise ValueError("checkpoints must be sorted ascending")
    if any(x < 1 or x > limit for x in checkpoints):
        raise ValueError("checkpoints must lie in [1, limit]")
    if not checkpoints or checkpoints[-1] != limit:
        checkpoints = list(checkpoints) + [limit]

    results: list[Checkpoint] = []
    running = 0
    idx = 0
    for lo, hi, mask in _scan_masks(base, limit, _scan_segment):
        while idx < len(checkpoints) and checkpoints[idx] < hi:
            x = checkpoints[idx]
            results.append(Checkpoint(x, running + kernels.popcount(mask[: x - lo + 1])))
            idx += 1
        running += kernels.popcount(mask)
    constant = euler.dead_end_constant(base, precision)
    return CensusReport(base, limit, running, tuple(results), constant)


def _fmt_density(count: int, x: int) -> str:
    return f"{count / x:.6e}"


def to_csv(report: CensusReport) -> str:
    """Line-oriented checkpoint table: ``x,count,density``."""
    lines = ["x,count,density"]
    for cp in report.checkpoints:
        lines.append(f"{cp.x},{cp.count},{_fmt_density(cp.count, cp.x)}")
    return "\n".join(lines) + "\n"


def to_text(report: CensusReport) -> str:
    """Structured key/value document with a nested checkpoint list."""
    c = report.constant
    lines = [
        f"base: {report.base}",
        f"limit: {report.limit}",
        f"dead_end_count: {report.dead_end_count}",
        f"empirical_density: {_fmt_density(report.dead_end_count, report.limit)}",
        f"constant: {mpmath.nstr(c.value, max(1, c.certified_digits()))}",
        f"constant_err: {mpmath.nstr(c.err, 2)}",
        "checkpoints:",
    ]
    for cp in report.checkpoints:
        lines.append(
            f"  - x: {cp.x} count: {cp.count} density: {_fmt_density(cp.count, cp.x)}"
        )
    return "\n".join(lines) + "\n"
