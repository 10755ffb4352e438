"""Square-free digit walks: child expansion, strategy-driven walk extension,
and finite-tree statistics.

A walk appends base-b digits, n -> b*n + d, keeping every value square-free.
Walk values are arbitrary-precision integers (a 10^4-step walk has 10^4
digits), so the binding constraint is not overflow but deciding
square-freeness of huge values: beyond the configured trial-division bound a
child's status can be "unknown", and walks then stop with status
"unverifiable" rather than guessing either way.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import arith, census, local
from .arith import Squarefreeness, UnverifiableError
from .census import DeadEndWitness

__all__ = [
    "WalkState",
    "WalkResult",
    "TreeStats",
    "STATUS_ALIVE",
    "STATUS_DEAD_END",
    "STATUS_UNVERIFIABLE",
    "children",
    "extend_walk",
    "transcript",
    "tree_stats",
]

STATUS_ALIVE = "alive"
STATUS_DEAD_END = "dead-end"
STATUS_UNVERIFIABLE = "unverifiable"

DEFAULT_DEPTH_CAP = 12
DEFAULT_FRONTIER_CAP = 10**7

GREEDY = "greedy"
RANDOM = "random"


@dataclass(frozen=True)
class WalkState:
    base: int
    value: int
    history: tuple[int, ...]
    steps: int

    def replay(self, root: int) -> int:
        """Fold the digit history from the root; equals value when intact."""
        n = root
        for d in self.history:
            n = self.base * n + d
        return n


@dataclass(frozen=True)
class WalkResult:
    state: WalkState
    status: str
    witness: Optional[DeadEndWitness] = None


@dataclass(frozen=True)
class TreeStats:
    """Per-depth live-node counts of the square-free digit-walk tree."""

    root: int
    depth_limit: int
    counts: tuple[int, ...]
    extinction_depth: Optional[int]
    truncated: bool


def children(base: int, n: int) -> list[tuple[int, int, bool]]:
    """All b children of n in digit order: (digit, base*n + digit,
    is_squarefree flag). Exact flags; cost grows with the cube root of the
    child values."""
    census._check_base(base)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    for d in range(base):
        value = base * n + d
        out.append((d, value, arith.is_squarefree(value)))
    return out


def _child_statuses(
    base: int, n: int, prime_bound: int
) -> list[tuple[int, int, Squarefreeness]]:
    return [
        (d, base * n + d, arith.squarefree_status(base * n + d, prime_bound)[0])
        for d in range(base)
    ]


def extend_walk(
    base: int,
    start: int,
    strategy: str = GREEDY,
    max_steps: int = 16,
    seed: Optional[int] = None,
    prime_bound: int = census.DEFAULT_FACTOR_BOUND,
) -> WalkResult:
    """Extend a walk from a square-free start.

    greedy: always append the smallest digit whose child is square-free.
    random: draw uniformly among the square-free children, deterministically
    for a fixed seed.

    Stops after max_steps ("alive"), when no child is square-free
    ("dead-end", carrying the census witness), or when trial division up to
    prime_bound cannot certify the choice ("unverifiable")."""
    census._check_base(base)
    if strategy not in (GREEDY, RANDOM):
        raise ValueError(f"unknown strategy {strategy!r}")
    if max_steps < 0:
        raise ValueError(f"max_steps must be >= 0, got {max_steps}")
    if start < 1:
        raise ValueError(f"start must be >= 1, got {start}")
    start_status, _ = arith.squarefree_status(start, prime_bound)
    if start_status is Squarefreeness.HAS_SQUARE:
        raise ValueError(f"start {start} is not square-free")
    if start_status is Squarefreeness.UNKNOWN:
        raise UnverifiableError(
            f"square-freeness of start {start} unverifiable at bound {prime_bound}"
        )
    rng = random.Random(seed)
    value = start
    history: list[int] = []
    status = STATUS_ALIVE
    witness: Optional[DeadEndWitness] = None
    for _ in range(max_steps):
        statuses = _child_statuses(base, value, prime_bound)
        squarefree = [d for d, _, st in statuses if st is Squarefreeness.SQUAREFREE]
        unknown = [d for d, _, st in statuses if st is Squarefreeness.UNKNOWN]
        if not squarefree and not unknown:
            status = STATUS_DEAD_END
            witness = _expect_witness(base, value, prime_bound)
            break
        if strategy == GREEDY:
            if unknown and (not squarefree or unknown[0] < squarefree[0]):
                status = STATUS_UNVERIFIABLE
                break
            digit = squarefree[0]
        else:
            if unknown:
                status = STATUS_UNVERIFIABLE
                break
            digit = rng.choice(squarefree)
        history.append(digit)
        value = base * value + digit
    state = WalkState(base, value, tuple(history), len(history))
    return WalkResult(state, status, witness)


def _expect_witness(base: int, value: int, prime_bound: int) -> DeadEndWitness:
    result = census.verify_dead_end(base, value, prime_bound)
    if not isinstance(result, DeadEndWitness):
        raise AssertionError(
            f"walk saw no square-free child of {value} but verification says {result}"
        )
    return result


def transcript(start: int, result: WalkResult) -> str:
    """Walk transcript, one line per step: ``step,digit,value,status``.

    Line 0 is the start value with an empty digit field; the final line
    carries the terminal status."""
    state = result.state
    lines = []
    value = start
    lines.append([0, "", value])
    for i, d in enumerate(state.history, start=1):
        value = state.base * value + d
        lines.append([i, d, value])
    out = []
    for row in lines[:-1]:
        out.append(f"{row[0]},{row[1]},{row[2]},{STATUS_ALIVE}")
    last = lines[-1]
    out.append(f"{last[0]},{last[1]},{last[2]},{result.status}")
    return "\n".join(out) + "\n"


def tree_stats(
    base: int,
    root: int,
    depth_limit: int,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
) -> TreeStats:
    """Breadth-first expansion of the square-free digit-walk tree.

    counts[k] is the number of live nodes at depth k (counts[0] = 1). If the
    frontier empties before the depth limit, extinction_depth is the last
    depth that had live nodes and later counts are 0. If the frontier would
    exceed frontier_cap the result is flagged truncated and expansion stops
    at the completed depth."""
    census._check_base(base)
    if depth_limit < 0:
        raise ValueError(f"depth_limit must be >= 0, got {depth_limit}")
    if root < 1 or not arith.is_squarefree(root):
        raise ValueError(f"root {root} must be a square-free positive integer")
    counts = [1]
    frontier = [root]
    extinction: Optional[int] = None
    truncated = False
    for depth in range(1, depth_limit + 1):
        if len(frontier) * base > frontier_cap:
            truncated = True
            break
        nxt = []
        for n in frontier:
            for d in range(base):
                value = base * n + d
                if arith.is_squarefree(value):
                    nxt.append(value)
        counts.append(len(nxt))
        frontier = nxt
        if not frontier:
            extinction = depth - 1
            counts.extend([0] * (depth_limit - depth))
            break
    return TreeStats(root, depth_limit, tuple(counts), extinction, truncated)
