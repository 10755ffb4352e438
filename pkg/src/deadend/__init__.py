"""deadend: dead ends in square-free digit walks.

A square-free digit walk appends base-b digits, n -> b*n + d, keeping every
value square-free. A dead end is a square-free n all of whose b children are
non-square-free. This package computes the exact asymptotic density of dead
ends for any base (an alternating sum of Euler products, evaluated with
certified error bounds), enumerates and verifies actual dead ends, and
contrasts the truth with the naive branching-model prediction.
"""

from .arith import (
    Squarefreeness,
    UnverifiableError,
    count_in_class,
    is_squarefree,
    mobius,
    primes_up_to,
    sieve_squarefree,
    smallest_square_divisor,
    squarefree_status,
)
from .census import (
    CensusReport,
    DeadEndWitness,
    Refutation,
    density_report,
    enumerate_dead_ends,
    q_count,
    q_sifted,
    verify_dead_end,
)
from .euler import (
    HPReal,
    PrecisionError,
    TailTable,
    allowed_class_count,
    build_tail_table,
    dead_end_constant,
    finite_product,
    prime_power_sum,
    subset_constant,
    tail_product,
    zeta_even,
)
from .kernels import BACKEND
from .local import CapacityError, DigitSet, irregular_primes, nu, regular_threshold
from .stochastic import iterate_p, model_gap, p1, predicted_density
from .walker import TreeStats, WalkState, children, extend_walk, tree_stats

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    "Squarefreeness",
    "UnverifiableError",
    "CapacityError",
    "PrecisionError",
    "DigitSet",
    "HPReal",
    "TailTable",
    "CensusReport",
    "DeadEndWitness",
    "Refutation",
    "TreeStats",
    "WalkState",
    "is_squarefree",
    "mobius",
    "smallest_square_divisor",
    "squarefree_status",
    "primes_up_to",
    "sieve_squarefree",
    "count_in_class",
    "nu",
    "regular_threshold",
    "irregular_primes",
    "zeta_even",
    "prime_power_sum",
    "tail_product",
    "build_tail_table",
    "finite_product",
    "allowed_class_count",
    "subset_constant",
    "dead_end_constant",
    "enumerate_dead_ends",
    "verify_dead_end",
    "q_count",
    "q_sifted",
    "density_report",
    "p1",
    "iterate_p",
    "predicted_density",
    "model_gap",
    "children",
    "extend_walk",
    "tree_stats",
]
