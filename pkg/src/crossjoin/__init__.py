"""Generalized de Bruijn digraphs, cross-join moves between their Hamiltonian
cycles, and Algorithm H for a Hamiltonian path through the cross-join graph."""

from .cycles import (
    DeBruijnCycle,
    align,
    chang_count,
    count_formula,
    distance,
    enumerate_cycles,
    greedy_generate,
    validate,
)
from .errors import (
    BudgetExceededError,
    CrossJoinError,
    DomainError,
    InvalidCycleError,
    InvalidMoveError,
    InvariantViolationError,
    UnsupportedOperationError,
)
from .graph import DigraphParams
from .hamilton import HamiltonPathResult, find_cycle_seed, is_hamiltonian_path, run_algorithm_h
from .ops import (
    CrossJoinGraph,
    CrossJoinMove,
    apply_move,
    build_crossjoin_graph,
    crossjoin_path,
    enumerate_moves,
    is_connected,
    neighbor_histogram,
    neighbors,
)

__version__ = "0.1.0"
