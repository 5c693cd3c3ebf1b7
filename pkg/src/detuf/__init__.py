"""detuf: deterministic parallel union-find experiments.

A library and CLI for the windowed, internally deterministic parallel
union-find algorithm, the sequentialized collision process it is built
on, a synchronous contention model, and the cycle-graph lower-bound
experiments. Everything is reproducible from a single 64-bit seed.
"""

from .collisions import (
    ProcessTrace,
    StepStats,
    collides,
    collides_simplified,
    monte_carlo_pt,
    potential,
    replay_process,
    run_random_process,
    simplified_p_trace,
    step_stats,
    toy_window_collisions,
)
from .contention import ContentionRun, simulate_contention, sweep_contention
from .forest import (
    ContractViolation,
    Forest,
    LinkingStrategy,
    UnionOutcome,
    new_forest,
)
from .graphs import (
    Edge,
    EdgeFileError,
    EdgeSequence,
    ParameterError,
    assign_random_weights,
    generate,
    parse_edge_file,
    shuffle,
    write_edge_file,
)
from .lowerbounds import (
    MinimaStats,
    count_local_minima,
    maximal_window_iterations,
    minima_experiment,
    prefix_no_collision_prob,
    prefix_no_collision_sweep,
)
from .parallel import (
    MstResult,
    ReservationTable,
    RunStats,
    WindowPolicy,
    WorkCounters,
    bulk_find_roots,
    first_failure,
    make_reservations,
    parallel_kruskal,
    parallel_link_all,
    run_windowed,
    sequential_run,
    verify_internal_determinism,
    write_min,
)
from .rng import Rng

__version__ = "0.1.0"

__all__ = [
    "ContentionRun", "ContractViolation", "Edge", "EdgeFileError",
    "EdgeSequence", "Forest", "LinkingStrategy", "MinimaStats", "MstResult",
    "ParameterError", "ProcessTrace", "ReservationTable", "Rng", "RunStats",
    "StepStats", "UnionOutcome", "WindowPolicy", "WorkCounters",
    "assign_random_weights", "bulk_find_roots", "collides",
    "collides_simplified", "count_local_minima", "first_failure", "generate",
    "make_reservations", "maximal_window_iterations", "minima_experiment",
    "monte_carlo_pt", "new_forest", "parallel_kruskal", "parallel_link_all",
    "parse_edge_file", "potential", "prefix_no_collision_prob",
    "prefix_no_collision_sweep", "replay_process", "run_random_process", "run_windowed",
    "sequential_run", "shuffle", "simplified_p_trace", "simulate_contention",
    "step_stats", "sweep_contention", "toy_window_collisions",
    "verify_internal_determinism", "write_edge_file", "write_min",
]
