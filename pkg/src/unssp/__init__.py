"""Universal near shortest simple paths: enumeration, complete sets and model export."""

from .complete_set import (
    IntervalPartition,
    MinimalCompleteSet,
    NextUspQuery,
    interval_partition,
    minimal_complete_set,
    next_usp,
    next_usp_by_subsets,
    representatives,
)
from .enumeration import PathSink, RunStats, enumerate_alg1, enumerate_alg2, enumerate_brute, near_shortest_paths
from .errors import GraphParseError, LambdaError, MaskError, SizeGateError, UnsspError, ValidationError
from .graph import ArcMask, Graph, Path, inverse, parse_graph, serialize
from .instances import RandomSpec, gen_binary_doubling, gen_random, gen_triplet_chain
from .lp_export import build_nspip, build_unspip, emit_nspip, emit_unspip
from .objective import Bound, Lambda, parse_lambda, parse_rational, sorted_cost_vector, universal_value, within_bound
from .solvers import (
    SolveOutcome,
    all_distances_to_sink,
    solve,
    solve_bottleneck,
    solve_brute,
    solve_ksum,
    solve_kmax,
    solve_sum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
