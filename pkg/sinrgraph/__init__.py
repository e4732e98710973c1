"""
sinrgraph
=========
Conflict graphs that refine the SINR physical interference model, and the
scheduling algorithms that run on them.

Quick start:
    from sinrgraph import Instance, ConflictFn, build_conflict_graph, local_ratio_mwis
    g = build_conflict_graph(inst, ConflictFn(gamma=4.0, delta=0.8))
    sol = local_ratio_mwis(g)
"""

__version__ = "1.0.0"

from sinrgraph.conflict_graph import (
    adjacency_matrix, build_conflict_graph, choose_tau, delta0, delta_for_epsilon,
    f_adjacent, f_star, graph_params, inductive_order_ids, is_independent_set,
    rho_independence_constant, tau_interval,
)
from sinrgraph.errors import (
    ConflictGraphError, InvalidInstanceError, InvariantViolation, McmaError,
    ParameterRangeError, RateControlError, SchemaError, SinrGraphError,
)
from sinrgraph.models import (
    ChannelAssignment, Coloring, ConflictFn, ConflictGraph, FeasibilityReport, GraphParams,
    InductiveIndependence, Instance, Link, Point, PowerAssignment, PowerKind, RateLevel,
    WeightedSolution,
)
from sinrgraph.physical_model import (
    directed_distance, effective_length, i_tau, is_feasible, is_pair_feasible_oracle,
    length_diversity, link_distance, power_vector, sir, sir_vector,
)
from sinrgraph.scheduling import (
    first_fit_coloring, greedy_multichannel, inductive_order, local_ratio_mwis,
    measure_inductive_independence, partition_feasible,
)
