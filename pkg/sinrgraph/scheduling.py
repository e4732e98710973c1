"""
sinrgraph/scheduling.py
=======================
Inductive-order algorithms on conflict graphs.

Provides:
  • inductive_order                 – non-decreasing effective length, ties by id
  • first_fit_coloring              – TDMA slots
  • partition_feasible              – splitting a feasible set into independent sets
  • local_ratio_mwis                – k-approximate maximum-weight independent set
  • greedy_multichannel             – c-channel selection
  • sample_independent_sets         – seeded random maximal independent sets
  • measure_inductive_independence  – exhaustive later-neighborhood measurement
"""

from __future__ import annotations

import logging
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from sinrgraph.config import Config
from sinrgraph.conflict_graph import (
    build_conflict_graph, f_star, rho_independence_constant,
)
from sinrgraph.errors import ConflictGraphError, ParameterRangeError
from sinrgraph.models.graph import ConflictFn, ConflictGraph
from sinrgraph.models.solutions import (
    ChannelAssignment, Coloring, InductiveIndependence, WeightedSolution,
)
from sinrgraph.physical_model import length_diversity

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# ORDER
# ─────────────────────────────────────────────────────────────────────────────
def inductive_order(g: ConflictGraph) -> list[int]:
    """The graph's inductive order (stable by effective length, then id)."""
    return list(g.order)


# ─────────────────────────────────────────────────────────────────────────────
# FIRST-FIT COLORING
# ─────────────────────────────────────────────────────────────────────────────
def first_fit_coloring(g: ConflictGraph, order: Sequence[int] | None = None) -> Coloring:
    """Give each vertex, in ``order``, the smallest color unused by its colored neighbors."""
    order = list(g.order if order is None else order)
    if sorted(order) != sorted(g.vertex_ids):
        raise ConflictGraphError("Coloring order must be a permutation of the vertices.")

    colors = np.full(len(g), -1, dtype=int)
    for v in order:
        p = g.position(v)
        taken = set(colors[g.adjacency[p] & (colors >= 0)].tolist())
        c = 0
        while c in taken:
            c += 1
        colors[p] = c
    assignment = {v: int(colors[g.position(v)]) for v in order}
    return Coloring.from_assignment(assignment)


def partition_feasible(g: ConflictGraph, s: Iterable[int], two_stage: bool = False,
                       multiple: float = Config.TIGHTNESS_MULTIPLE) -> Coloring:
    """
    Split ``s`` into f-independent classes by first-fit over non-increasing
    effective length.

    Physical feasibility of ``s`` is the caller's contract. With ``two_stage``
    the set is first split into ρ-independent classes (ρ = 3γ + 31), each of
    which is then split in ``g``. Diagnostics carry the class count, Δ(s),
    f*(Δ(s)) and whether the count stays within ``multiple``·(f* + 1).
    """
    members = sorted(set(s), key=lambda v: g.rank[g.position(v)], reverse=True)
    if not members:
        return Coloring((), {}, diagnostics={"num_classes": 0})

    if two_stage:
        groups = _rho_classes(g, members)
    else:
        groups = [members]

    assignment: dict[int, int] = {}
    offset = 0
    for group in groups:
        sub = g.subgraph(group)
        coloring = first_fit_coloring(sub, group)
        for v, c in coloring.assignment.items():
            assignment[v] = offset + c
        offset += coloring.num_classes

    result = Coloring.from_assignment(assignment)
    diagnostics = {"num_classes": result.num_classes, "two_stage": two_stage}
    if two_stage:
        diagnostics["rho_classes"] = len(groups)
    if g.instance is not None and g.fn is not None:
        links = g.instance.select(members)
        diversity = length_diversity(links, g.instance.alpha)
        bound = f_star(g.fn, diversity)
        diagnostics.update({
            "diversity":     diversity,
            "f_star":        bound,
            "within_bound":  result.num_classes <= multiple * (bound + 1),
            "multiple":      multiple,
        })
    return Coloring(result.classes, result.assignment, diagnostics=diagnostics)


def _rho_classes(g: ConflictGraph, members: list[int]) -> list[list[int]]:
    if g.instance is None or g.fn is None:
        raise ConflictGraphError("Two-stage partition needs a graph built from an instance.")
    rho = rho_independence_constant(g.fn)
    rho_graph = build_conflict_graph(g.instance.subset(members), ConflictFn(rho, 0.0))
    coloring = first_fit_coloring(rho_graph, members)
    return [[v for v in members if v in cls] for cls in coloring.classes]


# ─────────────────────────────────────────────────────────────────────────────
# LOCAL-RATIO MWIS
# ─────────────────────────────────────────────────────────────────────────────
def local_ratio_mwis(g: ConflictGraph, weights: Mapping[int, float] | None = None) -> WeightedSolution:
    """
    Local-ratio maximum-weight independent set over the inductive order.

    Forward pass: each vertex with positive residual weight is stacked and its
    residual is subtracted from itself and its later neighbors. Backward
    pass: stacked vertices are added unless they conflict with the solution.
    Weights default to the link weights of ``g.instance``.
    """
    w = _weight_array(g, weights)
    residual = w.copy()
    rank = g.rank
    stack: list[int] = []
    for v in g.order:
        p = g.position(v)
        r = residual[p]
        if r <= 0.0:
            continue
        stack.append(p)
        later = g.adjacency[p] & (rank > rank[p])
        residual[later] -= r
        residual[p] = 0.0

    chosen = np.zeros(len(g), dtype=bool)
    for p in reversed(stack):
        if not (g.adjacency[p] & chosen).any():
            chosen[p] = True

    selected = frozenset(g.vertex_ids[p] for p in np.flatnonzero(chosen))
    return WeightedSolution(selected, float(w[chosen].sum()))


def _weight_array(g: ConflictGraph, weights: Mapping[int, float] | None) -> np.ndarray:
    if weights is None:
        if g.instance is None:
            raise ConflictGraphError("No weights given and the graph carries no instance.")
        weights = {l.id: l.weight for l in g.instance.links}
    w = np.zeros(len(g))
    for v, value in weights.items():
        if value < 0:
            raise ParameterRangeError(f"Vertex {v} has negative weight {value}.")
        w[g.position(v)] = float(value)
    return w


# ─────────────────────────────────────────────────────────────────────────────
# MULTI-CHANNEL SELECTION
# ─────────────────────────────────────────────────────────────────────────────
def greedy_multichannel(g: ConflictGraph, c: int) -> ChannelAssignment:
    """Scan the inductive order; put each link in the first channel it fits, else drop it."""
    if c < 1:
        raise ParameterRangeError(f"Need at least one channel, got c={c}.")
    members = np.zeros((c, len(g)), dtype=bool)
    unassigned: set[int] = set()
    for v in g.order:
        p = g.position(v)
        for ch in range(c):
            if not (g.adjacency[p] & members[ch]).any():
                members[ch, p] = True
                break
        else:
            unassigned.add(v)
    channels = tuple(frozenset(g.vertex_ids[p] for p in np.flatnonzero(row)) for row in members)
    return ChannelAssignment(channels, frozenset(unassigned))


# ─────────────────────────────────────────────────────────────────────────────
# RANDOM INDEPENDENT SETS
# ─────────────────────────────────────────────────────────────────────────────
def sample_independent_sets(g: ConflictGraph, count: int,
                            rng: np.random.Generator) -> list[frozenset[int]]:
    """``count`` maximal independent sets, each grown greedily over a random vertex order."""
    if count < 0:
        raise ParameterRangeError(f"Sample count must be ≥ 0, got {count}.")
    samples: list[frozenset[int]] = []
    for _ in range(count):
        blocked = np.zeros(len(g), dtype=bool)
        chosen: list[int] = []
        for p in rng.permutation(len(g)):
            if blocked[p]:
                continue
            chosen.append(g.vertex_ids[p])
            blocked |= g.adjacency[p]
            blocked[p] = True
        samples.append(frozenset(chosen))
    return samples


# ─────────────────────────────────────────────────────────────────────────────
# INDUCTIVE INDEPENDENCE
# ─────────────────────────────────────────────────────────────────────────────
def independence_number(g: nx.Graph) -> int:
    """Exact α(G) as the maximum clique of the complement (branch and bound)."""
    if g.number_of_nodes() == 0:
        return 0
    if g.number_of_edges() == 0:
        return g.number_of_nodes()
    _, size = nx.max_weight_clique(nx.complement(g), weight=None)
    return int(size)


def measure_inductive_independence(g: ConflictGraph, cap: int = Config.INDUCTIVE_CAP,
                                   seed: int = 0) -> InductiveIndependence:
    """
    max over v of α(later-neighborhood of v).

    Neighborhoods larger than ``cap`` are measured on a seeded sample of
    ``cap`` vertices and the result is flagged as truncated (a lower bound).
    """
    rng = np.random.default_rng(seed)
    nxg = g.to_networkx()
    best, witness, truncated = 0, None, False
    for v in g.order:
        later = g.later_neighbors(v)
        if len(later) > cap:
            truncated = True
            later = sorted(rng.choice(later, size=cap, replace=False).tolist())
        if len(later) <= best:
            continue
        k = independence_number(nxg.subgraph(later))
        if k > best:
            best, witness = k, v

    if truncated:
        logger.warning("Inductive independence measured on sampled neighborhoods (cap=%d).", cap)
    guaranteed = g.fn is not None and g.fn.gamma >= Config.CONSTANT_K_MIN_GAMMA
    return InductiveIndependence(best, truncated, guaranteed, witness)
