"""
sinrgraph/models/graph.py
=========================
Conflict function, conflict graph container and graph parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from sinrgraph.errors import ConflictGraphError, ParameterRangeError
from sinrgraph.models.links import Instance


# ─────────────────────────────────────────────────────────────────────────────
# CONFLICT FUNCTION  f(x) = γ·x^δ
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class ConflictFn:
    """
    Power-law conflict function f(x) = γ·x^δ.

    δ = 0 gives plain ρ-independence with ρ = γ.
    """

    gamma: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise ParameterRangeError(f"gamma must be ≥ 1, got {self.gamma}.")
        if not 0.0 <= self.delta < 1.0:
            raise ParameterRangeError(f"delta must lie in [0, 1), got {self.delta}.")

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        return self.gamma * x ** self.delta

    @property
    def fixed_point(self) -> float:
        """x₀ = inf{x ≥ 1 : f(x) < x} + 1, closed form for the power law."""
        return max(1.0, self.gamma ** (1.0 / (1.0 - self.delta))) + 1.0

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "delta": self.delta}


# ─────────────────────────────────────────────────────────────────────────────
# GRAPH PARAMETERS
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class GraphParams:
    """δ₀ threshold, admissible τ-interval (b, e) and the chosen τ."""

    delta0:  float
    tau_lo:  float
    tau_hi:  float
    tau:     float

    def to_dict(self) -> dict:
        return {"delta0": self.delta0, "tau_lo": self.tau_lo,
                "tau_hi": self.tau_hi, "tau": self.tau}


# ─────────────────────────────────────────────────────────────────────────────
# CONFLICT GRAPH
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class ConflictGraph:
    """
    Immutable dense conflict graph.

    Vertices are integer ids (link ids, or virtual-link ids for MC-MA graphs);
    ``adjacency`` is a symmetric boolean matrix indexed by vertex position and
    ``order`` is the inductive order used by every greedy algorithm.
    """

    vertex_ids: tuple[int, ...]
    adjacency:  np.ndarray
    order:      tuple[int, ...]
    fn:         ConflictFn | None = None
    instance:   Instance | None = None
    meta:       dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.vertex_ids)
        adj = np.asarray(self.adjacency, dtype=bool).reshape(n, n)
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "vertex_ids", tuple(self.vertex_ids))
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.vertex_ids)) != n:
            raise ConflictGraphError("Vertex ids must be distinct.")
        if sorted(self.order) != sorted(self.vertex_ids):
            raise ConflictGraphError("Order must be a permutation of the vertex ids.")
        if adj.diagonal().any():
            raise ConflictGraphError("Conflict graphs have no self-loops.")
        if not np.array_equal(adj, adj.T):
            raise ConflictGraphError("Adjacency must be symmetric.")

    # ── Construction helpers ──────────────────────────────────────────────────
    @classmethod
    def from_edges(cls, vertex_ids: Sequence[int], edges: Iterable[tuple[int, int]],
                   order: Sequence[int] | None = None, **kwargs) -> ConflictGraph:
        """Build a graph from an explicit edge list (order defaults to vertex order)."""
        pos = {v: k for k, v in enumerate(vertex_ids)}
        adj = np.zeros((len(vertex_ids), len(vertex_ids)), dtype=bool)
        for a, b in edges:
            if a not in pos or b not in pos:
                raise ConflictGraphError(f"Edge ({a}, {b}) references an unknown vertex.")
            if a != b:
                adj[pos[a], pos[b]] = adj[pos[b], pos[a]] = True
        return cls(tuple(vertex_ids), adj, tuple(order if order is not None else vertex_ids), **kwargs)

    # ── Lookup ────────────────────────────────────────────────────────────────
    @cached_property
    def _positions(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.vertex_ids)}

    @cached_property
    def rank(self) -> np.ndarray:
        """rank[pos] = place of the vertex at ``pos`` in the inductive order."""
        ranks = np.empty(len(self.vertex_ids), dtype=int)
        for r, v in enumerate(self.order):
            ranks[self._positions[v]] = r
        return ranks

    def __len__(self) -> int:
        return len(self.vertex_ids)

    def __contains__(self, v: int) -> bool:
        return v in self._positions

    def position(self, v: int) -> int:
        try:
            return self._positions[v]
        except KeyError:
            raise ConflictGraphError(f"Unknown vertex id {v}.") from None

    def positions(self, vs: Iterable[int]) -> np.ndarray:
        return np.fromiter((self.position(v) for v in vs), dtype=int)

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.adjacency[self.position(a), self.position(b)])

    def neighbors(self, v: int) -> list[int]:
        row = self.adjacency[self.position(v)]
        return [self.vertex_ids[k] for k in np.flatnonzero(row)]

    def later_neighbors(self, v: int) -> list[int]:
        """Neighbors of ``v`` that come after it in the inductive order."""
        p = self.position(v)
        mask = self.adjacency[p] & (self.rank > self.rank[p])
        return sorted((self.vertex_ids[k] for k in np.flatnonzero(mask)),
                      key=lambda u: self.rank[self._positions[u]])

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edge list as id pairs (smaller id first), sorted lexicographically."""
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        pairs = {tuple(sorted((self.vertex_ids[a], self.vertex_ids[b]))) for a, b in zip(rows, cols)}
        return sorted(pairs)

    def subgraph(self, vs: Iterable[int]) -> ConflictGraph:
        keep = sorted(set(vs), key=lambda v: self.rank[self.position(v)])
        pos = self.positions(keep)
        adj = self.adjacency[np.ix_(pos, pos)]
        return ConflictGraph(tuple(keep), adj, tuple(keep), fn=self.fn, instance=self.instance)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertex_ids)
        g.add_edges_from(self.edges())
        return g

    # ── Serialisation ─────────────────────────────────────────────────────────
    def to_dict(self) -> dict:
        data = {
            "vertices":   sorted(self.vertex_ids),
            "order":      list(self.order),
            "parameters": self.fn.to_dict() if self.fn else {},
            "num_edges":  self.num_edges,
            "edges":      [list(e) for e in self.edges()],
        }
        if self.instance is not None:
            data["parameters"]["alpha"] = self.instance.alpha
            data["parameters"]["m"] = self.instance.m
        data["parameters"].update(self.meta)
        return data

    def __repr__(self) -> str:
        label = f" gamma={self.fn.gamma:g} delta={self.fn.delta:g}" if self.fn else ""
        return f"<ConflictGraph n={len(self)} edges={self.num_edges}{label}>"
