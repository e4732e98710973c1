"""
sinrgraph/models/solutions.py
=============================
Solution containers returned by the scheduling, rate-control and MC-MA
algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Coloring:
    """Ordered color classes (time slots) plus the id → class index map."""

    classes:     tuple[frozenset[int], ...]
    assignment:  dict[int, int]
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def from_assignment(cls, assignment: dict[int, int], **kwargs) -> Coloring:
        n_classes = max(assignment.values(), default=-1) + 1
        buckets: list[set[int]] = [set() for _ in range(n_classes)]
        for v, c in assignment.items():
            buckets[c].add(v)
        return cls(tuple(frozenset(b) for b in buckets), dict(assignment), **kwargs)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            "num_classes": self.num_classes,
            "classes":     [sorted(c) for c in self.classes],
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class RateLevel:
    """A rate-control level: fixed weight earned when SIR ≥ beta."""

    weight: float
    beta:   float

    def to_dict(self) -> dict:
        return {"weight": self.weight, "beta": self.beta}


@dataclass(frozen=True)
class WeightedSolution:
    """An independent (feasible) link set and its objective."""

    selected:     frozenset[int]
    total_weight: float
    levels:       dict[int, RateLevel] = field(default_factory=dict)
    diagnostics:  dict = field(default_factory=dict)

    @classmethod
    def empty(cls) -> WeightedSolution:
        return cls(frozenset(), 0.0)

    def to_dict(self) -> dict:
        data = {
            "selected":     sorted(self.selected),
            "size":         len(self.selected),
            "total_weight": self.total_weight,
        }
        if self.levels:
            data["levels"] = {str(k): v.to_dict() for k, v in sorted(self.levels.items())}
        if self.diagnostics:
            data["diagnostics"] = self.diagnostics
        return data


@dataclass(frozen=True)
class ChannelAssignment:
    """``c`` disjoint independent sets plus the links left out."""

    channels:   tuple[frozenset[int], ...]
    unassigned: frozenset[int]

    @property
    def num_assigned(self) -> int:
        return sum(len(ch) for ch in self.channels)

    def to_dict(self) -> dict:
        return {
            "channels":     [sorted(ch) for ch in self.channels],
            "unassigned":   sorted(self.unassigned),
            "num_assigned": self.num_assigned,
        }


@dataclass(frozen=True)
class InductiveIndependence:
    """Measured inductive independence number of a graph under its order."""

    k:                   int
    truncated:           bool = False
    guaranteed_constant: bool = False
    witness:             int | None = None

    def to_dict(self) -> dict:
        return {"k_measured": self.k, "truncated": self.truncated,
                "guaranteed_constant": self.guaranteed_constant, "witness": self.witness}
