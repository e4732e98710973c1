"""Domain types shared by every module of the package."""

from sinrgraph.models.graph import ConflictFn, ConflictGraph, GraphParams
from sinrgraph.models.links import (
    FeasibilityReport, Instance, Link, Point, PowerAssignment, PowerKind,
)
from sinrgraph.models.solutions import (
    ChannelAssignment, Coloring, InductiveIndependence, RateLevel, WeightedSolution,
)

__all__ = [
    "ChannelAssignment", "Coloring", "ConflictFn", "ConflictGraph",
    "FeasibilityReport", "GraphParams", "InductiveIndependence", "Instance",
    "Link", "Point", "PowerAssignment", "PowerKind", "RateLevel",
    "WeightedSolution",
]
