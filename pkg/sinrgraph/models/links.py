"""
sinrgraph/models/links.py
=========================
Geometry and link model – points, links, instances, power assignments and
feasibility reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from sinrgraph.errors import InvalidInstanceError


# ─────────────────────────────────────────────────────────────────────────────
# POINT
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, order=True)
class Point:
    """A node position in the Euclidean plane (abstract distance units)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInstanceError(f"Point coordinates must be finite, got ({self.x}, {self.y}).")

    def distance(self, other: Point) -> float:
        return math.dist((self.x, self.y), (other.x, other.y))

    def scaled(self, s: float) -> Point:
        return Point(self.x * s, self.y * s)

    @property
    def key(self) -> str:
        """Node key used by capability files: "x,y" with repr precision."""
        return f"{self.x!r},{self.y!r}"

    @classmethod
    def from_key(cls, key: str) -> Point:
        try:
            x, y = (float(part) for part in key.split(","))
        except ValueError as e:
            raise InvalidInstanceError(f"Malformed node key '{key}', expected 'x,y'.") from e
        return cls(x, y)


# ─────────────────────────────────────────────────────────────────────────────
# LINK
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Link:
    """
    A sender/receiver pair with SIR threshold ``beta`` and utility ``weight``.

    ``origin_id`` is set on copies created by rate-control expansion; for an
    ordinary link it is left ``None`` and :attr:`origin` falls back to ``id``.
    """

    id:        int
    sender:    Point
    receiver:  Point
    beta:      float = 1.0
    weight:    float = 1.0
    origin_id: int | None = None

    def __post_init__(self):
        if not self.beta >= 1.0:
            raise InvalidInstanceError(f"Link {self.id}: beta must be ≥ 1, got {self.beta}.")
        if not self.weight >= 0.0:
            raise InvalidInstanceError(f"Link {self.id}: weight must be ≥ 0, got {self.weight}.")
        if self.length <= 0.0:
            raise InvalidInstanceError(f"Link {self.id}: sender and receiver coincide.")

    @property
    def length(self) -> float:
        return self.sender.distance(self.receiver)

    @property
    def origin(self) -> int:
        return self.id if self.origin_id is None else self.origin_id

    def effective_length(self, alpha: float) -> float:
        """β^{1/α}·l – the threshold folded into the geometry."""
        return self.beta ** (1.0 / alpha) * self.length

    def scaled(self, s: float) -> Link:
        return replace(self, sender=self.sender.scaled(s), receiver=self.receiver.scaled(s))

    def to_dict(self) -> dict:
        data = {
            "id":     self.id,
            "sx":     self.sender.x,
            "sy":     self.sender.y,
            "rx":     self.receiver.x,
            "ry":     self.receiver.y,
            "beta":   self.beta,
            "weight": self.weight,
        }
        if self.origin_id is not None:
            data["origin_id"] = self.origin_id
        return data

    def __repr__(self) -> str:
        return (f"<Link id={self.id} ({self.sender.x:g},{self.sender.y:g})"
                f"->({self.receiver.x:g},{self.receiver.y:g}) beta={self.beta:g}>")


# ─────────────────────────────────────────────────────────────────────────────
# INSTANCE
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Instance:
    """An ordered link set plus the model parameters it is evaluated under."""

    alpha: float
    links: tuple[Link, ...] = ()
    m:     int = 2

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if self.m != 2:
            raise InvalidInstanceError(f"Only the plane is supported (m=2), got m={self.m}.")
        if not self.alpha > self.m:
            raise InvalidInstanceError(f"Path-loss exponent must exceed m={self.m}, got alpha={self.alpha}.")
        ids = [link.id for link in self.links]
        if len(set(ids)) != len(ids):
            raise InvalidInstanceError("Link ids must be distinct.")

    def __len__(self) -> int:
        return len(self.links)

    def __iter__(self):
        return iter(self.links)

    # ── Lookup ────────────────────────────────────────────────────────────────
    @cached_property
    def _positions(self) -> dict[int, int]:
        return {link.id: pos for pos, link in enumerate(self.links)}

    @property
    def ids(self) -> list[int]:
        return [link.id for link in self.links]

    def has(self, link_id: int) -> bool:
        return link_id in self._positions

    def position(self, link_id: int) -> int:
        try:
            return self._positions[link_id]
        except KeyError:
            raise InvalidInstanceError(f"Unknown link id {link_id}.") from None

    def link(self, link_id: int) -> Link:
        return self.links[self.position(link_id)]

    def select(self, ids: Iterable[int]) -> list[Link]:
        return [self.link(i) for i in ids]

    # ── Derived arrays ────────────────────────────────────────────────────────
    @cached_property
    def senders(self) -> np.ndarray:
        return np.array([[l.sender.x, l.sender.y] for l in self.links], dtype=float).reshape(-1, 2)

    @cached_property
    def receivers(self) -> np.ndarray:
        return np.array([[l.receiver.x, l.receiver.y] for l in self.links], dtype=float).reshape(-1, 2)

    @cached_property
    def betas(self) -> np.ndarray:
        return np.array([l.beta for l in self.links], dtype=float)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([l.weight for l in self.links], dtype=float)

    @cached_property
    def effective_lengths(self) -> np.ndarray:
        return np.array([l.effective_length(self.alpha) for l in self.links], dtype=float)

    # ── Transformations ───────────────────────────────────────────────────────
    def scaled(self, s: float) -> Instance:
        return replace(self, links=tuple(l.scaled(s) for l in self.links))

    def subset(self, ids: Iterable[int]) -> Instance:
        return replace(self, links=tuple(self.select(ids)))

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "m": self.m, "links": [l.to_dict() for l in self.links]}


# ─────────────────────────────────────────────────────────────────────────────
# POWER ASSIGNMENT
# ─────────────────────────────────────────────────────────────────────────────
class PowerKind(str, Enum):
    UNIFORM = "uniform"
    TAU     = "tau"


@dataclass(frozen=True)
class PowerAssignment:
    """Oblivious power rule: uniform, or P_τ(i) = 𝔩_i^{τα} (scale is irrelevant to SIR)."""

    kind: PowerKind = PowerKind.UNIFORM
    tau:  float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PowerKind(self.kind))
        if self.kind is PowerKind.TAU:
            if self.tau is None or not 0.0 < self.tau < 1.0:
                raise InvalidInstanceError(f"P_tau requires 0 < tau < 1, got {self.tau}.")
        elif self.tau is not None:
            raise InvalidInstanceError("Uniform power takes no tau.")

    @classmethod
    def uniform(cls) -> PowerAssignment:
        return cls(PowerKind.UNIFORM)

    @classmethod
    def oblivious(cls, tau: float) -> PowerAssignment:
        return cls(PowerKind.TAU, tau)

    def power(self, link: Link, alpha: float) -> float:
        if self.kind is PowerKind.UNIFORM:
            return 1.0
        return link.effective_length(alpha) ** (self.tau * alpha)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "tau": self.tau}

    def __str__(self) -> str:
        return "uniform" if self.kind is PowerKind.UNIFORM else f"P_tau(tau={self.tau:.6g})"


# ─────────────────────────────────────────────────────────────────────────────
# FEASIBILITY REPORT
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of an SIR check over a link set."""

    feasible:     bool
    per_link_sir: dict[int, float] = field(default_factory=dict)
    worst_link:   int | None = None

    def to_dict(self) -> dict:
        return {
            "feasible":     self.feasible,
            "per_link_sir": {str(k): (v if math.isfinite(v) else "inf")
                             for k, v in self.per_link_sir.items()},
            "worst_link":   self.worst_link,
        }
