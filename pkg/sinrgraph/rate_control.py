"""
sinrgraph/rate_control.py
=========================
Rate control by link replication.

A link whose utility grows with its SIR is replaced by co-located copies,
each with a fixed weight and the SIR threshold needed to earn it. Any
independent set of the expanded conflict graph (γ ≥ 1) holds at most one copy
per original, so a fixed-weight MWISL solution maps back to a rate choice.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Mapping

from sinrgraph.config import Config
from sinrgraph.errors import RateControlError
from sinrgraph.models.links import Instance, Link
from sinrgraph.models.solutions import RateLevel, WeightedSolution

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# UTILITY FUNCTIONS
# ─────────────────────────────────────────────────────────────────────────────
class UtilityKind(str, Enum):
    LOG2_SHANNON = "log2_shannon"
    LINEAR       = "linear"
    TABLE        = "table"


@dataclass(frozen=True)
class MonotoneUtility:
    """
    Non-decreasing utility of SIR, zero below 1 and clipped at ``u_max``.

    log2_shannon: scale·log₂(1 + x)
    linear:       scale·x
    table:        largest u among breakpoints (x, u) with x ≤ SIR
    """

    kind:   UtilityKind
    u_min:  float
    u_max:  float
    scale:  float = 1.0
    table:  tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", UtilityKind(self.kind))
        object.__setattr__(self, "table", tuple((float(x), float(u)) for x, u in self.table))
        if not 0.0 < self.u_min <= self.u_max or not math.isfinite(self.u_max):
            raise RateControlError(f"Need 0 < u_min ≤ u_max < inf, got [{self.u_min}, {self.u_max}].")
        if not self.scale > 0.0:
            raise RateControlError(f"Utility scale must be positive, got {self.scale}.")
        if self.kind is UtilityKind.TABLE:
            if not self.table:
                raise RateControlError("A table utility needs at least one breakpoint.")
            xs = [x for x, _ in self.table]
            us = [u for _, u in self.table]
            if xs != sorted(xs) or us != sorted(us):
                raise RateControlError("Table breakpoints must be non-decreasing in both SIR and utility.")

    def __call__(self, x: float) -> float:
        if x < 1.0:
            return 0.0
        if self.kind is UtilityKind.LOG2_SHANNON:
            value = self.scale * math.log2(1.0 + x)
        elif self.kind is UtilityKind.LINEAR:
            value = self.scale * x
        else:
            value = 0.0
            for threshold, u in self.table:
                if threshold > x:
                    break
                value = u
        return min(self.u_max, value)

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value, "u_min": self.u_min, "u_max": self.u_max}
        if self.kind is UtilityKind.TABLE:
            data["table"] = [list(p) for p in self.table]
        else:
            data["scale"] = self.scale
        return data


@dataclass(frozen=True)
class UtilityLevel:
    """A discrete rate: utility ``u`` once SIR reaches ``beta``."""

    beta: float
    u:    float

    def __post_init__(self):
        if not self.beta > 0.0:
            raise RateControlError(f"Level threshold must be positive, got {self.beta}.")
        if not self.u > 0.0:
            raise RateControlError(f"Level utility must be positive, got {self.u}.")


@dataclass(frozen=True)
class UtilitySpec:
    """Per-link utility: either discrete ``levels`` or a ``monotone`` function."""

    link_id:  int
    levels:   tuple[UtilityLevel, ...] | None = None
    monotone: MonotoneUtility | None = None

    def __post_init__(self):
        if (self.levels is None) == (self.monotone is None):
            raise RateControlError(f"Link {self.link_id}: give exactly one of levels or monotone.")
        if self.levels is not None:
            levels = tuple(self.levels)
            object.__setattr__(self, "levels", levels)
            if not levels:
                raise RateControlError(f"Link {self.link_id}: empty level list.")
            us = [lv.u for lv in levels]
            if any(b <= a for a, b in zip(us, us[1:])):
                raise RateControlError(f"Link {self.link_id}: level utilities must be strictly increasing.")
            betas = [lv.beta for lv in levels]
            if any(b < a for a, b in zip(betas, betas[1:])):
                raise RateControlError(f"Link {self.link_id}: higher utilities need higher thresholds.")

    @property
    def u_min(self) -> float:
        return self.levels[0].u if self.levels is not None else self.monotone.u_min

    @property
    def u_max(self) -> float:
        return self.levels[-1].u if self.levels is not None else self.monotone.u_max

    @property
    def utility(self) -> MonotoneUtility:
        """The spec as a monotone function (discrete levels become a step table)."""
        if self.monotone is not None:
            return self.monotone
        table = tuple((max(lv.beta, 1.0), lv.u) for lv in self.levels)
        return MonotoneUtility(UtilityKind.TABLE, self.u_min, self.u_max, table=table)

    def to_dict(self) -> dict:
        if self.levels is not None:
            return {"link_id": self.link_id,
                    "levels": [{"beta": lv.beta, "u": lv.u} for lv in self.levels]}
        return {"link_id": self.link_id, "monotone": self.monotone.to_dict()}


# ─────────────────────────────────────────────────────────────────────────────
# EXPANDED INSTANCE
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class ExpandedInstance:
    """Copies of the base links (``origin_id`` set) with their fixed levels."""

    base:     Instance
    instance: Instance
    levels:   dict[int, RateLevel] = field(default_factory=dict)

    def copies_of(self, origin: int) -> list[int]:
        return [l.id for l in self.instance.links if l.origin == origin]

    def to_dict(self) -> dict:
        return {
            "num_originals": len(self.base),
            "num_copies":    len(self.instance),
            "copies":        [{**l.to_dict(), "level": self.levels[l.id].to_dict()}
                              for l in self.instance.links],
        }


def _index_specs(inst: Instance, specs: Iterable[UtilitySpec]) -> dict[int, UtilitySpec]:
    by_id: dict[int, UtilitySpec] = {}
    for spec in specs:
        if not inst.has(spec.link_id):
            raise RateControlError(f"Utility spec for unknown link {spec.link_id}.")
        if spec.link_id in by_id:
            raise RateControlError(f"Duplicate utility spec for link {spec.link_id}.")
        by_id[spec.link_id] = spec
    missing = [i for i in inst.ids if i not in by_id]
    if missing:
        raise RateControlError(f"No utility spec for links {missing}.")
    return by_id


def _expand(inst: Instance, per_link: Mapping[int, list[RateLevel]]) -> ExpandedInstance:
    copies: list[Link] = []
    levels: dict[int, RateLevel] = {}
    for link in inst.links:
        for level in per_link[link.id]:
            cid = len(copies)
            copies.append(Link(cid, link.sender, link.receiver, beta=level.beta,
                               weight=level.weight, origin_id=link.id))
            levels[cid] = level
    expanded = Instance(inst.alpha, tuple(copies), inst.m)
    logger.info("Expanded %d links into %d copies", len(inst), len(copies))
    return ExpandedInstance(inst, expanded, levels)


# ─────────────────────────────────────────────────────────────────────────────
# DISCRETE EXPANSION
# ─────────────────────────────────────────────────────────────────────────────
def expand_discrete(inst: Instance, specs: Iterable[UtilitySpec]) -> ExpandedInstance:
    """
    One copy per (link, level). Thresholds below 1 are raised to 1, since
    the utility is zero below SIR 1 and the level is earned from there.
    """
    by_id = _index_specs(inst, specs)
    per_link: dict[int, list[RateLevel]] = {}
    for link_id, spec in by_id.items():
        if spec.levels is None:
            raise RateControlError(f"Link {link_id}: discrete expansion needs a level list.")
        per_link[link_id] = [RateLevel(weight=lv.u, beta=max(lv.beta, 1.0)) for lv in spec.levels]
    return _expand(inst, per_link)


# ─────────────────────────────────────────────────────────────────────────────
# GEOMETRIC EXPANSION
# ─────────────────────────────────────────────────────────────────────────────
def geometric_levels(u_min: float, u_max: float) -> list[float]:
    """
    Powers of two p with u_min/2 < p ≤ u_max, ascending.

    Every achievable utility u ≥ u_min lies in a bucket [p, 2p) whose lower
    end is a level, so the lowest level may fall below u_min: with u_min = 3
    the bucket [2, 4) holds u = 3 and its level is 2.
    """
    if not 0.0 < u_min <= u_max:
        raise RateControlError(f"Need 0 < u_min ≤ u_max, got [{u_min}, {u_max}].")
    lo = math.floor(math.log2(u_min / 2.0)) + 1
    while 2.0 ** lo <= u_min / 2.0:
        lo += 1
    hi = math.floor(math.log2(u_max))
    while 2.0 ** hi > u_max:
        hi -= 1
    while 2.0 ** (hi + 1) <= u_max:
        hi += 1
    return [2.0 ** e for e in range(lo, hi + 1)]


def truncation_levels(n: int) -> int:
    """Levels kept per link: ⌈2·log₂ n⌉ + 1."""
    if n < 1:
        raise RateControlError(f"Instance size must be ≥ 1, got {n}.")
    return math.ceil(2.0 * math.log2(n)) + 1


def invert_utility(u: Callable[[float], float], target: float,
                   tol: float = Config.BISECTION_TOL,
                   bracket_hi: float = Config.BISECTION_BRACKET_HI,
                   max_iter: int = 200) -> float | None:
    """
    min{x ≥ 1 : u(x) ≥ target} by bisection, or None when the bracket never
    reaches ``target``. The returned x always satisfies u(x) ≥ target.
    """
    lo, hi = 1.0, bracket_hi
    u_lo, u_hi = u(lo), u(hi)
    if u_hi < u_lo:
        raise RateControlError("Utility decreases over the search bracket.")
    if u_lo >= target:
        return 1.0
    if u_hi < target:
        return None

    for step in range(max_iter):
        if hi - lo <= tol:
            break
        mid = lo + (hi - lo) / 2.0
        if mid in (lo, hi):
            break
        u_mid = u(mid)
        if not u_lo <= u_mid <= u_hi:
            raise RateControlError(f"Utility is not monotone near x={mid:.6g}.")
        if u_mid >= target:
            hi, u_hi = mid, u_mid
        else:
            lo, u_lo = mid, u_mid
    logger.debug("Inverted utility at %g: x=%.12g after %d steps", target, hi, step + 1)
    return hi


def expand_geometric(inst: Instance, specs: Iterable[UtilitySpec], n: int | None = None,
                     tol: float = Config.BISECTION_TOL) -> ExpandedInstance:
    """
    Copies with weights 2^{k−1} spanning [u_min, u_max] and β_k the least SIR
    reaching that weight. Only the top ⌈2·log₂ n⌉ + 1 levels of each link are
    kept (``n`` defaults to the instance size).
    """
    by_id = _index_specs(inst, specs)
    keep = truncation_levels(n if n is not None else max(len(inst), 1))
    per_link: dict[int, list[RateLevel]] = {}
    for link_id, spec in by_id.items():
        utility = spec.utility
        levels: list[RateLevel] = []
        for p in geometric_levels(spec.u_min, spec.u_max):
            beta = invert_utility(utility, p, tol=tol)
            if beta is None:
                logger.debug("Link %d: level %g unreachable, dropped", link_id, p)
                continue
            levels.append(RateLevel(weight=p, beta=beta))
        per_link[link_id] = levels[-keep:]
    return _expand(inst, per_link)


# ─────────────────────────────────────────────────────────────────────────────
# DIVERSITY AND COLLAPSE
# ─────────────────────────────────────────────────────────────────────────────
def delta_prime(inst: Instance, specs: Iterable[UtilitySpec]) -> float:
    """Δ′ = max over i, j of u^i_max·l_i / (u^j_min·l_j)."""
    by_id = _index_specs(inst, specs)
    if not by_id:
        return 1.0
    top = max(by_id[l.id].u_max * l.length for l in inst.links)
    bottom = min(by_id[l.id].u_min * l.length for l in inst.links)
    return top / bottom


def collapse_solution(exp: ExpandedInstance, sol: WeightedSolution) -> WeightedSolution:
    """Map selected copies back to their originals, one chosen level each."""
    chosen: dict[int, RateLevel] = {}
    for cid in sorted(sol.selected):
        origin = exp.instance.link(cid).origin
        if origin in chosen:
            raise RateControlError(f"Two selected copies share original link {origin}.")
        chosen[origin] = exp.levels[cid]
    total = sum(level.weight for level in chosen.values())
    return WeightedSolution(frozenset(chosen), float(total), levels=chosen,
                            diagnostics={"copies": sorted(sol.selected)})


def realized_links(exp: ExpandedInstance, collapsed: WeightedSolution) -> list[Link]:
    """Selected originals carrying the threshold of their chosen level."""
    return [replace(exp.base.link(origin), beta=collapsed.levels[origin].beta)
            for origin in sorted(collapsed.selected)]
