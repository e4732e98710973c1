"""
sinrgraph/conflict_graph.py
===========================
The G_γ^δ conflict-graph family: the f-adjacency predicate, graph
construction, the δ₀ / τ-interval parameter formulas and the iterated
bound f*.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable

import numpy as np

from sinrgraph.config import Config
from sinrgraph.errors import ConflictGraphError, ParameterRangeError
from sinrgraph.models.graph import ConflictFn, ConflictGraph, GraphParams
from sinrgraph.models.links import Instance, Link
from sinrgraph.physical_model import directed_distance

logger = logging.getLogger(__name__)

# absorbs rounding when an iterate lands exactly on x₀ (e.g. powers of two)
_LOG_SLACK = 1e-12


# ─────────────────────────────────────────────────────────────────────────────
# ADJACENCY
# ─────────────────────────────────────────────────────────────────────────────
def f_adjacent(i: Link, j: Link, fn: ConflictFn, alpha: float) -> bool:
    """d_ij·d_ji ≤ 𝔩_i·𝔩_j·f(𝔩_max/𝔩_min) – the closed side is adjacency."""
    li = i.effective_length(alpha)
    lj = j.effective_length(alpha)
    ratio = max(li, lj) / min(li, lj)
    return directed_distance(i, j) * directed_distance(j, i) <= li * lj * fn(ratio)


def adjacency_matrix(inst: Instance, fn: ConflictFn) -> np.ndarray:
    """Vectorized f-adjacency over every pair of ``inst`` (diagonal cleared)."""
    n = len(inst)
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    dist = np.linalg.norm(inst.senders[:, None, :] - inst.receivers[None, :, :], axis=-1)
    product = dist * dist.T
    eff = inst.effective_lengths
    ratio = np.maximum.outer(eff, eff) / np.minimum.outer(eff, eff)
    adj = product <= np.outer(eff, eff) * fn(ratio)
    np.fill_diagonal(adj, False)
    return adj


def inductive_order_ids(inst: Instance) -> tuple[int, ...]:
    """Non-decreasing effective length, ties broken by id."""
    eff = inst.effective_lengths
    return tuple(inst.links[k].id for k in sorted(range(len(inst)),
                                                  key=lambda k: (eff[k], inst.links[k].id)))


def build_conflict_graph(inst: Instance, fn: ConflictFn) -> ConflictGraph:
    """G_f(L): links are vertices, f-adjacent pairs are edges."""
    graph = ConflictGraph(
        vertex_ids=tuple(inst.ids),
        adjacency=adjacency_matrix(inst, fn),
        order=inductive_order_ids(inst),
        fn=fn,
        instance=inst,
    )
    logger.debug("Built %r", graph)
    return graph


def is_independent_set(g: ConflictGraph, s: Iterable[int]) -> bool:
    """True when no two members of ``s`` are adjacent in ``g``."""
    members = list(set(s))
    if len(members) < 2:
        for v in members:
            g.position(v)
        return True
    pos = g.positions(members)
    return not g.adjacency[np.ix_(pos, pos)].any()


# ─────────────────────────────────────────────────────────────────────────────
# PARAMETER FORMULAS
# ─────────────────────────────────────────────────────────────────────────────
def delta0(alpha: float, m: int = Config.DEFAULT_M) -> float:
    """δ₀ = (α − m + 1) / (2(α − m) + 1)."""
    if not alpha > m:
        raise ParameterRangeError(f"delta0 requires alpha > m, got alpha={alpha}, m={m}.")
    return (alpha - m + 1.0) / (2.0 * (alpha - m) + 1.0)


def tau_interval(delta: float, alpha: float, m: int = Config.DEFAULT_M) -> tuple[float, float]:
    """
    Admissible τ-interval (b, e) for independent sets of G_γ^δ.

    b = 1 − (1+δ)/2 · (α−m)/α and e = 1 − (1−δ)/2 · (α−m+1)/α. Signals
    ParameterRangeError when δ ≤ δ₀ (outside the refinement guarantee) or the
    interval is empty.
    """
    if not 0.0 < delta < 1.0:
        raise ParameterRangeError(f"delta must lie in (0, 1), got {delta}.")
    threshold = delta0(alpha, m)
    b = 1.0 - (1.0 + delta) / 2.0 * (alpha - m) / alpha
    e = 1.0 - (1.0 - delta) / 2.0 * (alpha - m + 1.0) / alpha
    if delta <= threshold or b >= e:
        raise ParameterRangeError(
            f"delta={delta:.6g} too small: need delta > delta0={threshold:.6g} "
            f"(tau interval ({b:.6g}, {e:.6g}))."
        )
    return b, e


def choose_tau(delta: float, alpha: float, m: int = Config.DEFAULT_M) -> float:
    """Midpoint of the admissible τ-interval."""
    b, e = tau_interval(delta, alpha, m)
    return (b + e) / 2.0


def delta_for_epsilon(epsilon: float, alpha: float, m: int = Config.DEFAULT_M) -> float:
    """δ = δ₀ + ε(1 − δ₀), the experiment parametrisation."""
    if not 0.0 < epsilon < 1.0:
        raise ParameterRangeError(f"epsilon must lie in (0, 1), got {epsilon}.")
    d0 = delta0(alpha, m)
    return d0 + epsilon * (1.0 - d0)


def graph_params(delta: float, alpha: float, m: int = Config.DEFAULT_M) -> GraphParams:
    b, e = tau_interval(delta, alpha, m)
    return GraphParams(delta0=delta0(alpha, m), tau_lo=b, tau_hi=e, tau=(b + e) / 2.0)


def rho_independence_constant(fn: ConflictFn) -> float:
    """ρ = 3·c_f + 31 with c_f = γ, since γx^δ ≤ γx on x ≥ 1."""
    return 3.0 * fn.gamma + 31.0


# ─────────────────────────────────────────────────────────────────────────────
# ITERATED FUNCTION BOUND
# ─────────────────────────────────────────────────────────────────────────────
def f_star(fn: ConflictFn, x: float, max_iter: int = Config.F_STAR_MAX_ITER) -> int:
    """
    f*(x): least c with f^{(c)}(x) ≤ x₀, and 1 for x ≤ x₀.

    Iterates in log space so huge diversities do not overflow.
    """
    if fn.delta >= 1.0:
        raise ParameterRangeError("f* needs a strongly sub-linear f (delta < 1).")
    if not x >= 1.0:
        raise ParameterRangeError(f"f* is defined for x ≥ 1, got {x}.")
    x0 = fn.fixed_point
    if x <= x0:
        return 1

    log_gamma = math.log(fn.gamma)
    log_x0 = math.log(x0)
    log_value = math.log(x)
    for c in range(1, max_iter + 1):
        log_value = log_gamma + fn.delta * log_value
        if log_value <= log_x0 + _LOG_SLACK:
            return c
    raise ConflictGraphError(f"f* did not converge within {max_iter} iterations for x={x:g}.")
