"""
sinrgraph/physical_model.py
===========================
SINR physical model (noise omitted): distances, effective lengths, power
assignments, SIR, feasibility and the I_τ interference operator.

Provides:
  • effective_length / directed_distance / link_distance
  • sir / sir_vector / is_feasible         – SIR(S, i) ≥ β_i checks
  • is_pair_feasible_oracle                 – exact 2-link test under any powers
  • i_tau / i_tau_vector                    – P_τ interference operator
  • power_vector / length_diversity         – helpers used by the algorithms

All functions are pure; inputs are immutable.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from sinrgraph.config import Config
from sinrgraph.errors import InvalidInstanceError, ParameterRangeError
from sinrgraph.models.links import (
    FeasibilityReport, Instance, Link, PowerAssignment, PowerKind,
)

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# GEOMETRY
# ─────────────────────────────────────────────────────────────────────────────
def effective_length(link: Link, alpha: float) -> float:
    """𝔩 = β^{1/α}·l."""
    if not alpha > 0:
        raise ParameterRangeError(f"alpha must be positive, got {alpha}.")
    return link.effective_length(alpha)


def directed_distance(i: Link, j: Link) -> float:
    """d_ij = d(s_i, r_j)."""
    return i.sender.distance(j.receiver)


def link_distance(i: Link, j: Link) -> float:
    """d(i, j): minimum distance over the four endpoint pairs."""
    return min(a.distance(b)
               for a in (i.sender, i.receiver)
               for b in (j.sender, j.receiver))


def length_diversity(links: Sequence[Link], alpha: float) -> float:
    """Δ = 𝔩_max / 𝔩_min over ``links`` (1.0 for fewer than two links)."""
    if len(links) < 2:
        return 1.0
    eff = [l.effective_length(alpha) for l in links]
    return max(eff) / min(eff)


def distance_matrix(links: Sequence[Link]) -> np.ndarray:
    """D[j, i] = d(s_j, r_i); the diagonal holds the link lengths."""
    senders = np.array([[l.sender.x, l.sender.y] for l in links], dtype=float).reshape(-1, 2)
    receivers = np.array([[l.receiver.x, l.receiver.y] for l in links], dtype=float).reshape(-1, 2)
    return np.linalg.norm(senders[:, None, :] - receivers[None, :, :], axis=-1)


# ─────────────────────────────────────────────────────────────────────────────
# POWER
# ─────────────────────────────────────────────────────────────────────────────
def power_vector(links: Sequence[Link], p: PowerAssignment, alpha: float) -> np.ndarray:
    """Transmit power per link: 1 for uniform, 𝔩^{τα} for P_τ."""
    if p.kind is PowerKind.UNIFORM:
        return np.ones(len(links))
    eff = np.array([l.effective_length(alpha) for l in links], dtype=float)
    return eff ** (p.tau * alpha)


# ─────────────────────────────────────────────────────────────────────────────
# SIR
# ─────────────────────────────────────────────────────────────────────────────
def sir_vector(links: Sequence[Link], p: PowerAssignment, alpha: float) -> np.ndarray:
    """
    SIR of every link in ``links`` against the rest of the set.

    A link alone gets +inf; a link with a zero-distance interferer gets 0.
    """
    n = len(links)
    if n == 0:
        return np.empty(0)
    dist = distance_matrix(links)
    powers = power_vector(links, p, alpha)
    lengths = np.diagonal(dist).copy()

    off_diag = ~np.eye(n, dtype=bool)
    blocked = ((dist == 0.0) & off_diag).any(axis=0)

    with np.errstate(divide="ignore"):
        gain = powers[:, None] / dist ** alpha
    gain[~off_diag] = 0.0
    gain[:, blocked] = 0.0
    interference = gain.sum(axis=0)
    signal = powers / lengths ** alpha

    with np.errstate(divide="ignore"):
        sir = np.where(interference > 0.0, signal / np.where(interference > 0.0, interference, 1.0), np.inf)
    sir[blocked] = 0.0
    return sir


def sir(s: Sequence[Link], i: Link, p: PowerAssignment, alpha: float) -> float:
    """
    SIR(S, i) = (P(i)/l_i^α) / Σ_{j∈S∖{i}} P(j)/d_ji^α.

    Raises InvalidInstanceError when ``i`` is not a member of ``s``.
    """
    members = list(s)
    try:
        pos = members.index(i)
    except ValueError:
        raise InvalidInstanceError(f"Link {i.id} is not a member of the set.") from None

    signal = p.power(i, alpha) / i.length ** alpha
    interference = 0.0
    for k, j in enumerate(members):
        if k == pos:
            continue
        d = directed_distance(j, i)
        if d == 0.0:
            return 0.0
        interference += p.power(j, alpha) / d ** alpha
    return math.inf if interference == 0.0 else signal / interference


def is_feasible(s: Sequence[Link], p: PowerAssignment, alpha: float,
                tol: float = Config.FEASIBILITY_TOL) -> FeasibilityReport:
    """
    P-feasibility of ``s``: every link reaches SIR ≥ β·(1 − tol).

    The worst link is the one with the smallest SIR/β ratio.
    """
    links = list(s)
    if not links:
        return FeasibilityReport(True, {}, None)

    values = sir_vector(links, p, alpha)
    betas = np.array([l.beta for l in links], dtype=float)
    ok = values >= betas * (1.0 - tol)
    worst = int(np.argmin(values / betas))
    return FeasibilityReport(
        feasible=bool(ok.all()),
        per_link_sir={l.id: float(v) for l, v in zip(links, values)},
        worst_link=links[worst].id,
    )


def is_instance_subset_feasible(inst: Instance, ids: Sequence[int], p: PowerAssignment,
                                tol: float = Config.FEASIBILITY_TOL) -> FeasibilityReport:
    """is_feasible over ``ids`` of ``inst``, using the instance's α."""
    return is_feasible(inst.select(ids), p, inst.alpha, tol)


# ─────────────────────────────────────────────────────────────────────────────
# PAIR ORACLE
# ─────────────────────────────────────────────────────────────────────────────
def is_pair_feasible_oracle(i: Link, j: Link, alpha: float) -> bool:
    """
    Exact feasibility of {i, j} under arbitrary power control.

    Multiplying the two SIR constraints cancels the powers, leaving
    d_ij·d_ji ≥ 𝔩_i·𝔩_j; equality counts as feasible.
    """
    return directed_distance(i, j) * directed_distance(j, i) >= \
        i.effective_length(alpha) * j.effective_length(alpha)


# ─────────────────────────────────────────────────────────────────────────────
# I_τ OPERATOR
# ─────────────────────────────────────────────────────────────────────────────
def i_tau(s: Sequence[Link], i: Link, tau: float, alpha: float) -> float:
    """
    I_τ(S, i) = Σ_{j∈S∖{i}} 𝔩_j^{τα}·𝔩_i^{(1−τ)α} / d_ji^α.

    A set is P_τ-feasible exactly when I_τ(S, i) ≤ 1 for every member. The
    boundary is closed, as in is_pair_feasible_oracle, since SIR = β meets the
    threshold; the γ search asks for the strict I_τ < 1.
    """
    if not 0.0 < tau < 1.0:
        raise ParameterRangeError(f"tau must lie in (0, 1), got {tau}.")
    own = i.effective_length(alpha) ** ((1.0 - tau) * alpha)
    total = 0.0
    for j in s:
        if j == i:
            continue
        d = directed_distance(j, i)
        if d == 0.0:
            return math.inf
        total += j.effective_length(alpha) ** (tau * alpha) * own / d ** alpha
    return total


def i_tau_vector(links: Sequence[Link], tau: float, alpha: float) -> np.ndarray:
    """I_τ(S, i) for every member of ``links``; +inf where an interferer sits on the receiver."""
    if not 0.0 < tau < 1.0:
        raise ParameterRangeError(f"tau must lie in (0, 1), got {tau}.")
    n = len(links)
    if n == 0:
        return np.empty(0)
    dist = distance_matrix(links)
    eff = np.array([l.effective_length(alpha) for l in links], dtype=float)
    with np.errstate(divide="ignore"):
        terms = np.outer(eff ** (tau * alpha), eff ** ((1.0 - tau) * alpha)) / dist ** alpha
    np.fill_diagonal(terms, 0.0)
    return terms.sum(axis=0)
