"""
sinrgraph/api/schedule.py
=========================
Scheduling endpoints over G_γ^δ.

Routes:
  POST /api/schedule/tdma      – first-fit coloring into time slots
  POST /api/schedule/mwis      – local-ratio maximum-weight independent set
  POST /api/schedule/channels  – greedy c-channel selection
  POST /api/mcma               – MWIS over virtual links (antennas × channels)

Every body carries an instance plus gamma/delta; "diag": true adds the
measured inductive independence of the graph.
"""

from flask import Blueprint, current_app

from sinrgraph.api import limiter
from sinrgraph.api.responses import api_error, api_success, get_json_body, instance_too_large
from sinrgraph.conflict_graph import build_conflict_graph, choose_tau
from sinrgraph.errors import ParameterRangeError
from sinrgraph.mcma import mcma_feasible_check, mcma_mwis, uniform_caps
from sinrgraph.models.graph import ConflictFn
from sinrgraph.models.links import PowerAssignment
from sinrgraph.schemas import caps_from_request, load_graph_request
from sinrgraph.scheduling import (
    first_fit_coloring, greedy_multichannel, local_ratio_mwis, measure_inductive_independence,
)

schedule_bp = Blueprint("schedule", __name__)


def _compute_limit() -> str:
    return current_app.config["COMPUTE_RATE_LIMIT"]


def _load():
    """(request dict, graph, error response) for the current JSON body."""
    data, err = get_json_body(instance=dict)
    if err:
        return None, None, api_error(err, 400)
    req = load_graph_request(data)
    if msg := instance_too_large(req["instance"]):
        return None, None, api_error(msg, 413)
    graph = build_conflict_graph(req["instance"], ConflictFn(req["gamma"], req["delta"]))
    return req, graph, None


def _with_diag(payload: dict, req: dict, graph) -> dict:
    if req["diag"]:
        payload["diagnostics"] = {
            **payload.get("diagnostics", {}),
            "inductive_independence": measure_inductive_independence(graph).to_dict(),
        }
    return payload


# ─────────────────────────────────────────────────────────────────────────────
# SINGLE-CHANNEL SCHEDULING
# ─────────────────────────────────────────────────────────────────────────────
@schedule_bp.post("/schedule/tdma")
@limiter.limit(_compute_limit)
def tdma():
    req, graph, error = _load()
    if error:
        return error
    coloring = first_fit_coloring(graph)
    current_app.logger.info("API tdma: %d links in %d slots", len(graph), coloring.num_classes)
    return api_success(_with_diag(coloring.to_dict(), req, graph), "Schedule computed.")


@schedule_bp.post("/schedule/mwis")
@limiter.limit(_compute_limit)
def mwis():
    req, graph, error = _load()
    if error:
        return error
    sol = local_ratio_mwis(graph)
    return api_success(_with_diag(sol.to_dict(), req, graph), "Independent set computed.")


@schedule_bp.post("/schedule/channels")
@limiter.limit(_compute_limit)
def channels():
    req, graph, error = _load()
    if error:
        return error
    assignment = greedy_multichannel(graph, req["c"])
    return api_success(_with_diag(assignment.to_dict(), req, graph), "Channels assigned.")


# ─────────────────────────────────────────────────────────────────────────────
# MULTI-CHANNEL MULTI-ANTENNA
# ─────────────────────────────────────────────────────────────────────────────
@schedule_bp.post("/mcma")
@limiter.limit(_compute_limit)
def mcma():
    """
    Request JSON:
        { "instance": {...}, "caps": {"x,y": {"antennas": 2, "channels": [0, 1]}},
          "gamma": 4.0, "delta": 0.8, "c": 2 }

    Without "caps" every node gets one antenna and channels 0..c-1.
    """
    req, graph, error = _load()
    if error:
        return error
    inst = req["instance"]
    if req["caps"] is not None:
        caps = caps_from_request(req["caps"])
    else:
        caps = uniform_caps(inst, 1, range(req["c"]))

    result = mcma_mwis(inst, caps, graph)
    payload = result.to_dict()

    tau = req["tau"]
    if tau is None and req["delta"] > 0:
        try:
            tau = choose_tau(req["delta"], inst.alpha, inst.m)
        except ParameterRangeError:
            tau = None
    if tau is not None:
        payload["tau"] = tau
        payload["feasible"] = mcma_feasible_check(result.selected, PowerAssignment.oblivious(tau), inst)
    current_app.logger.info("API mcma: %d of %d virtual links selected",
                            len(result.selected), result.num_virtual)
    return api_success(payload, "MC-MA schedule computed.")
