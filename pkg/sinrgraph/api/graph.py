"""
sinrgraph/api/graph.py
======================
Conflict-graph, feasibility and parameter endpoints.

Routes:
  POST /api/graph        – build G_γ^δ for an instance
  POST /api/feasibility  – SIR check of a link subset under a power assignment
  POST /api/params       – δ₀, admissible τ-interval and chosen τ
"""

from flask import Blueprint, current_app

from sinrgraph.api import limiter
from sinrgraph.api.responses import api_error, api_success, get_json_body, instance_too_large
from sinrgraph.conflict_graph import build_conflict_graph, delta_for_epsilon, graph_params
from sinrgraph.models.graph import ConflictFn
from sinrgraph.models.links import PowerAssignment
from sinrgraph.physical_model import is_instance_subset_feasible
from sinrgraph.schemas import load_graph_request, load_params_request

graph_bp = Blueprint("graph", __name__)


def _compute_limit() -> str:
    return current_app.config["COMPUTE_RATE_LIMIT"]


@graph_bp.post("/graph")
@limiter.limit(_compute_limit)
def conflict_graph():
    """
    Request JSON:
        { "instance": {...}, "gamma": 2.0, "delta": 0.8 }
    """
    data, err = get_json_body(instance=dict)
    if err:
        return api_error(err, 400)
    req = load_graph_request(data)
    inst = req["instance"]
    if msg := instance_too_large(inst):
        return api_error(msg, 413)

    graph = build_conflict_graph(inst, ConflictFn(req["gamma"], req["delta"]))
    current_app.logger.info("API graph: %r", graph)
    return api_success(graph.to_dict(), "Conflict graph built.")


@graph_bp.post("/feasibility")
@limiter.limit(_compute_limit)
def feasibility():
    data, err = get_json_body(instance=dict)
    if err:
        return api_error(err, 400)
    req = load_graph_request(data)
    inst = req["instance"]
    if msg := instance_too_large(inst):
        return api_error(msg, 413)

    power = req["power"] or PowerAssignment.uniform()
    ids = req["ids"] if req["ids"] is not None else inst.ids
    report = is_instance_subset_feasible(inst, ids, power)
    return api_success({**report.to_dict(), "power": power.to_dict()},
                       "Feasible." if report.feasible else "Infeasible.")


@graph_bp.post("/params")
def parameters():
    """
    Request JSON:
        { "alpha": 2.8, "m": 2, "delta": 0.8 }  or  { ..., "epsilon": 0.5 }
    """
    data, err = get_json_body()
    if err:
        return api_error(err, 400)
    req = load_params_request(data)
    if (req["delta"] is None) == (req["epsilon"] is None):
        return api_error("Give exactly one of 'delta' or 'epsilon'.", 400)

    delta = req["delta"]
    if delta is None:
        delta = delta_for_epsilon(req["epsilon"], req["alpha"], req["m"])
    params = graph_params(delta, req["alpha"], req["m"])
    return api_success({**params.to_dict(), "delta": delta, "alpha": req["alpha"], "m": req["m"]})
