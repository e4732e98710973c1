"""
sinrgraph/api/health.py
=======================
Health-check and service info endpoints.

Routes:
  GET /api/health   – liveness probe
  GET /api/info     – version, model defaults and endpoint map
"""

import sys
from datetime import datetime, timezone

import flask
from flask import Blueprint, current_app, jsonify

import sinrgraph

health_bp = Blueprint("health", __name__)

_START_TIME = datetime.now(timezone.utc)


@health_bp.get("/health")
def liveness():
    """Liveness probe – always 200 while the process is alive."""
    uptime_s = (datetime.now(timezone.utc) - _START_TIME).total_seconds()
    return jsonify({
        "status":         "ok",
        "service":        "sinrgraph-api",
        "time":           datetime.now(timezone.utc).isoformat(),
        "uptime_seconds": round(uptime_s, 1),
    }), 200


@health_bp.get("/info")
def service_info():
    cfg = current_app.config
    return jsonify({
        "service":  "SINR conflict-graph scheduling",
        "version":  sinrgraph.__version__,
        "python":   sys.version.split()[0],
        "flask":    flask.__version__,
        "defaults": {
            "alpha":           cfg["DEFAULT_ALPHA"],
            "m":               cfg["DEFAULT_M"],
            "feasibility_tol": cfg["FEASIBILITY_TOL"],
            "max_links":       cfg["MAX_API_LINKS"],
        },
        "endpoints": {
            "graph":       "/api/graph",
            "feasibility": "/api/feasibility",
            "params":      "/api/params",
            "tdma":        "/api/schedule/tdma",
            "mwis":        "/api/schedule/mwis",
            "channels":    "/api/schedule/channels",
            "mcma":        "/api/mcma",
        },
    }), 200
