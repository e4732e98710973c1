"""
sinrgraph/api/responses.py
==========================
JSON envelope and request helpers shared by every blueprint.
"""

import logging

from flask import current_app, jsonify, request

from sinrgraph.models.links import Instance

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# API RESPONSE HELPERS
# ─────────────────────────────────────────────────────────────────────────────
def api_success(data: dict | list | None = None,
                message: str = "Success",
                status_code: int = 200,
                **extra) -> tuple:
    """Standardised JSON success response."""
    payload = {"success": True, "message": message}
    if data is not None:
        payload["data"] = data
    payload.update(extra)
    return jsonify(payload), status_code


def api_error(message: str,
              status_code: int = 400,
              errors: dict | list | None = None,
              **extra) -> tuple:
    """Standardised JSON error response."""
    payload = {"success": False, "error": message}
    if errors:
        payload["errors"] = errors
    payload.update(extra)
    return jsonify(payload), status_code


# ─────────────────────────────────────────────────────────────────────────────
# REQUEST HELPERS
# ─────────────────────────────────────────────────────────────────────────────
def get_json_body(**required_fields) -> tuple[dict | None, str | None]:
    """
    Extract a JSON object body and check that ``required_fields`` are present.

    Usage:
        data, err = get_json_body(instance=dict)
        if err: return api_error(err)
    """
    if not request.is_json:
        return None, "Request must have Content-Type: application/json."

    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        return None, "Invalid or empty JSON body."

    missing = [name for name in required_fields if data.get(name) is None]
    if missing:
        return None, f"Missing required fields: {', '.join(missing)}."
    return data, None


def instance_too_large(inst: Instance) -> str | None:
    """Error message when ``inst`` exceeds MAX_API_LINKS, else None."""
    limit = current_app.config.get("MAX_API_LINKS", 2000)
    if len(inst) > limit:
        logger.warning("Rejected instance with %d links (limit %d)", len(inst), limit)
        return f"Instance has {len(inst)} links; the service accepts at most {limit}."
    return None
