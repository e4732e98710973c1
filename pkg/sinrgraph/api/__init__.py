"""
sinrgraph/api/__init__.py
=========================
Flask application factory for the scheduling web service.

Usage:
    from sinrgraph.api import create_app
    app = create_app("production")
"""

import logging

from flask import Flask
from flask_cors import CORS
from flask_limiter import Limiter
from flask_limiter.util import get_remote_address

from sinrgraph.config import get_config
from sinrgraph.errors import InvariantViolation, SinrGraphError
from sinrgraph.utils.logging import configure_logging

limiter = Limiter(key_func=get_remote_address)


def create_app(config_name: str | None = None) -> Flask:
    """Build a configured Flask app (development / testing / production)."""
    cfg = get_config(config_name)
    app = Flask(__name__)
    app.config.from_object(cfg)
    cfg.init_app(app)

    configure_logging(app.config, app.logger)
    configure_logging(app.config, logging.getLogger("sinrgraph"))

    CORS(app, resources={r"/api/*": {"origins": "*"}})
    limiter.init_app(app)

    from sinrgraph.api.graph import graph_bp
    from sinrgraph.api.health import health_bp
    from sinrgraph.api.schedule import schedule_bp

    app.register_blueprint(health_bp,   url_prefix="/api")
    app.register_blueprint(graph_bp,    url_prefix="/api")
    app.register_blueprint(schedule_bp, url_prefix="/api")

    _register_error_handlers(app)
    app.logger.info("sinrgraph API ready [config=%s]", cfg.__name__)
    return app


# ─────────────────────────────────────────────────────────────────────────────
# ERROR HANDLERS
# ─────────────────────────────────────────────────────────────────────────────
def _register_error_handlers(app: Flask) -> None:
    from sinrgraph.api.responses import api_error

    @app.errorhandler(InvariantViolation)
    def invariant_violation(e):
        app.logger.error("Invariant violation: %s", e)
        return api_error(str(e), 500)

    @app.errorhandler(SinrGraphError)
    def domain_error(e):
        return api_error(str(e), 400, errors=getattr(e, "errors", None))

    @app.errorhandler(404)
    def not_found(e):
        return api_error("Resource not found.", 404)

    @app.errorhandler(405)
    def method_not_allowed(e):
        return api_error("Method not allowed.", 405)

    @app.errorhandler(429)
    def rate_limited(e):
        return api_error(f"Rate limit exceeded: {e.description}", 429)

    @app.errorhandler(500)
    def internal_error(e):
        app.logger.exception("Unhandled server error")
        return api_error("Internal server error.", 500)
