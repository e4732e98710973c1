"""
app.py
======
WSGI entry point for the sinrgraph web service.

Usage:
    gunicorn -w 4 -b 0.0.0.0:5000 "app:create_application()"
    SINRGRAPH_ENV=development python app.py

``python -m sinrgraph serve`` starts the same development server from the CLI.
"""

import os

from sinrgraph.api import create_app


def create_application():
    """Gunicorn factory; the config is picked by SINRGRAPH_ENV."""
    return create_app(os.getenv("SINRGRAPH_ENV"))


if __name__ == "__main__":
    application = create_application()
    host = os.getenv("SINRGRAPH_HOST", "127.0.0.1")
    port = int(os.getenv("SINRGRAPH_PORT", "5000"))
    application.logger.info("Serving sinrgraph on %s:%d (debug=%s)", host, port, application.config["DEBUG"])
    application.run(host=host, port=port, debug=application.config["DEBUG"], threaded=True)
