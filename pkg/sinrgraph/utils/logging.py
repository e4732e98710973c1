"""
sinrgraph/utils/logging.py
==========================
Console plus rotating-file logging, sized by the active config class
(LOG_LEVEL, LOG_FOLDER, LOG_MAX_BYTES, LOG_BACKUP_COUNT, LOG_TO_FILE).
"""

import logging
import os
from logging.handlers import RotatingFileHandler

LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"
LOG_FILENAME = "sinrgraph.log"


def configure_logging(cfg, logger: logging.Logger | None = None,
                      level: str | None = None) -> logging.Logger:
    """
    Attach handlers to ``logger`` (the ``sinrgraph`` package logger by default).

    ``cfg`` is a config class or a Flask ``app.config`` mapping. Calling this
    twice does not duplicate handlers.
    """
    get = cfg.get if isinstance(cfg, dict) else lambda key, default=None: getattr(cfg, key, default)
    logger = logger or logging.getLogger("sinrgraph")
    logger.setLevel((level or get("LOG_LEVEL", "INFO")).upper())
    formatter = logging.Formatter(LOG_FORMAT)

    if not any(getattr(h, "_sinrgraph", False) for h in logger.handlers):
        console = logging.StreamHandler()
        console.setFormatter(formatter)
        console._sinrgraph = True
        logger.addHandler(console)

        if get("LOG_TO_FILE", False):
            folder = get("LOG_FOLDER")
            os.makedirs(folder, exist_ok=True)
            file_handler = RotatingFileHandler(
                os.path.join(folder, LOG_FILENAME),
                maxBytes=get("LOG_MAX_BYTES", 5 * 1024 * 1024),
                backupCount=get("LOG_BACKUP_COUNT", 3),
                encoding="utf-8",
            )
            file_handler.setFormatter(formatter)
            file_handler._sinrgraph = True
            logger.addHandler(file_handler)

    return logger
