"""
sinrgraph/config.py
===================
SINR Conflict Graphs – Configuration Management
Supports Development, Testing, and Production environments.
"""

import os

from dotenv import load_dotenv

# Load environment variables from .env file if present
load_dotenv()

BASE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))


# ─────────────────────────────────────────────────────────────────────────────
# BASE CONFIG
# ─────────────────────────────────────────────────────────────────────────────
class Config:
    """Base configuration shared across all environments."""

    # ── Core Flask ────────────────────────────────────────────────────────────
    SECRET_KEY = os.getenv("SECRET_KEY", "sinrgraph-dev-secret-change-in-prod")
    DEBUG = False
    TESTING = False
    JSON_SORT_KEYS = False

    # ── Physical model ────────────────────────────────────────────────────────
    DEFAULT_ALPHA   = 2.8
    DEFAULT_M       = 2
    FEASIBILITY_TOL = 1e-9          # relative slack on SIR ≥ β

    # ── Conflict graphs ───────────────────────────────────────────────────────
    F_STAR_MAX_ITER      = 64
    INDUCTIVE_CAP        = 25       # exhaustive neighborhood search limit
    CONSTANT_K_MIN_GAMMA = 40.0     # f(x) ≥ 40 needed for constant inductive independence
    TIGHTNESS_MULTIPLE   = 10       # partition diagnostic: classes ≤ k·(f*(Δ)+1)

    # ── γ binary search ───────────────────────────────────────────────────────
    GAMMA_SEARCH_LO      = 1.0
    GAMMA_SEARCH_HI      = 2.0 ** 20
    GAMMA_SEARCH_STEPS   = 20
    GAMMA_SEARCH_SAMPLES = 32       # random maximal independent sets checked per candidate γ

    # ── Rate control ──────────────────────────────────────────────────────────
    BISECTION_TOL        = 1e-9
    BISECTION_BRACKET_HI = 2.0 ** 60

    # ── Experiment protocol ───────────────────────────────────────────────────
    SQUARE_SIDE        = 1000.0
    DEFAULT_N          = 400
    DEFAULT_BETA       = 1.0
    DEFAULT_TRIALS     = 20
    DEFAULT_SEED       = 2024
    DEFAULT_LMAX_GRID  = (10.0, 50.0, 100.0, 250.0)
    DEFAULT_EPSILONS   = (0.1, 0.9)
    WEIGHT_RANGE       = (1.0, 100.0)
    CSV_COLUMNS        = ("l_max", "algorithm", "epsilon", "mean_weight",
                          "std_weight", "trials", "seed")
    BENCH_WORKERS      = int(os.getenv("SINRGRAPH_BENCH_WORKERS", "1"))

    # ── Web service ───────────────────────────────────────────────────────────
    MAX_API_LINKS            = 2000
    RATELIMIT_DEFAULT        = "200 per day;50 per hour"
    RATELIMIT_STORAGE_URI    = "memory://"
    RATELIMIT_HEADERS_ENABLED = True
    RATELIMIT_STRATEGY       = "fixed-window"
    COMPUTE_RATE_LIMIT       = "30 per minute"

    # ── Logging ───────────────────────────────────────────────────────────────
    LOG_FOLDER       = os.path.join(BASE_DIR, "logs")
    LOG_LEVEL        = os.getenv("SINRGRAPH_LOG_LEVEL", "INFO")
    LOG_MAX_BYTES    = 5 * 1024 * 1024   # 5 MB per file
    LOG_BACKUP_COUNT = 3
    LOG_TO_FILE      = True

    @staticmethod
    def init_app(app):
        """Run post-init setup: ensure the log directory exists."""
        os.makedirs(app.config["LOG_FOLDER"], exist_ok=True)


# ─────────────────────────────────────────────────────────────────────────────
# DEVELOPMENT
# ─────────────────────────────────────────────────────────────────────────────
class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = "DEBUG"
    RATELIMIT_DEFAULT = "10000 per day"   # Relaxed for local dev


# ─────────────────────────────────────────────────────────────────────────────
# TESTING
# ─────────────────────────────────────────────────────────────────────────────
class TestingConfig(Config):
    TESTING   = True
    DEBUG     = True
    RATELIMIT_ENABLED = False
    LOG_TO_FILE = False
    LOG_FOLDER = "/tmp/sinrgraph_test_logs"
    DEFAULT_TRIALS = 2
    DEFAULT_N = 40


# ─────────────────────────────────────────────────────────────────────────────
# PRODUCTION
# ─────────────────────────────────────────────────────────────────────────────
class ProductionConfig(Config):
    DEBUG = False
    LOG_LEVEL = "WARNING"
    RATELIMIT_DEFAULT = "500 per day;100 per hour"
    RATELIMIT_STORAGE_URI = os.getenv("REDIS_URL", "memory://")
    MAX_API_LINKS = 5000

    @classmethod
    def init_app(cls, app):
        Config.init_app(app)


# ─────────────────────────────────────────────────────────────────────────────
# REGISTRY
# ─────────────────────────────────────────────────────────────────────────────
config = {
    "development": DevelopmentConfig,
    "testing":     TestingConfig,
    "production":  ProductionConfig,
    "default":     DevelopmentConfig,
}


def get_config(name: str | None = None) -> type[Config]:
    """Resolve a config class by name, falling back to SINRGRAPH_ENV, then default."""
    name = name or os.getenv("SINRGRAPH_ENV", "default")
    return config.get(name, config["default"])
