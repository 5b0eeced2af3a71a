# app/utils/settings.py
# ------------------------------------------------------------
# Environment-driven settings and the numeric tolerance table.
# Values come from the process environment (a local .env file is
# loaded first), everything else is fixed here.
# ------------------------------------------------------------

import logging
import os
from pathlib import Path
from types import MappingProxyType

from dotenv import load_dotenv

load_dotenv()

APP_DIR = Path(__file__).resolve().parents[1]

SURFACES_DIR = Path(os.getenv("BRACKETS_SURFACES_DIR", str(APP_DIR / "surfaces")))
RESULTS_DIR = Path(os.getenv("BRACKETS_RESULTS_DIR", "results"))
LOG_LEVEL = os.getenv("BRACKETS_LOG_LEVEL", "INFO").upper()
DEFAULT_JOBS = int(os.getenv("BRACKETS_JOBS", "1"))

# crossing search: halo radius around the fundamental-domain seeds
HALO_START = int(os.getenv("BRACKETS_HALO_START", "0"))
HALO_STEP = int(os.getenv("BRACKETS_HALO_STEP", "2"))
HALO_ROUNDS = int(os.getenv("BRACKETS_HALO_ROUNDS", "3"))

# Desk-scale default lengths per surface (scan --max-len fallback)
DEFAULT_MAX_LEN = {"pants": 6, "torus1": 6, "sphere4": 4, "genus2": 4}

TOLERANCES = MappingProxyType(
    {
        "determinant": 1e-12,
        "trace_target": 1e-9,
        "parabolic": 1e-9,
        "endpoint": 1e-9,
        "tangency": 1e-10,
        "window_snap": 1e-9,
        "cosh_residual": 1e-8,
        "angle_margin": 1e-6,
        "triple_point": 1e-8,
        "bucket": 1e-6,
    }
)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Configure root logging once for CLI / API entry points."""
    logging.basicConfig(level=getattr(logging, level or LOG_LEVEL, logging.INFO), format=LOG_FORMAT)
