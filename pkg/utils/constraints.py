import os
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent

# Environment overrides
DB_ENV_VAR = "THOMFORGE_DB"
LOG_LEVEL_ENV_VAR = "THOMFORGE_LOG_LEVEL"

DEFAULT_DB_PATH = PROJECT_ROOT / "data" / "thom_polynomials.tpdb"

DEFAULT_VALUES = {
    "log_level": "WARNING",
    "batch_jobs": 4,
}

VALIDATION_LIMITS = {
    "weight": {"min": 1, "max": 10_000},
    "degree": {"min": 1, "max": 10_000},
    "supersymmetry_rank": {"min": 1, "max": 6},   # m, n for root expansion
    "batch_jobs": {"min": 1, "max": 64},
    "tuple_size": {"min": 1, "max": 4},
}

# Which alpha series each coefficient vector reproduces.
COMBINATION_TARGETS = {
    "alpha_image": "tpsm_alpha_image",
    "alpha_image2": "tpsm_alpha_image2",
    "alpha_dis": "tpsm_alpha_dis",
}

# alpha series and the target series rho must reproduce from them
RHO_TARGETS = {
    "tpsm_alpha_image": ("target_image", "tpsm_target_image"),
    "tpsm_alpha_dis": ("target_dis", "tpsm_target_dis"),
}


def database_path() -> Path:
    """Database location, honouring THOMFORGE_DB."""
    override = os.environ.get(DB_ENV_VAR)
    if override:
        return Path(override)
    return DEFAULT_DB_PATH


def default_log_level() -> str:
    return os.environ.get(LOG_LEVEL_ENV_VAR, DEFAULT_VALUES["log_level"]).upper()
