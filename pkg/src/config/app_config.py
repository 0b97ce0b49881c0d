"""Centralized configuration for the project."""
import os

# Tableau checks
ROW_SUM_TOL = 1e-12
ORDER_CONDITION_TOL = 1e-12
ALPHA_CONDITION_TOL = 1e-12

# Stability probe
STABILITY_LIMIT_Z = -1e8
STABILITY_PROBE_RE_RANGE = (-1e6, -1e-3)
STABILITY_PROBE_IM_MAX = 1e6
STABILITY_PROBE_POINTS = 61
STABILITY_AXIS_OFFSET = -1e-3
A_STABLE_TOL = 1e-9
L_STABLE_LIMIT_TOL = 1e-3

# Integration
STEP_COUNT_TOL = 1e-9
DIVERGENCE_THRESHOLD = 1e8
STEADY_TOLERANCE = 0.01
STEADY_MAX_STEPS = 100000

# Step-size search
SEARCH_H0 = 1e-3
SEARCH_GROWTH = 2.0
SEARCH_BRACKET_TOL = 0.05
SEARCH_H_CAP = 1e4
SEARCH_MIN_H = 1e-9

# Newton solve for steady states
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
NEWTON_FD_STEP = 1e-7

# Default problem parameters
DIFFUSION_POINTS = 129
DIFFUSION_STENCIL_WIDTH = 5
CAHN_HILLIARD_POINTS = 128
CAHN_HILLIARD_HALF_WIDTH = 20.0
CAHN_HILLIARD_STRETCH = 3.0
CAHN_HILLIARD_STENCIL_WIDTH = 7

# Rendering
TABLE_DIGITS = 3
LOSSLESS_DIGITS = 17

# Cache settings
CACHE_DIR = os.getenv("SEMIMEX_CACHE_DIR", "cache")
CACHE_MAX_SIZE = 200
CACHE_EXPIRY_DAYS = 30

# Logging settings
LOG_DIR = "logs"
LOG_FILE = os.path.join(LOG_DIR, "semimex.log")
LOG_LEVEL = os.getenv("SEMIMEX_LOG_LEVEL", "INFO")

# Trial parallelism (0 = one worker per physical core)
THREADS = 0

# CLI exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DIVERGENT = 2
EXIT_CONFIG = 3
