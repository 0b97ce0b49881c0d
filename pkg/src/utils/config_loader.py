"""Utility for loading configurations."""
import logging
import os

from dotenv import dotenv_values

from src.config.app_config import *
from src.config.experiment_config import EXPERIMENT_CONFIG, RUNNER_CLASSES, SWEEP_SCHEMES
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

# Keys accepted in a key=value config file (dashes and underscores both work)
CONFIG_FILE_KEYS = {
    "scheme", "scheme_file", "h_list", "t_end", "kappa", "epsilon", "format",
    "out", "problem", "n", "stretch", "source", "lossless", "params", "h0",
    "h_cap", "max_steps", "trajectory",
}


class ConfigLoader:
    """Loads and provides access to project configurations."""
    def get_config(self):
        """Get application configuration.

        Environment variables are read on every call so that a `.env` file
        loaded after import still takes effect.

        Returns:
            dict: Configuration dictionary.
        """
        try:
            config = {
                "ROW_SUM_TOL": ROW_SUM_TOL,
                "ORDER_CONDITION_TOL": ORDER_CONDITION_TOL,
                "ALPHA_CONDITION_TOL": ALPHA_CONDITION_TOL,
                "STABILITY_LIMIT_Z": STABILITY_LIMIT_Z,
                "STABILITY_PROBE_RE_RANGE": STABILITY_PROBE_RE_RANGE,
                "STABILITY_PROBE_IM_MAX": STABILITY_PROBE_IM_MAX,
                "STABILITY_PROBE_POINTS": STABILITY_PROBE_POINTS,
                "STABILITY_AXIS_OFFSET": STABILITY_AXIS_OFFSET,
                "A_STABLE_TOL": A_STABLE_TOL,
                "L_STABLE_LIMIT_TOL": L_STABLE_LIMIT_TOL,
                "STEP_COUNT_TOL": STEP_COUNT_TOL,
                "DIVERGENCE_THRESHOLD": DIVERGENCE_THRESHOLD,
                "STEADY_TOLERANCE": STEADY_TOLERANCE,
                "STEADY_MAX_STEPS": STEADY_MAX_STEPS,
                "SEARCH_H0": SEARCH_H0,
                "SEARCH_GROWTH": SEARCH_GROWTH,
                "SEARCH_BRACKET_TOL": SEARCH_BRACKET_TOL,
                "SEARCH_H_CAP": SEARCH_H_CAP,
                "SEARCH_MIN_H": SEARCH_MIN_H,
                "NEWTON_TOL": NEWTON_TOL,
                "NEWTON_MAX_ITER": NEWTON_MAX_ITER,
                "NEWTON_FD_STEP": NEWTON_FD_STEP,
                "DIFFUSION_POINTS": DIFFUSION_POINTS,
                "DIFFUSION_STENCIL_WIDTH": DIFFUSION_STENCIL_WIDTH,
                "CAHN_HILLIARD_POINTS": CAHN_HILLIARD_POINTS,
                "CAHN_HILLIARD_HALF_WIDTH": CAHN_HILLIARD_HALF_WIDTH,
                "CAHN_HILLIARD_STRETCH": CAHN_HILLIARD_STRETCH,
                "CAHN_HILLIARD_STENCIL_WIDTH": CAHN_HILLIARD_STENCIL_WIDTH,
                "TABLE_DIGITS": TABLE_DIGITS,
                "LOSSLESS_DIGITS": LOSSLESS_DIGITS,
                "CACHE_DIR": os.getenv("SEMIMEX_CACHE_DIR", CACHE_DIR),
                "CACHE_MAX_SIZE": CACHE_MAX_SIZE,
                "CACHE_EXPIRY_DAYS": CACHE_EXPIRY_DAYS,
                "LOG_DIR": LOG_DIR,
                "LOG_FILE": LOG_FILE,
                "LOG_LEVEL": os.getenv("SEMIMEX_LOG_LEVEL", LOG_LEVEL),
                "THREADS": self._threads_from_env(),
                "EXIT_OK": EXIT_OK,
                "EXIT_FAILURE": EXIT_FAILURE,
                "EXIT_DIVERGENT": EXIT_DIVERGENT,
                "EXIT_CONFIG": EXIT_CONFIG,
                "SWEEP_SCHEMES": SWEEP_SCHEMES,
                "RUNNER_CLASSES": RUNNER_CLASSES,
            }
            logger.debug("Loaded application configuration")
            return config
        except Exception as e:
            logger.error(f"Failed to load config: {e}")
            raise

    def get_experiment_config(self):
        """Get the experiment catalog.

        Returns:
            dict: Per-problem experiment configuration.
        """
        logger.debug("Loaded experiment configuration")
        return EXPERIMENT_CONFIG

    def load_config_file(self, path):
        """Read a plain key=value config file.

        Args:
            path (str): Path to the file.

        Returns:
            dict: Normalized keys (underscores) to string values.
        """
        if not os.path.exists(path):
            logger.error(f"Config file not found: {path}")
            raise ConfigurationError(f"config file not found: {path}")
        values = {}
        for key, value in dotenv_values(path).items():
            norm = key.strip().lower().replace("-", "_")
            if norm not in CONFIG_FILE_KEYS:
                logger.error(f"Unknown key '{key}' in {path}")
                raise ConfigurationError(f"unknown config key '{key}' in {path}")
            if value is None:
                raise ConfigurationError(f"config key '{key}' has no value")
            values[norm] = value.strip()
        logger.info(f"Loaded {len(values)} settings from {path}")
        return values

    @staticmethod
    def _threads_from_env():
        raw = os.getenv("SEMIMEX_THREADS")
        if raw is None or raw.strip() == "":
            return THREADS
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigurationError(f"SEMIMEX_THREADS must be an integer, got '{raw}'")
        if threads < 0:
            raise ConfigurationError("SEMIMEX_THREADS must be >= 0")
        return threads
