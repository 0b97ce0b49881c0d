"""Problem bundles: a problem with its grid, steady reference and baseline splitting."""
import importlib
import logging
from functools import cached_property

from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


class ProblemBundle:
    """Everything the experiments need about one configured problem."""
    def __init__(self, kind, problem, params, grid=None, steady_fn=None, splitting_fn=None):
        """Initialize the bundle.

        Args:
            kind (str): Problem family ('scalar', 'diffusion', 'cahn-hilliard').
            problem (SemiLinearProblem): The semi-IMEX system.
            params (dict): Resolved parameters.
            grid (Grid, optional): Spatial grid.
            steady_fn (callable, optional): Computes the steady/limit state.
            splitting_fn (callable, optional): Builds the baseline LinearSplitting.
        """
        self.kind = kind
        self.problem = problem
        self.params = dict(params)
        self.grid = grid
        self._steady_fn = steady_fn
        self._splitting_fn = splitting_fn

    @property
    def has_steady(self):
        return self._steady_fn is not None

    @cached_property
    def steady(self):
        if self._steady_fn is None:
            raise ConfigurationError(f"{self.kind} with {self.params} has no steady state")
        logger.info(f"Computing steady reference for {self.problem.describe()}")
        return self._steady_fn()

    @cached_property
    def splitting(self):
        if self._splitting_fn is None:
            raise ConfigurationError(f"{self.kind} has no linear splitting baseline")
        return self._splitting_fn()

    def describe(self):
        return self.problem.describe()


def build_problem(kind, params=None):
    """Build a configured problem bundle by kind.

    Builders are loaded by dotted path from EXPERIMENT_CONFIG.

    Args:
        kind (str): 'scalar', 'diffusion' or 'cahn-hilliard'.
        params (dict, optional): Overrides of the default parameters.

    Returns:
        ProblemBundle: The assembled bundle.
    """
    experiments = ConfigLoader().get_experiment_config()
    if kind not in experiments:
        logger.error(f"Unknown problem kind '{kind}'")
        raise ConfigurationError(f"unknown problem '{kind}'; valid: {', '.join(experiments)}")
    merged = dict(experiments[kind]["params"])
    merged.update({k: v for k, v in (params or {}).items() if v is not None})
    module_path, func_name = experiments[kind]["builder"].rsplit(".", 1)
    builder = getattr(importlib.import_module(module_path), func_name)
    logger.debug(f"Building {kind} with {merged}")
    return builder(merged)
