"""Linear splittings of the PDE problems for the classical IMEX baseline."""
import logging

from src.problems.cahn_hilliard import cahn_hilliard_splitting
from src.problems.diffusion import diffusion_splitting
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def linear_splitting(kind, params=None):
    """Constant implicit operator plus explicit remainder for a problem kind.

    Args:
        kind (str): 'diffusion' or 'cahn-hilliard'.
        params (dict, optional): Problem parameters (kappa/source/n/initial_blend
            or epsilon/n/half_width/stretch).

    Returns:
        LinearSplitting: Splitting with the same constraint rows and initial
            state as the semi-IMEX problem.
    """
    params = params or {}
    if kind == "diffusion":
        return diffusion_splitting(
            kappa=float(params.get("kappa", 1.0)),
            source=params.get("source", "cos_x_sin_t"),
            n=params.get("n"),
            initial_blend=float(params.get("initial_blend", 0.0)),
        )
    if kind == "cahn-hilliard":
        return cahn_hilliard_splitting(
            epsilon=float(params.get("epsilon", 1.0)),
            n=params.get("n"),
            half_width=params.get("half_width"),
            stretch=params.get("stretch"),
        )
    logger.error(f"No linear splitting for problem kind '{kind}'")
    raise ConfigurationError(f"no linear splitting for '{kind}'; valid: diffusion, cahn-hilliard")
