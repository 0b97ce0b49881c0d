"""Periodic nonlinear diffusion c_t = ((1 + kappa c^2) c_x)_x + S(t, x) on [-pi, pi]."""
import logging
import math

import numpy as np

from src.fd.diff_matrix import diff_matrices
from src.fd.grid import uniform_grid
from src.integrator.problem import ConstraintRow, SemiLinearProblem
from src.integrator.splitting import LinearSplitting
from src.problems.bundle import ProblemBundle
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError, ParameterError

logger = logging.getLogger(__name__)

SOURCES = {
    "cos_x_sin_t": lambda t, x: np.cos(x) * math.sin(t),
    "cos_x": lambda t, x: np.cos(x),
}


def diffusion_long_time_limit(kappa, x):
    """Closed-form limit c(inf, x), the real root of c + kappa c^3 / 3 = cos x.

    Args:
        kappa (float): Positive nonlinearity strength.
        x (float or array-like): Coordinates.

    Returns:
        numpy.ndarray or float: Limit values.
    """
    if kappa <= 0:
        logger.error(f"Long-time limit requested for kappa={kappa}")
        raise ParameterError(f"the closed-form limit needs kappa > 0, got {kappa}")
    cos_x = np.cos(x)
    root_kappa = math.sqrt(kappa)
    base = np.sqrt(9.0 * kappa * cos_x ** 2 + 4.0) + 3.0 * root_kappa * cos_x
    cube_root = np.cbrt(base)
    return (2.0 ** (1.0 / 3.0) * cube_root ** 2 - 2.0) / (2.0 ** (2.0 / 3.0) * root_kappa * cube_root)


def _periodic_constraints(d1, n):
    value_row = np.zeros(n)
    value_row[0], value_row[n - 1] = -1.0, 1.0
    slope_row = d1[n - 1] - d1[0]
    value_row.setflags(write=False)
    slope_row.setflags(write=False)
    return (
        ConstraintRow(0, lambda t, c: (value_row, 0.0), label="c(pi) - c(-pi) = 0"),
        ConstraintRow(n - 1, lambda t, c: (slope_row, 0.0), label="c'(pi) - c'(-pi) = 0"),
    )


def _operators(n, width):
    grid = uniform_grid(-math.pi, math.pi, n)
    mats = diff_matrices(grid, [1, 2], width)
    return grid, mats[1].entries, mats[2].entries


def _limit_or_cos(kappa, x):
    return diffusion_long_time_limit(kappa, x) if kappa > 0 else np.cos(x)


def diffusion_problem(kappa=1.0, source="cos_x_sin_t", n=None, initial_blend=0.0, width=None):
    """Method-of-lines system for the periodic nonlinear diffusion equation.

    G(c~) v = diag(1 + kappa c~^2) D2 v + diag(D1 (1 + kappa c~^2)) D1 v, and rows
    0 and n-1 of every stage system are replaced by periodicity of c and c_x.

    Args:
        kappa (float): Nonlinearity strength, >= 0.
        source (str): 'cos_x_sin_t' or 'cos_x'.
        n (int, optional): Grid points, DIFFUSION_POINTS by default.
        initial_blend (float): Initial state is initial_blend * c(inf, x).
        width (int, optional): Stencil width, DIFFUSION_STENCIL_WIDTH by default.

    Returns:
        SemiLinearProblem: The discretized system.
    """
    config = ConfigLoader().get_config()
    n = n or config["DIFFUSION_POINTS"]
    width = width or config["DIFFUSION_STENCIL_WIDTH"]
    if kappa < 0:
        raise ParameterError(f"kappa must be non-negative, got {kappa}")
    if source not in SOURCES:
        logger.error(f"Unknown diffusion source '{source}'")
        raise ConfigurationError(f"unknown source '{source}'; valid: {', '.join(SOURCES)}")
    grid, d1, d2 = _operators(n, width)
    x = grid.nodes
    source_fn = SOURCES[source]

    def f(t, c):
        return source_fn(t, x)

    def assemble_G(t, c):
        diffusivity = 1.0 + kappa * c ** 2
        return diffusivity[:, None] * d2 + (d1 @ diffusivity)[:, None] * d1

    u0 = initial_blend * _limit_or_cos(kappa, x) if initial_blend else np.zeros(n)
    return SemiLinearProblem(
        dim=n,
        f=f,
        assemble_G=assemble_G,
        u0=u0,
        constraints=_periodic_constraints(d1, n),
        name="diffusion",
        descriptor={"kappa": kappa, "source": source, "n": n, "width": width, "blend": initial_blend},
    )


def diffusion_splitting(kappa=1.0, source="cos_x_sin_t", n=None, initial_blend=0.0, width=None):
    """D2 implicit; kappa c^2 D2 c + D1(kappa c^2) D1 c + S explicit."""
    problem = diffusion_problem(kappa, source, n, initial_blend, width)
    _, d1, d2 = _operators(problem.dim, problem.descriptor["width"])
    x = uniform_grid(-math.pi, math.pi, problem.dim).nodes
    source_fn = SOURCES[source]

    def n_explicit(t, c):
        nonlinear = kappa * c ** 2
        return nonlinear * (d2 @ c) + (d1 @ nonlinear) * (d1 @ c) + source_fn(t, x)

    return LinearSplitting(
        L=d2,
        n_explicit=n_explicit,
        constraints=problem.constraints,
        u0=problem.u0,
        t0=problem.t0,
        name=f"diffusion splitting(kappa={kappa})",
        descriptor=dict(problem.descriptor),
    )


def diffusion_bundle(params):
    """Bundle builder used by build_problem('diffusion', ...)."""
    kappa = float(params.get("kappa", 1.0))
    source = str(params.get("source", "cos_x_sin_t"))
    n = int(params["n"]) if params.get("n") is not None else None
    blend = float(params.get("initial_blend", 0.0))
    problem = diffusion_problem(kappa, source, n, blend)
    grid = uniform_grid(-math.pi, math.pi, problem.dim)
    steady_fn = (lambda: _limit_or_cos(kappa, grid.nodes)) if source == "cos_x" else None
    return ProblemBundle(
        kind="diffusion",
        problem=problem,
        params={"kappa": kappa, "source": source, "n": problem.dim, "initial_blend": blend},
        grid=grid,
        steady_fn=steady_fn,
        splitting_fn=lambda: diffusion_splitting(kappa, source, problem.dim, blend),
    )
