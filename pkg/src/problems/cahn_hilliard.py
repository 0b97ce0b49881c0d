"""One-dimensional Cahn-Hilliard equation phi_t = (f'(phi) - eps^2 phi_xx)_xx on [-L, L].

f(phi) = (phi^2 - 1)^2 / 4, so f''(phi) = 3 phi^2 - 1. No-flux boundaries
d_n phi = 0 and d_n mu = 0 are imposed at both ends through four replaced rows.
"""
import logging
import math
import os

import numpy as np

from src.fd.diff_matrix import diff_matrices
from src.fd.grid import sinh_clustered_grid
from src.integrator.linear_solver import solve_linear
from src.integrator.problem import ConstraintRow, SemiLinearProblem
from src.integrator.splitting import LinearSplitting
from src.problems.bundle import ProblemBundle
from src.utils.config_loader import ConfigLoader
from src.utils.errors import NewtonError, ParameterError

logger = logging.getLogger(__name__)


def _fpp(phi):
    return 3.0 * phi ** 2 - 1.0


class CahnHilliardOperators:
    """Grid and width-w derivative matrices D1..D4 for one configuration."""
    def __init__(self, epsilon, n, half_width, stretch, width):
        if epsilon <= 0:
            logger.error(f"Cahn-Hilliard requested with epsilon={epsilon}")
            raise ParameterError(f"epsilon must be positive, got {epsilon}")
        self.epsilon = epsilon
        self.grid = sinh_clustered_grid(half_width, n, stretch)
        mats = diff_matrices(self.grid, [1, 2, 3, 4], width)
        self.d1, self.d2, self.d3, self.d4 = (mats[k].entries for k in (1, 2, 3, 4))
        self.n = n
        self.width = width

    def apply_G(self, phi_lagged, v):
        fpp = _fpp(phi_lagged)
        return (-self.epsilon ** 2 * (self.d4 @ v) + fpp * (self.d2 @ v)
                + (self.d1 @ fpp) * (self.d1 @ v))

    def assemble_G(self, phi_lagged):
        fpp = _fpp(phi_lagged)
        return (-self.epsilon ** 2 * self.d4 + fpp[:, None] * self.d2
                + (self.d1 @ fpp)[:, None] * self.d1)

    def boundary_rows(self):
        """Rows 0 and n-1 carry d_n phi = 0, rows 1 and n-2 carry d_n mu = 0."""
        n, eps2 = self.n, self.epsilon ** 2
        d1_left, d1_right = self.d1[0].copy(), self.d1[n - 1].copy()
        d3_left, d3_right = self.d3[0].copy(), self.d3[n - 1].copy()
        for row in (d1_left, d1_right, d3_left, d3_right):
            row.setflags(write=False)

        def flux_left(t, phi):
            return -eps2 * d3_left + _fpp(phi[0]) * d1_left, 0.0

        def flux_right(t, phi):
            return -eps2 * d3_right + _fpp(phi[n - 1]) * d1_right, 0.0

        return (
            ConstraintRow(0, lambda t, phi: (d1_left, 0.0), label="phi_x(-L) = 0"),
            ConstraintRow(1, flux_left, label="mu_x(-L) = 0"),
            ConstraintRow(n - 2, flux_right, label="mu_x(L) = 0"),
            ConstraintRow(n - 1, lambda t, phi: (d1_right, 0.0), label="phi_x(L) = 0"),
        )


def _resolve(epsilon, n, half_width, stretch, width):
    config = ConfigLoader().get_config()
    return CahnHilliardOperators(
        epsilon,
        n or config["CAHN_HILLIARD_POINTS"],
        half_width or config["CAHN_HILLIARD_HALF_WIDTH"],
        stretch or config["CAHN_HILLIARD_STRETCH"],
        width or config["CAHN_HILLIARD_STENCIL_WIDTH"],
    )


def _descriptor(ops):
    return {
        "epsilon": ops.epsilon,
        "n": ops.n,
        "L": ops.grid.params["L"],
        "stretch": ops.grid.params["stretch"],
        "width": ops.width,
    }


def cahn_hilliard_problem(epsilon, n=None, half_width=None, stretch=None, width=None, u0=None):
    """Semi-IMEX form with f = 0 and G(phi~) = -eps^2 D4 + diag(f''(phi~)) D2 + diag(D1 f''(phi~)) D1.

    Args:
        epsilon (float): Interface width, > 0.
        n (int, optional): Number of clustered grid points.
        half_width (float, optional): Domain half width L.
        stretch (float, optional): sinh clustering strength.
        width (int, optional): Stencil width for every derivative order.
        u0 (array-like, optional): Initial state; tanh(x) by default.

    Returns:
        SemiLinearProblem: The discretized system.
    """
    ops = _resolve(epsilon, n, half_width, stretch, width)
    x = ops.grid.nodes
    zero = np.zeros(ops.n)
    return SemiLinearProblem(
        dim=ops.n,
        f=lambda t, phi: zero,
        assemble_G=lambda t, phi: ops.assemble_G(phi),
        u0=np.tanh(x) if u0 is None else u0,
        constraints=ops.boundary_rows(),
        name="cahn-hilliard",
        descriptor=_descriptor(ops),
    )


def cahn_hilliard_unbounded_steady(epsilon, x):
    """Steady kink tanh(x / (sqrt(2) eps)) of the problem on the whole line."""
    return np.tanh(np.asarray(x, dtype=float) / (math.sqrt(2.0) * epsilon))


def _mass_weights(grid):
    """Trapezoid quadrature weights on the grid nodes."""
    gaps = grid.spacing()
    weights = np.zeros(grid.n)
    weights[:-1] += 0.5 * gaps
    weights[1:] += 0.5 * gaps
    return weights


def _steady_rows(ops, mass):
    """Boundary rows of the steady problem.

    Rows 0 and n-1 keep d_n phi = 0. The two flux rows are redundant at a
    steady state (mu is then constant): row 1 carries their sum and row n-2
    fixes the mass, which pins the interface.
    """
    n = ops.n
    phi_left, flux_left, flux_right, phi_right = ops.boundary_rows()
    weights = _mass_weights(ops.grid)
    weights.setflags(write=False)

    def flux_sum(t, phi):
        left, _ = flux_left.build(t, phi)
        right, _ = flux_right.build(t, phi)
        return left + right, 0.0

    return (
        phi_left,
        ConstraintRow(1, flux_sum, label="mu_x(-L) + mu_x(L) = 0"),
        ConstraintRow(n - 2, lambda t, phi: (weights, mass), label=f"mass = {mass:g}"),
        phi_right,
    )


def _steady_residual(ops, rows, phi):
    residual = ops.apply_G(phi, phi)
    for row in rows:
        coefficients, value = row.build(0.0, phi)
        residual[row.row_index] = np.dot(coefficients, phi) - value
    return residual


def _fd_jacobian(ops, rows, phi, base, fd_step):
    jacobian = np.empty((phi.size, phi.size))
    for j in range(phi.size):
        delta = fd_step * (1.0 + abs(phi[j]))
        shifted = phi.copy()
        shifted[j] += delta
        jacobian[:, j] = (_steady_residual(ops, rows, shifted) - base) / delta
    return jacobian


def steady_residual(epsilon, phi, n=None, half_width=None, stretch=None, width=None):
    """G(phi) phi with the four time-stepping boundary rows replaced by their residuals."""
    ops = _resolve(epsilon, n, half_width, stretch, width)
    return _steady_residual(ops, ops.boundary_rows(), np.asarray(phi, dtype=float))


def cahn_hilliard_steady(epsilon, initial_guess=None, n=None, half_width=None, stretch=None,
                         width=None, tol=None, max_iter=None, mass=None):
    """Steady state of the discretized problem by Newton's method.

    The residual is G(phi) phi with the boundary rows replaced: d_n phi = 0 at
    both ends, the sum of the two end fluxes, and the mass of the initial
    guess (zero for an odd guess on the symmetric grid). The Jacobian is built
    by forward differences with perturbation NEWTON_FD_STEP * (1 + |phi_j|);
    steps are halved until the Euclidean residual decreases.

    Args:
        epsilon (float): Interface width.
        initial_guess (array-like, optional): Starting state, tanh(x) by default.
        tol (float, optional): Stop when max |R| < tol (NEWTON_TOL).
        max_iter (int, optional): Iteration limit (NEWTON_MAX_ITER).
        mass (float, optional): Trapezoid integral of the result; that of the guess by default.

    Returns:
        numpy.ndarray: The steady state on the clustered grid.

    Raises:
        NewtonError: If max |R| does not drop below tol within max_iter.
    """
    config = ConfigLoader().get_config()
    tol = config["NEWTON_TOL"] if tol is None else tol
    max_iter = config["NEWTON_MAX_ITER"] if max_iter is None else max_iter
    fd_step = config["NEWTON_FD_STEP"]
    ops = _resolve(epsilon, n, half_width, stretch, width)
    phi = np.tanh(ops.grid.nodes) if initial_guess is None else np.array(initial_guess, dtype=float)
    if phi.shape != (ops.n,) or not np.all(np.isfinite(phi)):
        raise ParameterError(f"initial guess must be {ops.n} finite values")
    if mass is None:
        mass = float(np.dot(_mass_weights(ops.grid), phi))
    rows = _steady_rows(ops, mass)

    residual = _steady_residual(ops, rows, phi)
    norm = np.max(np.abs(residual))
    for iteration in range(max_iter):
        if norm < tol:
            logger.info(f"Newton converged for eps={epsilon} after {iteration} iterations, |R|={norm:.3e}")
            return phi
        jacobian = _fd_jacobian(ops, rows, phi, residual, fd_step)
        update = solve_linear(jacobian, -residual)
        merit = np.linalg.norm(residual)
        damping = 1.0
        while damping >= 1e-3:
            trial = phi + damping * update
            trial_residual = _steady_residual(ops, rows, trial)
            if np.linalg.norm(trial_residual) < merit:
                break
            damping *= 0.5
        else:
            logger.error(f"Newton line search failed for eps={epsilon} at |R|={norm:.3e}")
            raise NewtonError(f"Newton step gives no descent (|R|={norm:.3e})", residual=float(norm))
        phi, residual = trial, trial_residual
        norm = np.max(np.abs(residual))
        logger.debug(f"Newton iteration {iteration + 1}: |R|={norm:.3e}, damping={damping:g}")
    if norm < tol:
        logger.info(f"Newton converged for eps={epsilon} after {max_iter} iterations, |R|={norm:.3e}")
        return phi
    logger.error(f"Newton failed for eps={epsilon}: |R|={norm:.3e} after {max_iter} iterations")
    raise NewtonError(f"Newton did not converge in {max_iter} iterations (|R|={norm:.3e})", residual=float(norm))


def write_steady_csv(grid, values, path):
    """Write `x,value` rows with 17 significant digits."""
    digits = ConfigLoader().get_config()["LOSSLESS_DIGITS"]
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ParameterError(f"expected {grid.n} values, got {values.size}")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write("x,value\n")
        for x, value in zip(grid.nodes, values):
            f.write(f"{x:.{digits}g},{value:.{digits}g}\n")
    logger.info(f"Wrote steady profile ({grid.n} points) to {path}")


def cahn_hilliard_splitting(epsilon, n=None, half_width=None, stretch=None, width=None):
    """-eps^2 D4 implicit; f''(phi) D2 phi + (D1 f''(phi)) D1 phi explicit."""
    ops = _resolve(epsilon, n, half_width, stretch, width)

    def n_explicit(t, phi):
        fpp = _fpp(phi)
        return fpp * (ops.d2 @ phi) + (ops.d1 @ fpp) * (ops.d1 @ phi)

    return LinearSplitting(
        L=-epsilon ** 2 * ops.d4,
        n_explicit=n_explicit,
        constraints=ops.boundary_rows(),
        u0=np.tanh(ops.grid.nodes),
        name=f"cahn-hilliard splitting(epsilon={epsilon})",
        descriptor=_descriptor(ops),
    )


def cahn_hilliard_bundle(params):
    """Bundle builder used by build_problem('cahn-hilliard', ...).

    The steady reference starts Newton from the whole-line kink, which is
    close to the bounded-domain solution for every epsilon in the sweep.
    """
    epsilon = float(params.get("epsilon", 1.0))
    n = int(params["n"]) if params.get("n") is not None else None
    half_width = float(params["half_width"]) if params.get("half_width") is not None else None
    stretch = float(params["stretch"]) if params.get("stretch") is not None else None
    problem = cahn_hilliard_problem(epsilon, n, half_width, stretch)
    grid = sinh_clustered_grid(problem.descriptor["L"], problem.dim, problem.descriptor["stretch"])
    geometry = (problem.dim, problem.descriptor["L"], problem.descriptor["stretch"])

    def steady():
        guess = cahn_hilliard_unbounded_steady(epsilon, grid.nodes)
        return cahn_hilliard_steady(epsilon, guess, *geometry)

    return ProblemBundle(
        kind="cahn-hilliard",
        problem=problem,
        params={"epsilon": epsilon, "n": problem.dim, "half_width": geometry[1], "stretch": geometry[2]},
        grid=grid,
        steady_fn=steady,
        splitting_fn=lambda: cahn_hilliard_splitting(epsilon, *geometry),
    )
