"""Fixed-step integration drivers and the run-to-steady-state loop."""
import logging
import os
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src.integrator.stepper import step_with_workspace
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError, ParameterError, SemiImexError, StepError

logger = logging.getLogger(__name__)


@dataclass
class IntegrationResult:
    """Final state of a fixed-step run."""
    state: np.ndarray
    t: float
    steps: int
    linear_solves: int
    trajectory: Optional[List[Tuple[float, np.ndarray]]] = None
    max_constraint_residual: float = 0.0


class SteadyStatus(Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    TIMED_OUT = "timed_out"


@dataclass
class SteadyOutcome:
    """Result of running toward a known steady state.

    `t_reached` is the convergence time for CONVERGED and the blow-up time
    for DIVERGED.
    """
    status: SteadyStatus
    final_state: np.ndarray
    relative_gap: float
    steps: int
    t_reached: float
    detail: str = ""

    @property
    def converged(self):
        return self.status is SteadyStatus.CONVERGED


def step_count(t0, t_end, h):
    """Number of steps of size h from t0 to t_end.

    Raises:
        ConfigurationError: If the interval is not an integer multiple of h.
    """
    config = ConfigLoader().get_config()
    if h <= 0:
        raise ConfigurationError(f"step size must be positive, got {h}")
    ratio = (t_end - t0) / h
    count = int(round(ratio))
    if count < 0 or abs(ratio - count) > config["STEP_COUNT_TOL"]:
        logger.error(f"Interval [{t0}, {t_end}] is not a multiple of h={h}")
        raise ConfigurationError(f"(t_end - t0)/h = {ratio:.12g} is not an integer; partial final steps are not taken")
    return count


def run_fixed_steps(advance, u0, t0, t_end, h, keep_trajectory=False, label="run"):
    """Drive `advance(t, u) -> (u_next, solves, residual)` over [t0, t_end].

    Failures inside a step are re-raised as StepError carrying the step number.
    """
    steps = step_count(t0, t_end, h)
    u = np.array(u0, dtype=float)
    solves = 0
    worst_residual = 0.0
    trajectory = [(t0, u.copy())] if keep_trajectory else None
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(steps):
            t = t0 + n * h
            try:
                u, stage_solves, residual = advance(t, u)
            except SemiImexError as e:
                logger.error(f"{label}: step {n + 1} at t={t:.6g} failed: {e}")
                raise StepError(f"step {n + 1} (t={t:.6g}): {e}", step=n + 1, cause=e) from e
            solves += stage_solves
            worst_residual = max(worst_residual, residual)
            if keep_trajectory:
                trajectory.append((t0 + (n + 1) * h, u.copy()))
    logger.debug(f"{label}: {steps} steps of h={h:g}, {solves} linear solves")
    return IntegrationResult(u, t0 + steps * h, steps, solves, trajectory, worst_residual)


def run_until_steady(advance, u0, t0, h, reference, tol=None, max_steps=None, label="run"):
    """Step until the relative gap to `reference` drops below tol.

    Returns:
        SteadyOutcome: CONVERGED, DIVERGED (non-finite, norm above the
        divergence threshold, or a failed stage solve) or TIMED_OUT.
    """
    config = ConfigLoader().get_config()
    tol = config["STEADY_TOLERANCE"] if tol is None else tol
    max_steps = config["STEADY_MAX_STEPS"] if max_steps is None else max_steps
    threshold = config["DIVERGENCE_THRESHOLD"]
    reference = np.asarray(reference, dtype=float)
    ref_norm = np.max(np.abs(reference)) if reference.size else 0.0
    if not np.all(np.isfinite(reference)) or ref_norm == 0.0:
        logger.error(f"{label}: reference must be finite with nonzero norm")
        raise ParameterError("steady reference must be finite with nonzero norm")

    u = np.array(u0, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(max_steps + 1):
            t = t0 + n * h
            if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > threshold:
                logger.debug(f"{label}: diverged at step {n}, t={t:.6g}")
                return SteadyOutcome(SteadyStatus.DIVERGED, u, float("inf"), n, t, "blow-up")
            gap = np.max(np.abs(u - reference)) / ref_norm
            if gap < tol:
                logger.debug(f"{label}: converged at step {n}, t={t:.6g}, gap={gap:.3e}")
                return SteadyOutcome(SteadyStatus.CONVERGED, u, float(gap), n, t)
            if n == max_steps:
                break
            try:
                u, _, _ = advance(t, u)
            except SemiImexError as e:
                logger.debug(f"{label}: step {n + 1} failed: {e}")
                return SteadyOutcome(SteadyStatus.DIVERGED, u, float("inf"), n + 1, t + h, str(e))
    logger.debug(f"{label}: no convergence within {max_steps} steps, gap={gap:.3e}")
    return SteadyOutcome(SteadyStatus.TIMED_OUT, u, float(gap), max_steps, t0 + max_steps * h)


def _semi_imex_advance(problem, tb, h, solver):
    def advance(t, u):
        u_next, ws = step_with_workspace(problem, tb, t, u, h, solver=solver)
        return u_next, ws.linear_solves, ws.max_constraint_residual()
    return advance


def integrate(problem, tb, t_end, h, keep_trajectory=False, solver=None):
    """Integrate from (problem.t0, problem.u0) to t_end with fixed steps.

    Args:
        problem (SemiLinearProblem): System to integrate.
        tb (ButcherPair): Scheme.
        t_end (float): Final time; (t_end - t0)/h must be an integer.
        h (float): Step size.
        keep_trajectory (bool): Record (t, state) after every step.
        solver (LinearSolver, optional): Stage solver.

    Returns:
        IntegrationResult: Final state, step and linear-solve counts.
    """
    advance = _semi_imex_advance(problem, tb, h, solver)
    return run_fixed_steps(advance, problem.u0, problem.t0, t_end, h, keep_trajectory,
                           label=f"{tb.name} on {problem.describe()}")


def integrate_until_steady(problem, tb, h, reference, tol=None, max_steps=None, solver=None):
    """Run until ||u - reference||_inf / ||reference||_inf < tol.

    Args:
        problem (SemiLinearProblem): System to integrate.
        tb (ButcherPair): Scheme.
        h (float): Step size.
        reference (numpy.ndarray): Steady or long-time-limit state.
        tol (float, optional): Relative tolerance, STEADY_TOLERANCE by default.
        max_steps (int, optional): Step budget, STEADY_MAX_STEPS by default.

    Returns:
        SteadyOutcome: How the run ended.
    """
    advance = _semi_imex_advance(problem, tb, h, solver)
    return run_until_steady(advance, problem.u0, problem.t0, h, reference, tol, max_steps,
                            label=f"{tb.name} h={h:g} on {problem.describe()}")


def write_trajectory_csv(result, path):
    """Write `t,u_0,...,u_{N-1}` rows with 17 significant digits.

    Args:
        result (IntegrationResult): Run with a recorded trajectory.
        path (str): Output CSV file.
    """
    if not result.trajectory:
        raise ConfigurationError("no trajectory was recorded for this run")
    digits = ConfigLoader().get_config()["LOSSLESS_DIGITS"]
    dim = result.trajectory[0][1].size
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(",".join(["t"] + [f"u_{i}" for i in range(dim)]) + "\n")
        for t, state in result.trajectory:
            f.write(",".join(f"{v:.{digits}g}" for v in [t, *state]) + "\n")
    logger.info(f"Wrote {len(result.trajectory)} trajectory rows to {path}")
