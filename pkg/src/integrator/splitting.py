"""Classical IMEX baseline with a constant linear implicit part.

u' = L u + N(t, u) is advanced with the stiffly accurate second-order
L-stable pair with gamma = 1 - 1/sqrt(2), delta = 1 - 1/(2 gamma):

    explicit                         implicit
    0     | 0                        0     | 0
    gamma | gamma  0                 gamma | 0  gamma
    1     | delta  1-delta  0        1     | 0  1-gamma  gamma
          | delta  1-delta  0              | 0  1-gamma  gamma

The update equals the last stage, so constraint rows hold on u_{n+1}.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from src.integrator.driver import run_fixed_steps, run_until_steady
from src.integrator.linear_solver import DEFAULT_SOLVER
from src.utils.errors import DivergenceError

logger = logging.getLogger(__name__)

GAMMA = 1.0 - 1.0 / math.sqrt(2.0)
DELTA = 1.0 - 1.0 / (2.0 * GAMMA)

BASELINE_EXPLICIT_A = np.array([
    [0.0, 0.0, 0.0],
    [GAMMA, 0.0, 0.0],
    [DELTA, 1.0 - DELTA, 0.0],
])
BASELINE_EXPLICIT_C = np.array([0.0, GAMMA, 1.0])
BASELINE_IMPLICIT_A = np.array([
    [0.0, 0.0, 0.0],
    [0.0, GAMMA, 0.0],
    [0.0, 1.0 - GAMMA, GAMMA],
])
BASELINE_IMPLICIT_C = np.array([0.0, GAMMA, 1.0])


@dataclass(frozen=True, eq=False)
class LinearSplitting:
    """Constant implicit operator L plus explicit remainder N(t, u)."""
    L: np.ndarray
    n_explicit: Callable[[float, np.ndarray], np.ndarray]
    constraints: Tuple = ()
    u0: np.ndarray = None
    t0: float = 0.0
    name: str = "splitting"
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        matrix = np.array(self.L, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, "L", matrix)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.u0 is not None:
            u0 = np.array(self.u0, dtype=float)
            u0.setflags(write=False)
            object.__setattr__(self, "u0", u0)

    @property
    def dim(self):
        return self.L.shape[0]


def _splitting_step(L, n_explicit, constraints, t, u, h, solver):
    u = np.asarray(u, dtype=float)
    identity = np.eye(u.size)
    stages, n_values, l_values = [u], [n_explicit(t, u)], [None]
    solves = 0
    worst = 0.0
    for i in (1, 2):
        rhs = u.copy()
        for j in range(i):
            if BASELINE_EXPLICIT_A[i, j] != 0.0:
                rhs += h * BASELINE_EXPLICIT_A[i, j] * n_values[j]
            if BASELINE_IMPLICIT_A[i, j] != 0.0:
                rhs += h * BASELINE_IMPLICIT_A[i, j] * l_values[j]
        t_i = t + BASELINE_IMPLICIT_C[i] * h
        matrix = identity - h * BASELINE_IMPLICIT_A[i, i] * L
        rows = []
        for row in constraints:
            coefficients, value = row.build(t_i, stages[-1])
            matrix[row.row_index, :] = coefficients
            rhs[row.row_index] = value
            rows.append((coefficients, value))
        k_i = solver.solve(matrix, rhs, stage=i + 1)
        solves += 1
        if not np.all(np.isfinite(k_i)):
            raise DivergenceError(f"non-finite value in baseline stage {i + 1}", stage=i + 1)
        scale = max(np.max(np.abs(k_i)), 1.0)
        for coefficients, value in rows:
            worst = max(worst, abs(np.dot(coefficients, k_i) - value) / scale)
        stages.append(k_i)
        l_values.append(L @ k_i)
        if i == 1:
            n_values.append(n_explicit(t + BASELINE_EXPLICIT_C[i] * h, k_i))
    return stages[-1], solves, worst


def imex_linear_splitting_step(L, n_explicit, constraints, t, u, h, solver=None):
    """One step of the baseline IMEX pair.

    Args:
        L (numpy.ndarray): Constant implicit operator.
        n_explicit (callable): Explicit part N(t, u).
        constraints (iterable of ConstraintRow): Rows replaced in each solve.
        t (float): Current time.
        u (numpy.ndarray): Current state.
        h (float): Step size.
        solver (LinearSolver, optional): Stage solver.

    Returns:
        numpy.ndarray: The new state.
    """
    u_next, _, _ = _splitting_step(np.asarray(L, dtype=float), n_explicit, tuple(constraints),
                                   t, u, h, solver or DEFAULT_SOLVER)
    return u_next


def _splitting_advance(splitting, h, solver):
    solver = solver or DEFAULT_SOLVER

    def advance(t, u):
        return _splitting_step(splitting.L, splitting.n_explicit, splitting.constraints, t, u, h, solver)
    return advance


def integrate_splitting(splitting, t_end, h, keep_trajectory=False, solver=None):
    """Fixed-step integration of a LinearSplitting, same contract as integrate()."""
    return run_fixed_steps(_splitting_advance(splitting, h, solver), splitting.u0, splitting.t0,
                           t_end, h, keep_trajectory, label=f"imex baseline on {splitting.name}")


def integrate_splitting_until_steady(splitting, h, reference, tol=None, max_steps=None, solver=None):
    """Run the baseline toward a steady state, same contract as integrate_until_steady()."""
    return run_until_steady(_splitting_advance(splitting, h, solver), splitting.u0, splitting.t0,
                            h, reference, tol, max_steps, label=f"imex baseline h={h:g} on {splitting.name}")
