"""One step of a semi-IMEX Runge-Kutta scheme.

Stage i solves

    (I - h a_ii G(t + c_i h, K~_i)) K_i
        = u + h sum_{j<i} [a~_ij f(t + c~_j h, K_j) + a_ij G(t + c_j h, K_j) K_j]

with K~_1 = u and K~_i = K_{i-1}; constraint rows of the matrix and the
right-hand side are overwritten before the solve. Stages with a_ii = 0 take
K_i = right-hand side directly.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List

import numpy as np

from src.integrator.linear_solver import DEFAULT_SOLVER
from src.tableau.conditions import check_alpha_condition
from src.utils.errors import DivergenceError

logger = logging.getLogger(__name__)

# Stage plans kept for the most recently stepped tableaus
PLAN_CACHE_SIZE = 32


@dataclass
class StepWorkspace:
    """Per-step intermediate values, owned by a single integration."""
    stage_states: List[np.ndarray] = field(default_factory=list)
    stage_f_values: Dict[int, np.ndarray] = field(default_factory=dict)
    stage_gv_products: Dict[int, np.ndarray] = field(default_factory=dict)
    diagonal_matrices: Dict[int, np.ndarray] = field(default_factory=dict)
    linear_solves: int = 0
    constraint_residuals: List[tuple] = field(default_factory=list)
    reused_matrix: bool = False
    alpha: float = None

    def max_constraint_residual(self):
        """Largest |row . K_i - rhs| / max(||K_i||_inf, 1) over implicit stages."""
        return max((abs(r) for _, _, r in self.constraint_residuals), default=0.0)


@lru_cache(maxsize=PLAN_CACHE_SIZE)
def _stage_plan(tb):
    """Which stage f values and G.K products a tableau ever reads."""
    s = tb.s
    alpha = check_alpha_condition(tb)
    need_f, need_gk = [], []
    for j in range(s):
        later_explicit = bool(np.any(tb.explicit_a[j + 1:, j] != 0.0))
        later_implicit = bool(np.any(tb.implicit_a[j + 1:, j] != 0.0))
        in_update = alpha is None
        need_f.append(later_explicit or (in_update and tb.explicit_b[j] != 0.0))
        need_gk.append(later_implicit or (in_update and tb.implicit_b[j] != 0.0))
    return alpha, tuple(need_f), tuple(need_gk)


def _check_finite(values, stage, name):
    if not np.all(np.isfinite(values)):
        logger.debug(f"Non-finite stage {stage} in {name}")
        raise DivergenceError(f"non-finite value in stage {stage}", stage=stage)


def step_with_workspace(problem, tb, t, u, h, solver=None, alpha_update=True):
    """Advance one step and keep the stage data.

    Args:
        problem (SemiLinearProblem): System to integrate.
        tb (ButcherPair): Scheme.
        t (float): Current time.
        u (numpy.ndarray): Current state.
        h (float): Step size.
        solver (LinearSolver, optional): Stage solver, dense LU by default.
        alpha_update (bool): For tableaus satisfying the alpha condition,
            form u_{n+1} = K_s/alpha + (1 - 1/alpha) u_n so that constraint
            rows carry over to the new state. When False the weighted sum
            is always used.

    Returns:
        tuple: (u_next, StepWorkspace).
    """
    solver = solver or DEFAULT_SOLVER
    u = np.asarray(u, dtype=float)
    s = tb.s
    a_tilde, c_tilde, b_tilde = tb.explicit_a, tb.explicit_c, tb.explicit_b
    a, c, b = tb.implicit_a, tb.implicit_c, tb.implicit_b
    alpha, need_f, need_gk = _stage_plan(tb)
    if not alpha_update:
        need_f = tuple(nf or b_tilde[j] != 0.0 for j, nf in enumerate(need_f))
        need_gk = tuple(ng or b[j] != 0.0 for j, ng in enumerate(need_gk))
        alpha = None

    ws = StepWorkspace(alpha=alpha)
    identity = np.eye(problem.dim)
    last_g = None

    for i in range(s):
        stage = i + 1
        rhs = u.copy()
        for j in range(i):
            if a_tilde[i, j] != 0.0:
                rhs += h * a_tilde[i, j] * ws.stage_f_values[j]
            if a[i, j] != 0.0:
                rhs += h * a[i, j] * ws.stage_gv_products[j]

        if a[i, i] == 0.0:
            k_i = rhs
            last_g = None
        else:
            t_i = t + c[i] * h
            lagged = u if i == 0 else ws.stage_states[i - 1]
            g = problem.assemble_G(t_i, lagged)
            matrix = identity - h * a[i, i] * g
            rows = []
            for row in problem.constraints:
                coefficients, value = row.build(t_i, lagged)
                matrix[row.row_index, :] = coefficients
                rhs[row.row_index] = value
                rows.append((row.row_index, coefficients, value))
            k_i = solver.solve(matrix, rhs, stage=stage)
            ws.linear_solves += 1
            ws.diagonal_matrices[i] = matrix
            last_g = g
            _check_finite(k_i, stage, problem.name)
            scale = max(np.max(np.abs(k_i)), 1.0)
            for index, coefficients, value in rows:
                ws.constraint_residuals.append((stage, index, (np.dot(coefficients, k_i) - value) / scale))

        _check_finite(k_i, stage, problem.name)
        ws.stage_states.append(k_i)
        if need_f[i]:
            ws.stage_f_values[i] = problem.f(t + c_tilde[i] * h, k_i)
        if need_gk[i]:
            ws.stage_gv_products[i] = problem.assemble_G(t + c[i] * h, k_i) @ k_i

    if alpha is not None:
        u_next = ws.stage_states[-1] / alpha + (1.0 - 1.0 / alpha) * u
    else:
        increment = np.zeros_like(u)
        for j in range(s):
            if b_tilde[j] != 0.0:
                increment += b_tilde[j] * ws.stage_f_values[j]
            if b[j] != 0.0:
                increment += b[j] * ws.stage_gv_products[j]
        if b[s] != 0.0:
            if last_g is not None:
                g_last = last_g
                ws.reused_matrix = True
            else:
                lagged = u if s == 1 else ws.stage_states[s - 2]
                g_last = problem.assemble_G(t + c[s - 1] * h, lagged)
            increment += b[s] * (g_last @ ws.stage_states[-1])
        u_next = u + h * increment
    _check_finite(u_next, s, problem.name)
    return u_next, ws


def step(problem, tb, t, u, h, solver=None):
    """Advance one step of size h from (t, u).

    Returns:
        numpy.ndarray: The new state.
    """
    u_next, _ = step_with_workspace(problem, tb, t, u, h, solver=solver)
    return u_next
