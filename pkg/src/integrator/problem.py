"""Semi-linear systems u' = f(t, u) + G(t, u) u."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintRow:
    """A stage-matrix row replaced by a discrete boundary condition.

    `build(t, lagged_state)` returns (coefficients, rhs); the row of the
    stage system becomes coefficients @ K = rhs.
    """
    row_index: int
    build: Callable[[float, np.ndarray], Tuple[np.ndarray, float]]
    label: str = ""

    def residual(self, t, lagged_state, state):
        coefficients, rhs = self.build(t, lagged_state)
        return float(np.dot(coefficients, state) - rhs)


@dataclass(frozen=True, eq=False)
class SemiLinearProblem:
    """A semi-linear system with optional constraint rows.

    Attributes:
        dim (int): Number of unknowns N.
        f (callable): Non-stiff part, f(t, u) -> vector[N].
        assemble_G (callable): Stiff matrix, assemble_G(t, lagged_u) -> matrix[N, N].
        u0 (numpy.ndarray): Initial state.
        t0 (float): Initial time.
        constraints (tuple of ConstraintRow): Rows replaced in every stage solve.
        exact (callable, optional): Exact solution t -> vector[N].
        name (str): Short identifier.
        descriptor (dict): Parameters that identify the problem in reports and cache keys.
    """
    dim: int
    f: Callable[[float, np.ndarray], np.ndarray]
    assemble_G: Callable[[float, np.ndarray], np.ndarray]
    u0: np.ndarray
    t0: float = 0.0
    constraints: Tuple[ConstraintRow, ...] = ()
    exact: Optional[Callable[[float], np.ndarray]] = None
    name: str = "problem"
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        u0 = np.array(self.u0, dtype=float).reshape(-1)
        if u0.size != self.dim:
            raise ParameterError(f"initial state has {u0.size} entries, expected {self.dim}")
        u0.setflags(write=False)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        indices = [row.row_index for row in self.constraints]
        if len(set(indices)) != len(indices):
            logger.error(f"Duplicate constraint rows in {self.name}: {indices}")
            raise ParameterError(f"constraint row indices must be distinct, got {indices}")
        if any(not 0 <= i < self.dim for i in indices):
            raise ParameterError(f"constraint row indices must lie in [0, {self.dim}), got {indices}")

    def rhs(self, t, u):
        """Full right-hand side f(t, u) + G(t, u) u."""
        return self.f(t, u) + self.assemble_G(t, u) @ u

    def describe(self):
        details = ",".join(f"{k}={v}" for k, v in sorted(self.descriptor.items()))
        return f"{self.name}({details})" if details else self.name
