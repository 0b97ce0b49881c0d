"""Linear solvers for the implicit stage systems."""
import logging
import warnings
from abc import ABC, abstractmethod

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from src.utils.errors import SingularMatrixError

logger = logging.getLogger(__name__)


class LinearSolver(ABC):
    """Abstract interface for stage-system solvers."""
    @abstractmethod
    def factor(self, matrix, stage=None):
        pass

    @abstractmethod
    def solve_factored(self, factorization, rhs):
        pass

    def solve(self, matrix, rhs, stage=None):
        """Factor and solve in one call.

        Args:
            matrix (numpy.ndarray): Square system matrix.
            rhs (numpy.ndarray): Right-hand side.
            stage (int, optional): Stage index reported on failure.

        Returns:
            numpy.ndarray: Solution vector.
        """
        return self.solve_factored(self.factor(matrix, stage), rhs)


class DenseLUSolver(LinearSolver):
    """Dense LU with partial pivoting (LAPACK getrf through scipy)."""
    def factor(self, matrix, stage=None):
        """Factor a square matrix.

        Args:
            matrix (numpy.ndarray): Square matrix with finite entries.
            stage (int, optional): Stage index attached to a failure.

        Returns:
            tuple: scipy (lu, piv) factorization.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(matrix, check_finite=False)
        zero_pivots = np.flatnonzero(np.diag(lu) == 0.0)
        if zero_pivots.size:
            where = f" in stage {stage}" if stage is not None else ""
            logger.error(f"Zero pivot at column {zero_pivots[0]}{where}")
            raise SingularMatrixError(
                f"singular matrix{where}: exact zero pivot at column {zero_pivots[0]}", stage=stage)
        return lu, piv

    def solve_factored(self, factorization, rhs):
        return lu_solve(factorization, np.asarray(rhs, dtype=float), check_finite=False)


DEFAULT_SOLVER = DenseLUSolver()


def solve_linear(matrix, rhs):
    """Solve matrix @ x = rhs with dense LU and partial pivoting.

    Args:
        matrix (array-like): Square matrix.
        rhs (array-like): Right-hand side vector.

    Returns:
        numpy.ndarray: Solution x.
    """
    return DEFAULT_SOLVER.solve(matrix, rhs)
