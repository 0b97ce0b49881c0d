"""Double Butcher tableau for semi-IMEX Runge-Kutta schemes."""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.utils.config_loader import ConfigLoader
from src.utils.errors import TableauError

logger = logging.getLogger(__name__)


def _frozen(values, ndim):
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise TableauError(f"expected a {ndim}-d coefficient array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ButcherPair:
    """Explicit tableau (a~, c~, b~) paired with an implicit tableau (a, c, b).

    The implicit weights have length s+1; the extra weight b_{s+1} multiplies
    the lagged diagonal term G(t+c_s h, K~_s) K_s in the update.

    Attributes:
        name (str): Scheme identifier.
        explicit_a (numpy.ndarray): s x s strictly lower triangular matrix.
        explicit_c (numpy.ndarray): Explicit abscissae, length s.
        explicit_b (numpy.ndarray): Explicit weights, length s.
        implicit_a (numpy.ndarray): s x s lower triangular matrix.
        implicit_c (numpy.ndarray): Implicit abscissae, length s.
        implicit_b (numpy.ndarray): Implicit weights, length s+1.
        declared_order (int): Order claimed for the scheme (1, 2 or 3).
        description (str): One-line description.
        printed_stability (tuple, optional): (numerator, denominator)
            coefficients of R(z) in ascending powers, where known.
    """
    name: str
    explicit_a: np.ndarray
    explicit_c: np.ndarray
    explicit_b: np.ndarray
    implicit_a: np.ndarray
    implicit_c: np.ndarray
    implicit_b: np.ndarray
    declared_order: int
    description: str = ""
    printed_stability: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = field(default=None, repr=False)

    def __post_init__(self):
        for attr in ("explicit_a", "implicit_a"):
            object.__setattr__(self, attr, _frozen(getattr(self, attr), 2))
        for attr in ("explicit_c", "explicit_b", "implicit_c", "implicit_b"):
            object.__setattr__(self, attr, _frozen(getattr(self, attr), 1))
        self._validate()

    @property
    def s(self):
        """Number of stages."""
        return self.explicit_b.shape[0]

    @property
    def diagonal(self):
        return np.diag(self.implicit_a)

    def implicit_stages(self):
        """Indices (0-based) of stages that require a linear solve."""
        return [i for i in range(self.s) if self.implicit_a[i, i] != 0.0]

    def linear_solve_count(self):
        return len(self.implicit_stages())

    def _fail(self, message):
        logger.error(f"Invalid tableau '{self.name}': {message}")
        raise TableauError(f"tableau '{self.name}': {message}")

    def _validate(self):
        s = self.explicit_b.shape[0]
        tol = ConfigLoader().get_config()["ROW_SUM_TOL"]
        if s < 1:
            self._fail("at least one stage is required")
        shapes = {
            "explicit_a": (self.explicit_a.shape, (s, s)),
            "implicit_a": (self.implicit_a.shape, (s, s)),
            "explicit_c": (self.explicit_c.shape, (s,)),
            "implicit_c": (self.implicit_c.shape, (s,)),
            "implicit_b": (self.implicit_b.shape, (s + 1,)),
        }
        for attr, (got, want) in shapes.items():
            if got != want:
                self._fail(f"{attr} has shape {got}, expected {want}")
        for attr in ("explicit_a", "explicit_c", "explicit_b", "implicit_a", "implicit_c", "implicit_b"):
            if not np.all(np.isfinite(getattr(self, attr))):
                self._fail(f"{attr} has non-finite entries")
        if self.declared_order not in (1, 2, 3):
            self._fail(f"declared order must be 1, 2 or 3, got {self.declared_order}")
        if np.any(np.triu(self.explicit_a) != 0.0):
            self._fail("explicit_a must be strictly lower triangular")
        if np.any(np.triu(self.implicit_a, k=1) != 0.0):
            self._fail("implicit_a must be lower triangular")

        explicit_rows = self.explicit_a.sum(axis=1) - self.explicit_c
        implicit_rows = self.implicit_a.sum(axis=1) - self.implicit_c
        for label, rows in (("explicit", explicit_rows), ("implicit", implicit_rows)):
            worst = int(np.argmax(np.abs(rows)))
            if abs(rows[worst]) >= tol:
                self._fail(f"{label} row sum of stage {worst + 1} misses its abscissa by {rows[worst]:.3e}")

        if abs(self.explicit_b.sum() - 1.0) >= tol:
            self._fail(f"explicit weights sum to {self.explicit_b.sum():.17g}")
        if abs(self.implicit_b.sum() - 1.0) >= tol:
            self._fail(f"implicit weights sum to {self.implicit_b.sum():.17g}")
