"""One-dimensional node sets for method-of-lines discretizations."""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)


class GridKind(Enum):
    UNIFORM_PERIODIC_INTERVAL = "uniform"
    SINH_CLUSTERED = "sinh"


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing nodes with the recipe that produced them."""
    nodes: np.ndarray
    kind: GridKind
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ParameterError("a grid needs at least two nodes")
        if np.any(np.diff(nodes) <= 0):
            logger.error("Grid nodes are not strictly increasing")
            raise ParameterError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self):
        return self.nodes.size

    def spacing(self):
        """Gaps between consecutive nodes (length n - 1)."""
        return np.diff(self.nodes)

    def describe(self):
        details = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind.value}({details},n={self.n})"


def uniform_grid(a, b, n):
    """n equispaced nodes including both endpoints a and b."""
    if n < 2 or not b > a:
        logger.error(f"Invalid uniform grid request a={a}, b={b}, n={n}")
        raise ParameterError(f"uniform grid needs n >= 2 and b > a, got a={a}, b={b}, n={n}")
    return Grid(np.linspace(a, b, n), GridKind.UNIFORM_PERIODIC_INTERVAL, {"a": a, "b": b})


def sinh_clustered_grid(half_width, n, stretch):
    """Nodes L*sinh(stretch*xi)/sinh(stretch) for xi uniform on [-1, 1].

    Args:
        half_width (float): L, the grid spans [-L, L].
        n (int): Number of nodes.
        stretch (float): Clustering strength; density at 0 exceeds the
            density at the ends by cosh(stretch).

    Returns:
        Grid: The clustered grid.
    """
    if n < 2 or half_width <= 0 or stretch <= 0:
        logger.error(f"Invalid sinh grid request L={half_width}, n={n}, stretch={stretch}")
        raise ParameterError("sinh grid needs n >= 2, L > 0, stretch > 0")
    xi = np.linspace(-1.0, 1.0, n)
    nodes = half_width * np.sinh(stretch * xi) / math.sinh(stretch)
    # pin the endpoints and the symmetry against rounding
    nodes[0], nodes[-1] = -half_width, half_width
    nodes = 0.5 * (nodes - nodes[::-1])
    return Grid(nodes, GridKind.SINH_CLUSTERED, {"L": half_width, "stretch": stretch})
