"""Dense differentiation matrices built row by row from Fornberg stencils."""
import logging
import os
from dataclasses import dataclass

import numpy as np

from src.fd.weights import fornberg_weights
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DiffMatrix:
    """Derivative of a fixed order on a grid, as an n x n matrix.

    Row i uses the `width` nodes nearest node i; the window is clamped to
    the grid, so rows near the ends are one-sided.
    """
    order: int
    width: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self):
        return self.entries.shape[0]

    def row(self, i):
        return self.entries[i]

    def __matmul__(self, other):
        return self.entries @ other


def stencil_start(i, n, width):
    """First node index of the width-point window used for row i."""
    return min(max(i - width // 2, 0), n - width)


def diff_matrices(grid, orders, width):
    """Several derivative orders sharing one stencil computation per row.

    Args:
        grid (Grid): Node set.
        orders (iterable of int): Derivative orders wanted.
        width (int): Stencil point count.

    Returns:
        dict: order -> DiffMatrix.
    """
    orders = sorted(set(orders))
    n = grid.n
    if width > n:
        logger.error(f"Stencil width {width} exceeds grid size {n}")
        raise ConfigurationError(f"stencil width {width} exceeds the number of grid points {n}")
    if not orders or orders[0] < 0 or orders[-1] >= width:
        logger.error(f"Derivative orders {orders} incompatible with width {width}")
        raise ConfigurationError(f"derivative orders must lie in [0, {width - 1}] for width {width}")

    nodes = grid.nodes
    tables = {m: np.zeros((n, n)) for m in orders}
    for i in range(n):
        start = stencil_start(i, n, width)
        weights = fornberg_weights(nodes[i], nodes[start:start + width], orders[-1])
        for m in orders:
            tables[m][i, start:start + width] = weights[m]
    logger.debug(f"Built derivative orders {orders} with width {width} on {grid.describe()}")
    return {m: DiffMatrix(m, width, tables[m]) for m in orders}


def diff_matrix(grid, order, width):
    """Differentiation matrix of one order.

    Args:
        grid (Grid): Node set.
        order (int): Derivative order m < width.
        width (int): Stencil point count, at most grid.n.

    Returns:
        DiffMatrix: The operator.
    """
    return diff_matrices(grid, [order], width)[order]


def dump_coo(matrix, path):
    """Write the nonzero entries as `i j value` lines for inspection.

    Args:
        matrix (DiffMatrix or numpy.ndarray): Matrix to dump.
        path (str): Output file.
    """
    entries = matrix.entries if isinstance(matrix, DiffMatrix) else np.asarray(matrix)
    digits = ConfigLoader().get_config()["LOSSLESS_DIGITS"]
    rows, cols = np.nonzero(entries)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(f"# {entries.shape[0]} {entries.shape[1]} {rows.size}\n")
        for i, j in zip(rows, cols):
            f.write(f"{i} {j} {entries[i, j]:.{digits}g}\n")
    logger.info(f"Wrote {rows.size} nonzeros to {path}")
