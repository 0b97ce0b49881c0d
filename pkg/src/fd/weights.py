"""Finite-difference weights on arbitrary node sets."""
import logging

import numpy as np

from src.utils.errors import DegenerateStencilError, ParameterError

logger = logging.getLogger(__name__)


def fornberg_weights(x0, nodes, max_order):
    """Weights for derivatives 0..max_order at x0 from values at nodes.

    Fornberg's recurrence; row k of the result holds weights w_j with
    sum_j w_j g(nodes[j]) ~ g^(k)(x0), exact for polynomials of degree
    below len(nodes).

    Args:
        x0 (float): Evaluation point.
        nodes (array-like): Distinct stencil coordinates.
        max_order (int): Highest derivative order, smaller than len(nodes).

    Returns:
        numpy.ndarray: Array of shape (max_order + 1, len(nodes)).
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if max_order < 0 or max_order >= n:
        logger.error(f"Derivative order {max_order} with {n} nodes")
        raise ParameterError(f"derivative order {max_order} needs more than {n} nodes")
    if np.unique(x).size != n:
        logger.error(f"Duplicate stencil nodes: {x}")
        raise DegenerateStencilError("stencil nodes must be distinct")

    c = np.zeros((max_order + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - x0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c
