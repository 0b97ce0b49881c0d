"""Order-condition and alpha-condition checks for double tableaus."""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.utils.config_loader import ConfigLoader
from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)

SWAPPED_BOUNDS_NOTE = (
    "first-order conditions use sum(b~_i, i<=s) = 1 and sum(b_i, i<=s+1) = 1; "
    "the printed bounds (b~ to s+1, b to s) are not satisfied by any built-in tableau"
)


@dataclass(frozen=True)
class ConditionResult:
    condition_id: str
    residual: float
    passed: bool


@dataclass
class ConditionReport:
    """Residuals of the order conditions checked for one tableau."""
    scheme: str
    order: int
    results: List[ConditionResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return all(result.passed for result in self.results)

    def worst_residual(self):
        return max((abs(result.residual) for result in self.results), default=0.0)


def _first_order_residuals(tb):
    return [
        ("consistency_explicit", float(np.sum(tb.explicit_b) - 1.0)),
        ("consistency_implicit", float(np.sum(tb.implicit_b) - 1.0)),
    ]


def _second_order_residuals(tb):
    s = tb.s
    b_tilde, c_tilde = tb.explicit_b, tb.explicit_c
    b, c = tb.implicit_b, tb.implicit_c
    b_last = b[s]

    def at(vector, index):
        # 1-based lookup; indices below 1 contribute nothing
        return vector[index - 1] if index >= 1 else 0.0

    heaviside = 1.0 if s - 2 > 0 else 0.0
    b_c = float(np.dot(b[:s], c))
    b_c_tilde = float(np.dot(b[1:s], c_tilde[1:]))
    return [
        ("b.c+b_{s+1}c_{s-1}", b_c + b_last * at(c, s - 1) - 0.5),
        ("b.c~+b_{s+1}c~_{s-1}", b_c_tilde + b_last * at(c_tilde, s - 1) - 0.5),
        ("b.c+H(s-2)b_{s+1}c_s", b_c + heaviside * b_last * c[s - 1] - 0.5),
        ("b~.c", float(np.dot(b_tilde, c)) - 0.5),
        ("b.c~+b_{s+1}c~_s", b_c_tilde + b_last * c_tilde[s - 1] - 0.5),
        ("b~.c~", float(np.dot(b_tilde[1:], c_tilde[1:])) - 0.5),
    ]


def check_order_conditions(tb, order):
    """Evaluate the first- or second-order conditions of a double tableau.

    Order 2 includes the order-1 residuals followed by the six coupled
    second-order residuals.

    Args:
        tb (ButcherPair): Tableau to check.
        order (int): 1 or 2.

    Returns:
        ConditionReport: Residual per condition; pass iff |residual| < tolerance.
    """
    if order not in (1, 2):
        logger.error(f"Order conditions requested for order {order}")
        raise ParameterError(f"order conditions are available for orders 1 and 2, got {order}")
    tol = ConfigLoader().get_config()["ORDER_CONDITION_TOL"]
    residuals = _first_order_residuals(tb)
    if order == 2:
        residuals += _second_order_residuals(tb)
    report = ConditionReport(scheme=tb.name, order=order, notes=[SWAPPED_BOUNDS_NOTE])
    for condition_id, residual in residuals:
        report.results.append(ConditionResult(condition_id, residual, abs(residual) < tol))
    logger.debug(f"{tb.name} order {order}: worst residual {report.worst_residual():.3e}")
    return report


def check_alpha_condition(tb):
    """Find alpha with alpha*b = last implicit row, alpha*b~ = last explicit row.

    When it exists the update reduces to u_{n+1} = K_s/alpha + (1 - 1/alpha) u_n.
    The last stage weights b_s and b~_s must also vanish; a tableau with a
    nonzero b_s or b~_s returns None.

    Args:
        tb (ButcherPair): Tableau to inspect.

    Returns:
        float or None: alpha, or None when the structure does not hold.
    """
    tol = ConfigLoader().get_config()["ALPHA_CONDITION_TOL"]
    s = tb.s
    if abs(tb.explicit_b[s - 1]) >= tol or abs(tb.implicit_b[s - 1]) >= tol:
        return None
    weights = np.concatenate([tb.explicit_b[:s - 1], tb.implicit_b[:s - 1], [tb.implicit_b[s]]])
    targets = np.concatenate([tb.explicit_a[s - 1, :s - 1], tb.implicit_a[s - 1, :s - 1], [tb.implicit_a[s - 1, s - 1]]])
    pivot = int(np.argmax(np.abs(weights)))
    if weights[pivot] == 0.0:
        return None
    alpha = float(targets[pivot] / weights[pivot])
    if alpha == 0.0 or np.max(np.abs(alpha * weights - targets)) >= tol:
        return None
    return alpha
