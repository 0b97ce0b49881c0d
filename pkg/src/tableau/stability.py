"""Linear stability function R(z) of a semi-IMEX pair and sampled A/L-stability probes."""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial

from src.utils.config_loader import ConfigLoader
from src.utils.errors import PoleError

logger = logging.getLogger(__name__)


class StabilityClass(Enum):
    A_STABLE_EVIDENCE = "A_stable_evidence"
    L_STABLE_EVIDENCE = "L_stable_evidence"
    UNSTABLE_SAMPLE = "Unstable_sample"


@dataclass(frozen=True)
class StabilityProbeResult:
    """Outcome of sampling |R(z)| over the left half-plane.

    Sampling is evidence only; it cannot prove A-stability.
    """
    scheme: str
    sampled_max_modulus: float
    limit_modulus: float
    classification: StabilityClass
    worst_z: complex
    sample_count: int
    unstable_z: Optional[complex] = None

    def label(self):
        if self.classification is StabilityClass.UNSTABLE_SAMPLE:
            return f"{self.classification.value}({self.unstable_z:.3g})"
        return self.classification.value


def _stage_values(tb, z):
    """Stage values and update of one step on u' = (z/h) u with h = 1, u_n = 1."""
    z = np.asarray(z, dtype=complex)
    s = tb.s
    stages = []
    for i in range(s):
        rhs = np.ones_like(z)
        for j in range(i):
            if tb.implicit_a[i, j] != 0.0:
                rhs = rhs + tb.implicit_a[i, j] * z * stages[j]
        diag = tb.implicit_a[i, i]
        if diag != 0.0:
            factor = 1.0 - diag * z
            if np.any(factor == 0):
                pole = complex(np.ravel(z)[np.argmax(np.ravel(factor == 0))])
                logger.error(f"{tb.name}: stage {i + 1} factor vanishes at z={pole}")
                raise PoleError(f"stability function of '{tb.name}' has a pole at z={pole} (stage {i + 1})", stage=i + 1)
            rhs = rhs / factor
        stages.append(rhs)
    update = np.ones_like(z)
    for j in range(s):
        update = update + tb.implicit_b[j] * z * stages[j]
    update = update + tb.implicit_b[s] * z * stages[s - 1]
    return stages, update


def eval_stability(tb, z):
    """Evaluate R(z) by running one step on the linear scalar test problem.

    Args:
        tb (ButcherPair): Scheme.
        z (complex or array-like): Points z = lambda*h.

    Returns:
        complex or numpy.ndarray: R(z), same shape as z.
    """
    _, update = _stage_values(tb, z)
    return complex(update) if update.ndim == 0 else update


def last_stage_value(tb, z):
    """K_s of the scalar test step, used to cross-check the alpha identity."""
    stages, _ = _stage_values(tb, z)
    last = stages[-1]
    return complex(last) if last.ndim == 0 else last


def printed_stability(tb, z):
    """Evaluate the printed rational R(z) attached to a catalog scheme.

    Returns:
        complex or None: None when the scheme carries no printed form.
    """
    if tb.printed_stability is None:
        return None
    numerator, denominator = tb.printed_stability
    z = complex(z)
    return complex(polynomial.polyval(z, numerator) / polynomial.polyval(z, denominator))


def alpha_family_stability(alpha, b4, a21, z):
    """Closed-form R(z) of the three-stage alpha family."""
    z = np.asarray(z, dtype=complex)
    numerator = (
        z ** 2 * (2 * alpha * b4 * (-a21 + alpha - 1) + 2 * a21 - 2 * alpha + 1)
        - 2 * z * (-a21 + alpha + alpha * b4 - 1)
        + 2
    )
    denominator = 2 * alpha * b4 * z ** 2 * (alpha - a21) - 2 * z * (-a21 + alpha + alpha * b4) + 2
    value = numerator / denominator
    return complex(value) if value.ndim == 0 else value


def default_probe_grid(config=None):
    """Left half-plane sample grid.

    Re z is log-spaced over STABILITY_PROBE_RE_RANGE, Im z is log-spaced up
    to STABILITY_PROBE_IM_MAX in both signs plus zero. The smallest real part
    is the imaginary axis offset.

    Returns:
        numpy.ndarray: Complex sample points (flattened).
    """
    config = config or ConfigLoader().get_config()
    re_low, re_high = config["STABILITY_PROBE_RE_RANGE"]
    points = config["STABILITY_PROBE_POINTS"]
    magnitudes = np.logspace(np.log10(-re_high), np.log10(-re_low), points)
    real = -magnitudes
    axis = config["STABILITY_AXIS_OFFSET"]
    if axis not in real:
        real = np.append(real, axis)
    im_magnitudes = np.logspace(np.log10(-re_high), np.log10(config["STABILITY_PROBE_IM_MAX"]), points)
    imag = np.concatenate([-im_magnitudes[::-1], [0.0], im_magnitudes])
    grid = real[:, None] + 1j * imag[None, :]
    return grid.ravel()


def probe_stability(tb, grid=None):
    """Sample |R(z)| on the left half-plane and at z = STABILITY_LIMIT_Z.

    Args:
        tb (ButcherPair): Scheme.
        grid (array-like, optional): Sample points; defaults to default_probe_grid().

    Returns:
        StabilityProbeResult: Sampled evidence and classification.
    """
    config = ConfigLoader().get_config()
    points = default_probe_grid(config) if grid is None else np.asarray(grid, dtype=complex).ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        moduli = np.abs(eval_stability(tb, points))
    moduli = np.where(np.isfinite(moduli), moduli, np.inf)
    worst = int(np.argmax(moduli))
    sampled_max = float(moduli[worst])
    limit = abs(eval_stability(tb, complex(config["STABILITY_LIMIT_Z"])))

    if sampled_max > 1.0 + config["A_STABLE_TOL"]:
        classification = StabilityClass.UNSTABLE_SAMPLE
        unstable_z = complex(points[worst])
    elif limit < config["L_STABLE_LIMIT_TOL"]:
        classification, unstable_z = StabilityClass.L_STABLE_EVIDENCE, None
    else:
        classification, unstable_z = StabilityClass.A_STABLE_EVIDENCE, None
    logger.info(f"{tb.name}: max |R| = {sampled_max:.6g} over {points.size} samples, "
                f"|R({config['STABILITY_LIMIT_Z']:g})| = {limit:.3e}, {classification.value}")
    return StabilityProbeResult(
        scheme=tb.name,
        sampled_max_modulus=sampled_max,
        limit_modulus=limit,
        classification=classification,
        worst_z=complex(points[worst]),
        sample_count=int(points.size),
        unstable_z=unstable_z,
    )
