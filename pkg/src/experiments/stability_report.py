"""Tabulated |R(z)| samples of a scheme's stability function."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.experiments.base_runner import BaseRunner
from src.tableau.stability import StabilityProbeResult, eval_stability, printed_stability, probe_stability
from src.utils.config_loader import ConfigLoader
from src.utils.errors import PoleError

logger = logging.getLogger(__name__)


@dataclass
class StabilityRow:
    z: complex
    modulus: Optional[float]
    printed_modulus: Optional[float] = None
    pole: bool = False


@dataclass
class StabilityReport:
    scheme: str
    rows: List[StabilityRow] = field(default_factory=list)
    probe: Optional[StabilityProbeResult] = None
    probe_pole: Optional[str] = None


def default_report_samples():
    """Negative real axis -10^k (k = -2..6), the same magnitudes shifted onto
    the imaginary axis offset, and the limit point."""
    config = ConfigLoader().get_config()
    magnitudes = 10.0 ** np.arange(-2, 7)
    real_axis = -magnitudes
    imaginary = config["STABILITY_AXIS_OFFSET"] + 1j * magnitudes
    return [complex(z) for z in np.concatenate([real_axis, imaginary])] + [complex(config["STABILITY_LIMIT_Z"])]


def stability_report(tb, samples=None, probe_grid=None):
    """Sample |R(z)| (and the printed rational where one exists) at given points.

    Args:
        tb (ButcherPair): Scheme.
        samples (iterable of complex, optional): Points; default_report_samples() by default.
        probe_grid (array-like, optional): Classification grid, the left half-plane grid by default.

    Returns:
        StabilityReport: Per-point rows, pole rows marked, plus the probe classification
        or, when the classification grid hits a pole, the pole message.
    """
    samples = default_report_samples() if samples is None else [complex(z) for z in samples]
    rows = []
    for z in samples:
        try:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                modulus = abs(eval_stability(tb, z))
                printed = printed_stability(tb, z)
        except PoleError:
            logger.warning(f"{tb.name}: pole at z={z}")
            rows.append(StabilityRow(z, None, pole=True))
            continue
        rows.append(StabilityRow(z, float(modulus), None if printed is None else abs(printed)))
    try:
        return StabilityReport(tb.name, rows, probe_stability(tb, probe_grid))
    except PoleError as e:
        logger.warning(f"{tb.name}: classification grid hits a pole")
        return StabilityReport(tb.name, rows, probe_pole=str(e))


class StabilityRunner(BaseRunner):
    """Stability-function report for one scheme."""
    def run(self, options):
        tb = self.resolve_scheme(options)
        return stability_report(tb)
