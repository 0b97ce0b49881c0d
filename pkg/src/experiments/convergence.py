"""Convergence studies: final-time relative errors and observed rates."""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.experiments.base_runner import BaseRunner
from src.integrator.driver import integrate, write_trajectory_csv
from src.tableau.catalog import make_builtin
from src.utils.errors import ConfigurationError, SemiImexError
from src.utils.validation import parse_fraction, parse_h_list

logger = logging.getLogger(__name__)

ROUNDOFF_FLOOR = 1e-12


@dataclass
class ConvergenceRow:
    h: float
    error: float
    rate: Optional[float] = None
    divergent: bool = False


@dataclass
class ConvergenceReport:
    """Errors E(h) = ||u_h - u_ref||_inf / ||u_ref||_inf and log-ratio rates."""
    scheme: str
    problem: str
    reference: str
    t_end: float
    rows: List[ConvergenceRow] = field(default_factory=list)
    reference_drift: Optional[float] = None

    @property
    def has_divergent(self):
        return any(row.divergent for row in self.rows)

    def observed_rates(self, floor=ROUNDOFF_FLOOR):
        """Rates whose two errors both lie above the round-off floor."""
        rates = []
        for previous, row in zip(self.rows, self.rows[1:]):
            if row.rate is not None and previous.error >= floor and row.error >= floor:
                rates.append(row.rate)
        return rates


def relative_error(state, reference):
    ref_norm = np.max(np.abs(reference))
    if ref_norm == 0:
        raise ConfigurationError("reference state is identically zero")
    return float(np.max(np.abs(np.asarray(state) - reference)) / ref_norm)


def _rates(rows):
    for previous, row in zip(rows, rows[1:]):
        if previous.divergent or row.divergent or previous.error <= 0 or row.error <= 0:
            continue
        row.rate = math.log(previous.error / row.error) / math.log(previous.h / row.h)


def convergence_study(problem, tb, h_list, reference, t_end, harness=None, verify_reference=False,
                      trajectory_path=None):
    """Integrate once per step size and compare against a reference.

    Args:
        problem (SemiLinearProblem): System to integrate from its u0.
        tb (ButcherPair): Scheme under study.
        h_list (list[float]): Strictly decreasing step sizes dividing the interval.
        reference: Recipe dict for harness.reference_state, or a precomputed state.
        t_end (float): Final time.
        harness (ExperimentHarness, optional): Cache and pool; runs serially without one.
        verify_reference (bool): Also compute the reference with half its step
            and record the relative drift between the two.
        trajectory_path (str, optional): Write the trajectory of the coarsest run.

    Returns:
        ConvergenceReport: One row per step size; divergent runs are marked.
    """
    h_list = [float(h) for h in h_list]
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise ConfigurationError("step sizes must be strictly decreasing")
    if isinstance(reference, dict):
        if harness is None:
            raise ConfigurationError("a reference recipe needs an experiment harness")
        ref_state, ref_label = harness.reference_state(problem, reference, t_end)
    else:
        ref_state, ref_label = np.asarray(reference, dtype=float), "given"

    drift = None
    if verify_reference and isinstance(reference, dict) and reference.get("kind") == "scheme":
        finer, _ = harness.reference_state(problem, reference, t_end, refine=2)
        drift = relative_error(ref_state, finer)
        logger.info(f"Reference drift under halving: {drift:.3e}")

    def trial(indexed):
        index, h = indexed
        keep = trajectory_path is not None and index == 0
        try:
            result = integrate(problem, tb, t_end, h, keep_trajectory=keep)
        except SemiImexError as e:
            if isinstance(e, ConfigurationError):
                raise
            logger.warning(f"{tb.name} diverged at h={h:g}: {e}")
            return ConvergenceRow(h, float("inf"), divergent=True), None
        error = relative_error(result.state, ref_state)
        logger.info(f"{tb.name} h={h:g}: E={error:.3e}, {result.linear_solves} linear solves")
        return ConvergenceRow(h, error), result if keep else None

    outcomes = (harness.map(trial, enumerate(h_list)) if harness
                else [trial(item) for item in enumerate(h_list)])
    rows = [row for row, _ in outcomes]
    _rates(rows)
    if trajectory_path and outcomes and outcomes[0][1] is not None:
        write_trajectory_csv(outcomes[0][1], trajectory_path)
    return ConvergenceReport(tb.name, problem.describe(), ref_label, float(t_end), rows, drift)


class ConvergenceRunner(BaseRunner):
    """Runs a convergence study for one problem family."""
    def run(self, options):
        """Build the problem, resolve the reference and run the study.

        Args:
            options (dict): Resolved CLI/config options; `scheme` may list
                several comma-separated catalog names.

        Returns:
            ConvergenceReport or list[ConvergenceReport]: One study per scheme.
        """
        names = [name for name in (options.get("scheme") or "").split(",") if name]
        if options.get("scheme_file") or len(names) <= 1:
            schemes = [self.resolve_scheme(options)]
        else:
            schemes = [make_builtin(name) for name in names]
        settings = self.experiment_settings(options["problem"])
        params = dict(settings["convergence_params"])
        params.update(self.problem_overrides(options))
        bundle = self.build_bundle(options["problem"], params)
        h_list = parse_h_list(options.get("h_list") or settings["h_list"])
        t_end = parse_fraction(options["t_end"]) if options.get("t_end") is not None else settings["t_end"]
        reports = []
        for index, tb in enumerate(schemes):
            logger.info(f"Convergence study of {tb.name} on {bundle.describe()} over {len(h_list)} step sizes")
            reports.append(convergence_study(
                bundle.problem, tb, h_list, settings["reference"], t_end,
                harness=self.harness,
                verify_reference=bool(options.get("verify_reference")) and index == 0,
                trajectory_path=options.get("trajectory") if index == 0 else None,
            ))
        return reports[0] if len(reports) == 1 else reports

    def exit_code(self, report):
        reports = report if isinstance(report, list) else [report]
        if any(r.has_divergent for r in reports):
            return self.config["EXIT_DIVERGENT"]
        return self.config["EXIT_OK"]
