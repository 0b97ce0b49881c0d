"""Largest-stable-step searches and the step-size sweep tables."""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from src.experiments.base_runner import BaseRunner
from src.integrator.driver import SteadyStatus, integrate_until_steady
from src.integrator.splitting import integrate_splitting_until_steady
from src.problems.bundle import build_problem
from src.tableau.catalog import make_builtin
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError
from src.utils.validation import parse_fraction, parse_number_list

logger = logging.getLogger(__name__)

BASELINE_COLUMN = "imex"


@dataclass(frozen=True)
class SearchConfig:
    h0: float
    growth: float
    bracket_tol: float
    h_cap: float
    max_steps: int
    min_h: float
    tol: float

    @classmethod
    def from_config(cls, **overrides):
        """Defaults from app_config; None-valued overrides are ignored."""
        config = ConfigLoader().get_config()
        search = cls(
            h0=config["SEARCH_H0"],
            growth=config["SEARCH_GROWTH"],
            bracket_tol=config["SEARCH_BRACKET_TOL"],
            h_cap=config["SEARCH_H_CAP"],
            max_steps=config["STEADY_MAX_STEPS"],
            min_h=config["SEARCH_MIN_H"],
            tol=config["STEADY_TOLERANCE"],
        )
        search = replace(search, **{k: v for k, v in overrides.items() if v is not None})
        if search.h0 <= 0 or search.growth <= 1 or search.bracket_tol <= 0 or search.h_cap < search.h0:
            raise ConfigurationError(f"invalid search configuration {search}")
        return search


@dataclass
class StepSizeSearchResult:
    """Largest step whose steady-state trial converged.

    `h_max` is None when no trial down to min_h converged; `capped` means
    h_cap itself converged.
    """
    scheme: str
    problem: str
    h_max: Optional[float]
    bracket: Tuple[Optional[float], Optional[float]]
    trace: List[Tuple[float, SteadyStatus]]
    config: SearchConfig
    capped: bool = False

    def label(self, lossless=False):
        if self.capped:
            return f">{self.config.h_cap:.0e}"
        if self.h_max is None:
            return f"<{self.config.min_h:.0e}"
        return repr(self.h_max) if lossless else f"{self.h_max:.3g}"


@dataclass
class StepSizeTable:
    """h_max per (parameter value, scheme column)."""
    problem: str
    param_name: str
    values: List[float]
    columns: List[str]
    entries: Dict[Tuple[float, str], StepSizeSearchResult] = field(default_factory=dict)

    def result(self, value, column):
        return self.entries[(value, column)]


def search_max_step(trial, config, scheme="", problem=""):
    """Doubling search from h0, then log-scale bisection of the pass/fail bracket.

    Args:
        trial (callable): h -> SteadyOutcome.
        config (SearchConfig): Search settings.

    Returns:
        StepSizeSearchResult: Search outcome with the full trace.
    """
    trace = []

    def passes(h):
        outcome = trial(h)
        trace.append((h, outcome.status))
        logger.info(f"{scheme} on {problem}: h={h:.6g} -> {outcome.status.value} after {outcome.steps} steps")
        return outcome.converged

    h_pass, h_fail = None, None
    h = min(config.h0, config.h_cap)
    if passes(h):
        h_pass = h
        while h_pass < config.h_cap:
            h_next = min(h_pass * config.growth, config.h_cap)
            if not passes(h_next):
                h_fail = h_next
                break
            h_pass = h_next
        if h_fail is None:
            return StepSizeSearchResult(scheme, problem, h_pass, (h_pass, None), trace, config, capped=True)
    else:
        h_fail = h
        h_try = h / config.growth
        while h_try >= config.min_h:
            if passes(h_try):
                h_pass = h_try
                break
            h_fail = h_try
            h_try /= config.growth
        if h_pass is None:
            logger.warning(f"{scheme} on {problem}: no converging step down to {config.min_h:g}")
            return StepSizeSearchResult(scheme, problem, None, (None, h_fail), trace, config)

    while h_fail / h_pass > 1.0 + config.bracket_tol:
        mid = math.sqrt(h_pass * h_fail)
        if passes(mid):
            h_pass = mid
        else:
            h_fail = mid
    return StepSizeSearchResult(scheme, problem, h_pass, (h_pass, h_fail), trace, config)


def max_stable_step(problem, tb, reference, config=None):
    """Largest h for which the semi-IMEX run reaches `reference` within the step budget."""
    config = config or SearchConfig.from_config()

    def trial(h):
        return integrate_until_steady(problem, tb, h, reference, tol=config.tol, max_steps=config.max_steps)

    return search_max_step(trial, config, scheme=tb.name, problem=problem.describe())


def max_stable_step_splitting(splitting, reference, config=None):
    """Same search for the classical IMEX baseline on a linear splitting."""
    config = config or SearchConfig.from_config()

    def trial(h):
        return integrate_splitting_until_steady(splitting, h, reference, tol=config.tol,
                                                max_steps=config.max_steps)

    return search_max_step(trial, config, scheme=BASELINE_COLUMN, problem=splitting.name)


def stability_sweep(kind, values=None, schemes=None, config=None, harness=None, base_params=None,
                    include_baseline=True):
    """Run max_stable_step for every parameter value and scheme.

    Args:
        kind (str): 'diffusion' or 'cahn-hilliard'.
        values (list[float], optional): Values of the family's sweep parameter.
        schemes (list, optional): Catalog names or ButcherPair objects; SWEEP_SCHEMES by default.
        config (SearchConfig, optional): Search settings.
        harness (ExperimentHarness, optional): Steady-state cache and trial pool.
        base_params (dict, optional): Fixed problem parameters.
        include_baseline (bool): Append the classical IMEX column.

    Returns:
        StepSizeTable: One row per value, one column per scheme.
    """
    settings = ConfigLoader().get_experiment_config().get(kind)
    if not settings or not settings["sweep_param"]:
        logger.error(f"No step-size sweep defined for '{kind}'")
        raise ConfigurationError(f"no step-size sweep for problem '{kind}'")
    param_name = settings["sweep_param"]
    values = [float(v) for v in (values or settings["sweep_values"])]
    if schemes is None:
        schemes = ConfigLoader().get_config()["SWEEP_SCHEMES"]
    tableaus = [make_builtin(s) if isinstance(s, str) else s for s in schemes]
    config = config or SearchConfig.from_config()

    bundles = {}
    for value in values:
        params = dict(settings["step_size_params"])
        params.update(base_params or {})
        params[param_name] = value
        bundle = build_problem(kind, params)
        reference = harness.steady_state(bundle) if harness else bundle.steady
        bundles[value] = (bundle, reference)

    columns = [tb.name for tb in tableaus] + ([BASELINE_COLUMN] if include_baseline else [])
    tasks = [(value, tb) for value in values for tb in tableaus]
    if include_baseline:
        tasks += [(value, None) for value in values]

    def run_task(task):
        value, tb = task
        bundle, reference = bundles[value]
        if tb is None:
            return value, BASELINE_COLUMN, max_stable_step_splitting(bundle.splitting, reference, config)
        return value, tb.name, max_stable_step(bundle.problem, tb, reference, config)

    outcomes = harness.map(run_task, tasks) if harness else [run_task(t) for t in tasks]
    table = StepSizeTable(kind, param_name, values, columns)
    for value, column, result in outcomes:
        table.entries[(value, column)] = result
    return table


class StepSizeRunner(BaseRunner):
    """Runs one search (with --scheme) or the full sweep of a problem family."""
    def run(self, options):
        kind = options.get("problem")
        if not kind:
            raise ConfigurationError("step-size needs --problem")
        settings = self.experiment_settings(kind)
        param_name = settings["sweep_param"]
        if not param_name:
            raise ConfigurationError(f"no step-size search for problem '{kind}'")
        config = SearchConfig.from_config(
            h0=parse_fraction(options["h0"]) if options.get("h0") else None,
            h_cap=parse_fraction(options["h_cap"]) if options.get("h_cap") else None,
            max_steps=int(options["max_steps"]) if options.get("max_steps") else None,
        )
        base = {k: v for k, v in self.problem_overrides(options).items() if k != param_name}
        if options.get("params"):
            values = parse_number_list(options["params"])
        elif options.get(param_name) is not None:
            values = [parse_fraction(options[param_name])]
        else:
            values = None

        if options.get("scheme") == BASELINE_COLUMN and not options.get("scheme_file"):
            return stability_sweep(kind, values, schemes=[], config=config, harness=self.harness,
                                   base_params=base)
        if options.get("scheme") or options.get("scheme_file"):
            tb = self.resolve_scheme(options)
            return stability_sweep(kind, values, schemes=[tb], config=config, harness=self.harness,
                                   base_params=base, include_baseline=False)
        return stability_sweep(kind, values, config=config, harness=self.harness, base_params=base)
