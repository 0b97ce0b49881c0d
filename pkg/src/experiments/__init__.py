from .harness import ExperimentHarness
from .convergence import ConvergenceReport, ConvergenceRow, convergence_study
from .step_size import (
    SearchConfig, StepSizeSearchResult, StepSizeTable,
    max_stable_step, max_stable_step_splitting, stability_sweep,
)
from .stability_report import StabilityReport, stability_report
from .render import render_table, parse_csv_report
