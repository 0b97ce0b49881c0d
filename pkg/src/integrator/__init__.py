from .problem import ConstraintRow, SemiLinearProblem
from .linear_solver import LinearSolver, DenseLUSolver, solve_linear
from .stepper import StepWorkspace, step, step_with_workspace
from .driver import (
    IntegrationResult, SteadyOutcome, SteadyStatus,
    integrate, integrate_until_steady, write_trajectory_csv,
)
from .splitting import LinearSplitting, imex_linear_splitting_step, integrate_splitting, integrate_splitting_until_steady
