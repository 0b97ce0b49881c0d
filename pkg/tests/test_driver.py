import math

import numpy as np
import pytest

from src.integrator.driver import (
    SteadyStatus, integrate, integrate_until_steady, step_count, write_trajectory_csv,
)
from src.integrator.problem import SemiLinearProblem
from src.problems.scalar import scalar_exact
from src.utils.errors import ConfigurationError, ParameterError, StepError


def linear_problem(rate, u0=1.0, forcing=0.0):
    return SemiLinearProblem(dim=1, f=lambda t, u: np.array([forcing]),
                             assemble_G=lambda t, u: np.array([[rate]]), u0=[u0], name="linear")


def test_step_count():
    assert step_count(0.0, 1.0, 1 / 16) == 16
    assert step_count(0.0, 0.5, 2.0 ** -10) == 512


def test_partial_final_step_is_refused():
    with pytest.raises(ConfigurationError):
        step_count(0.0, 1.0, 0.3)


def test_nonpositive_step_is_refused():
    with pytest.raises(ConfigurationError):
        step_count(0.0, 1.0, 0.0)


def test_integration_counts(catalog, scalar):
    result = integrate(scalar, catalog["fb_euler"], 1.0, 0.25)
    assert result.steps == 4
    assert result.linear_solves == 4
    assert result.t == pytest.approx(1.0)
    assert result.trajectory is None


def test_trajectory_is_recorded(catalog, scalar, tmp_path):
    result = integrate(scalar, catalog["trapezoid"], 0.5, 1 / 8, keep_trajectory=True)
    assert len(result.trajectory) == result.steps + 1
    assert result.trajectory[0][0] == 0.0
    np.testing.assert_array_equal(result.trajectory[-1][1], result.state)
    path = tmp_path / "trajectory.csv"
    write_trajectory_csv(result, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "t,u_0"
    assert len(lines) == result.steps + 2
    assert float(lines[-1].split(",")[1]) == result.state[0]


def test_trajectory_csv_needs_a_trajectory(catalog, scalar, tmp_path):
    result = integrate(scalar, catalog["fb_euler"], 0.5, 1 / 4)
    with pytest.raises(ConfigurationError):
        write_trajectory_csv(result, str(tmp_path / "t.csv"))


def observed_rates(problem, tb, t_end, steps, exact):
    errors = [np.max(np.abs(integrate(problem, tb, t_end, h).state - exact)) / np.max(np.abs(exact))
              for h in steps]
    return [math.log2(coarse / fine) for coarse, fine in zip(errors, errors[1:])]


@pytest.mark.parametrize("name", ["midpoint", "trapezoid", "l_stable_second_order", "imex_embedded_second_order"])
def test_scalar_second_order_rates(catalog, scalar, name):
    steps = [2.0 ** -k for k in range(10, 15)]
    rates = observed_rates(scalar, catalog[name], 0.5, steps, np.array([scalar_exact(0.5)]))
    assert all(1.8 <= rate <= 2.4 for rate in rates)


@pytest.mark.parametrize("name", ["third_order_4stage", "third_order_5stage_v1", "third_order_5stage_v2"])
def test_scalar_third_order_rates(catalog, scalar, name):
    steps = [2.0 ** -k for k in range(7, 11)]
    rates = observed_rates(scalar, catalog[name], 0.5, steps, np.array([scalar_exact(0.5)]))
    assert all(2.7 <= rate <= 3.3 for rate in rates)


def test_forward_backward_euler_is_second_order_on_the_scalar_problem(catalog, scalar):
    # the h^2 term of the local error cancels for this right-hand side
    steps = [2.0 ** -k for k in range(8, 11)]
    rates = observed_rates(scalar, catalog["fb_euler"], 0.5, steps, np.array([scalar_exact(0.5)]))
    assert rates[-1] == pytest.approx(2.0, abs=0.2)


def test_forward_backward_euler_is_first_order_on_linear_decay(catalog):
    problem = linear_problem(-1.0)
    rates = observed_rates(problem, catalog["fb_euler"], 1.0, [1 / 32, 1 / 64, 1 / 128], np.array([math.exp(-1.0)]))
    assert all(rate == pytest.approx(1.0, abs=0.1) for rate in rates)


@pytest.mark.slow
def test_midpoint_reaches_roundoff_on_the_scalar_problem(catalog, scalar):
    exact = scalar_exact(0.5)
    state = integrate(scalar, catalog["midpoint"], 0.5, 2.0 ** -17).state
    assert abs(state[0] - exact) / abs(exact) < 1e-11


def test_failure_reports_the_step(catalog):
    problem = SemiLinearProblem(dim=1, f=lambda t, u: np.array([np.inf]) if t > 0.2 else np.zeros(1),
                                assemble_G=lambda t, u: np.array([[-1.0]]), u0=[1.0])
    with pytest.raises(StepError) as excinfo:
        integrate(problem, catalog["fb_euler"], 1.0, 0.25)
    assert excinfo.value.step == 2


def test_steady_run_converges(catalog):
    problem = linear_problem(-1.0, u0=0.0, forcing=2.0)
    outcome = integrate_until_steady(problem, catalog["third_order_5stage_v1"], 0.5, np.array([2.0]),
                                     tol=1e-3, max_steps=200)
    assert outcome.status is SteadyStatus.CONVERGED
    assert outcome.converged
    assert outcome.relative_gap < 1e-3
    assert outcome.t_reached == pytest.approx(outcome.steps * 0.5)


def test_steady_run_at_the_reference_stops_immediately(catalog):
    problem = linear_problem(-1.0, u0=2.0, forcing=2.0)
    outcome = integrate_until_steady(problem, catalog["fb_euler"], 0.1, np.array([2.0]), tol=1e-6)
    assert outcome.converged and outcome.steps == 0


def test_steady_run_detects_blow_up(catalog):
    problem = SemiLinearProblem(dim=1, f=lambda t, u: 10.0 * u,
                                assemble_G=lambda t, u: np.zeros((1, 1)), u0=[1.0])
    outcome = integrate_until_steady(problem, catalog["fb_euler"], 1.0, np.array([1.0e-3]), max_steps=100)
    assert outcome.status is SteadyStatus.DIVERGED
    assert outcome.steps < 100


def test_steady_run_times_out(catalog):
    problem = linear_problem(-1.0, u0=1.0)
    outcome = integrate_until_steady(problem, catalog["fb_euler"], 0.1, np.array([5.0]), max_steps=10)
    assert outcome.status is SteadyStatus.TIMED_OUT
    assert outcome.steps == 10


def test_stage_failure_counts_as_divergence(catalog):
    problem = linear_problem(2.0)
    outcome = integrate_until_steady(problem, catalog["fb_euler"], 0.5, np.array([3.0]), max_steps=10)
    assert outcome.status is SteadyStatus.DIVERGED
    assert "singular" in outcome.detail


def test_zero_reference_is_rejected(catalog):
    with pytest.raises(ParameterError):
        integrate_until_steady(linear_problem(-1.0), catalog["fb_euler"], 0.1, np.zeros(1))
