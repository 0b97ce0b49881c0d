import math

import numpy as np
import pytest

from src.integrator.splitting import (
    DELTA, GAMMA, LinearSplitting, imex_linear_splitting_step, integrate_splitting,
    integrate_splitting_until_steady,
)
from src.integrator.driver import SteadyStatus
from src.problems.diffusion import diffusion_splitting


def test_baseline_coefficients():
    assert GAMMA == pytest.approx(1.0 - 1.0 / math.sqrt(2.0))
    assert DELTA == pytest.approx(1.0 - 1.0 / (2.0 * GAMMA))
    assert (1.0 - DELTA) * GAMMA == pytest.approx(0.5)


@pytest.mark.parametrize("implicit", [True, False])
def test_second_order_on_a_linear_decay(implicit):
    decay = np.array([[-1.0]]) if implicit else np.zeros((1, 1))

    def n_explicit(t, u):
        return np.zeros(1) if implicit else -u

    splitting = LinearSplitting(L=decay, n_explicit=n_explicit, u0=[1.0])
    errors = [abs(integrate_splitting(splitting, 1.0, h).state[0] - math.exp(-1.0)) for h in (1 / 16, 1 / 32, 1 / 64)]
    rate = math.log2(errors[-2] / errors[-1])
    assert rate == pytest.approx(2.0, abs=0.2)


def test_two_solves_per_step():
    splitting = LinearSplitting(L=np.array([[-1.0]]), n_explicit=lambda t, u: np.sin(u), u0=[0.5])
    result = integrate_splitting(splitting, 1.0, 0.125)
    assert result.linear_solves == 2 * result.steps


def test_single_step_function_matches_the_integrator():
    L = np.array([[-2.0, 1.0], [0.5, -3.0]])

    def n_explicit(t, u):
        return np.cos(t) * u ** 2

    u0 = np.array([0.3, -0.2])
    splitting = LinearSplitting(L=L, n_explicit=n_explicit, u0=u0)
    stepped = imex_linear_splitting_step(L, n_explicit, (), 0.0, u0, 0.1)
    np.testing.assert_array_equal(stepped, integrate_splitting(splitting, 0.1, 0.1).state)


def test_constraint_rows_hold_after_each_step():
    splitting = diffusion_splitting(kappa=1.0, n=33)
    result = integrate_splitting(splitting, 0.5, 0.05)
    u = result.state
    assert abs(u[-1] - u[0]) < 1e-9 * max(np.max(np.abs(u)), 1.0)
    assert result.max_constraint_residual < 1e-9


def test_steady_run_of_the_baseline():
    splitting = LinearSplitting(L=np.array([[-1.0]]), n_explicit=lambda t, u: np.array([2.0]), u0=[0.0])
    outcome = integrate_splitting_until_steady(splitting, 0.25, np.array([2.0]), tol=1e-4, max_steps=500)
    assert outcome.status is SteadyStatus.CONVERGED
