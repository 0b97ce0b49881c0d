import math

import numpy as np
import pytest

from src.integrator.problem import ConstraintRow, SemiLinearProblem
from src.integrator.stepper import PLAN_CACHE_SIZE, _stage_plan, step, step_with_workspace
from src.tableau.catalog import make_alpha_second_order
from src.tableau.conditions import check_alpha_condition
from src.tableau.stability import eval_stability
from src.utils.errors import DivergenceError, ParameterError, SingularMatrixError

ALPHA_SCHEMES = ["fb_euler", "trapezoid", "l_stable_second_order",
                 "third_order_5stage_v1", "third_order_5stage_v2"]


@pytest.mark.parametrize("name", ALPHA_SCHEMES)
def test_weighted_update_equals_the_alpha_shortcut(catalog, random_problem_factory, name):
    tb = catalog[name]
    alpha = check_alpha_condition(tb)
    rng = np.random.default_rng(11)
    for trial in range(100):
        problem = random_problem_factory(seed=trial)
        t = rng.uniform(0.0, 2.0)
        h = rng.uniform(0.01, 0.5)
        u = problem.u0
        u_next, ws = step_with_workspace(problem, tb, t, u, h, alpha_update=False)
        shortcut = ws.stage_states[-1] / alpha + (1.0 - 1.0 / alpha) * u
        np.testing.assert_allclose(u_next, shortcut, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("name", ALPHA_SCHEMES)
def test_both_update_forms_agree_without_constraints(catalog, random_problem, name):
    tb = catalog[name]
    weighted, _ = step_with_workspace(random_problem, tb, 0.3, random_problem.u0, 0.1, alpha_update=False)
    shortcut, ws = step_with_workspace(random_problem, tb, 0.3, random_problem.u0, 0.1)
    assert ws.alpha == pytest.approx(check_alpha_condition(tb))
    np.testing.assert_allclose(weighted, shortcut, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("name,solves", [("fb_euler", 1), ("midpoint", 1), ("third_order_4stage", 3),
                                         ("third_order_5stage_v1", 3), ("third_order_5stage_v2", 4)])
def test_solves_per_step(catalog, random_problem, name, solves):
    tb = catalog[name]
    _, ws = step_with_workspace(random_problem, tb, 0.0, random_problem.u0, 0.05)
    assert ws.linear_solves == solves
    assert sorted(ws.diagonal_matrices) == tb.implicit_stages()
    assert len(ws.stage_states) == tb.s


def test_non_alpha_scheme_uses_the_weighted_sum(catalog, random_problem):
    _, ws = step_with_workspace(random_problem, catalog["midpoint"], 0.0, random_problem.u0, 0.05)
    assert ws.alpha is None


def test_linear_scalar_step_matches_the_stability_function(catalog):
    lam, h = -3.0, 0.2
    problem = SemiLinearProblem(dim=1, f=lambda t, u: np.zeros(1),
                                assemble_G=lambda t, u: np.array([[lam]]), u0=[1.0])
    for name in ("midpoint", "third_order_4stage", "third_order_5stage_v2"):
        u_next = step(problem, catalog[name], 0.0, problem.u0, h)
        assert u_next[0] == pytest.approx(eval_stability(catalog[name], lam * h).real, rel=1e-12)


def test_constraint_rows_hold_on_the_new_state(catalog, small_diffusion):
    n = small_diffusion.dim
    for name in ("trapezoid", "third_order_5stage_v1", "third_order_5stage_v2"):
        u = np.cos(np.linspace(-np.pi, np.pi, n)) * 0.3
        u_next, ws = step_with_workspace(small_diffusion, catalog[name], 0.0, u, 0.1)
        assert ws.max_constraint_residual() < 1e-9
        assert abs(u_next[n - 1] - u_next[0]) < 1e-9 * max(np.max(np.abs(u_next)), 1.0)


def test_constraint_residuals_are_recorded_per_stage(catalog, small_diffusion):
    _, ws = step_with_workspace(small_diffusion, catalog["third_order_5stage_v2"], 0.0,
                                small_diffusion.u0, 0.1)
    stages = sorted({stage for stage, _, _ in ws.constraint_residuals})
    assert stages == [i + 1 for i in catalog["third_order_5stage_v2"].implicit_stages()]


def test_non_finite_stage_raises_divergence(catalog):
    problem = SemiLinearProblem(dim=1, f=lambda t, u: np.array([np.inf]),
                                assemble_G=lambda t, u: np.array([[-1.0]]), u0=[1.0])
    with pytest.raises(DivergenceError) as excinfo:
        with np.errstate(invalid="ignore", over="ignore"):
            step(problem, catalog["fb_euler"], 0.0, problem.u0, 0.1)
    assert excinfo.value.stage == 2


def test_singular_stage_matrix(catalog):
    problem = SemiLinearProblem(dim=1, f=lambda t, u: np.zeros(1),
                                assemble_G=lambda t, u: np.array([[2.0]]), u0=[1.0])
    with pytest.raises(SingularMatrixError) as excinfo:
        step(problem, catalog["fb_euler"], 0.0, problem.u0, 0.5)
    assert excinfo.value.stage == 2


def test_constraint_rows_must_be_distinct():
    row = ConstraintRow(0, lambda t, u: (np.array([1.0, 0.0]), 0.0))
    with pytest.raises(ParameterError):
        SemiLinearProblem(dim=2, f=lambda t, u: u, assemble_G=lambda t, u: np.eye(2),
                          u0=[0.0, 0.0], constraints=(row, row))


def test_reduced_scheme_is_two_solves_and_an_extrapolation(catalog, scalar):
    t, u, h = 0.0, 1.0, 0.1
    # K2 and K3 written out by hand for u' = cos(t) u + (cos(t) - u) u
    k1 = u
    k2 = (u + 0.5 * h * math.cos(t) * k1) / (1.0 - 0.5 * h * (math.cos(t + h / 2) - k1))
    k3 = (u + 0.5 * h * math.cos(t + h / 2) * k2) / (1.0 - 0.5 * h * (math.cos(t + h / 2) - k2))
    u_next, ws = step_with_workspace(scalar, catalog["trapezoid"], t, np.array([u]), h)
    assert ws.linear_solves == 2
    assert ws.stage_states[1][0] == pytest.approx(k2, rel=1e-13)
    assert ws.stage_states[2][0] == pytest.approx(k3, rel=1e-13)
    assert u_next[0] == pytest.approx(2.0 * k3 - u, rel=1e-13)


def test_stage_plan_cache_stays_bounded(random_problem):
    tb = make_alpha_second_order(0.5, 1.0, 0.0)
    assert _stage_plan(tb) is _stage_plan(tb)
    for k in range(2 * PLAN_CACHE_SIZE):
        pair = make_alpha_second_order(0.5 + 0.01 * k, 0.3, 0.1)
        step(random_problem, pair, 0.0, random_problem.u0, 0.05)
    assert _stage_plan.cache_info().currsize <= PLAN_CACHE_SIZE
