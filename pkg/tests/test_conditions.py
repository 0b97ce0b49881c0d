import pytest

from src.tableau.catalog import make_alpha_second_order
from src.tableau.conditions import check_alpha_condition, check_order_conditions
from src.utils.errors import ParameterError

SECOND_ORDER_OR_BETTER = [
    "midpoint",
    "trapezoid",
    "l_stable_second_order",
    "imex_embedded_second_order",
    "third_order_4stage",
    "third_order_5stage_v1",
    "third_order_5stage_v2",
]


@pytest.mark.parametrize("name", SECOND_ORDER_OR_BETTER)
def test_second_order_conditions_hold(catalog, name):
    report = check_order_conditions(catalog[name], 2)
    assert report.passed, [(r.condition_id, r.residual) for r in report.results if not r.passed]
    assert len(report.results) == 8


def test_forward_backward_euler_is_first_order_only(catalog):
    assert check_order_conditions(catalog["fb_euler"], 1).passed
    report = check_order_conditions(catalog["fb_euler"], 2)
    assert not report.passed
    assert report.worst_residual() == pytest.approx(0.5)


def test_condition_report_carries_the_bounds_note(catalog):
    report = check_order_conditions(catalog["trapezoid"], 1)
    assert report.notes and "b~" in report.notes[0]


def test_only_orders_one_and_two_are_checked(catalog):
    with pytest.raises(ParameterError):
        check_order_conditions(catalog["trapezoid"], 3)


@pytest.mark.parametrize("name,alpha", [
    ("fb_euler", 1.0),
    ("trapezoid", 0.5),
    ("l_stable_second_order", 1.0),
    ("third_order_5stage_v1", 1.0),
    ("third_order_5stage_v2", 1.0),
])
def test_alpha_condition_values(catalog, name, alpha):
    assert check_alpha_condition(catalog[name]) == pytest.approx(alpha, abs=1e-12)


@pytest.mark.parametrize("name", ["midpoint", "third_order_4stage", "imex_embedded_second_order"])
def test_alpha_condition_absent(catalog, name):
    assert check_alpha_condition(catalog[name]) is None


@pytest.mark.parametrize("alpha,b4,a21", [(0.7, 0.3, 0.2), (1.5, 0.1, 0.9), (0.5, 1.0, 0.0)])
def test_alpha_family_is_second_order_with_its_alpha(alpha, b4, a21):
    tb = make_alpha_second_order(alpha, b4, a21)
    assert check_order_conditions(tb, 2).passed
    assert check_alpha_condition(tb) == pytest.approx(alpha, abs=1e-12)


def test_alpha_condition_needs_vanishing_last_weights(catalog):
    tb = catalog["midpoint"]
    assert tb.explicit_b[tb.s - 1] != 0.0
    assert check_alpha_condition(tb) is None
