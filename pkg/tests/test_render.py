import math

import pytest

from src.experiments.convergence import ConvergenceReport, ConvergenceRow
from src.experiments.render import TableRenderer, parse_csv_report, render_table
from src.experiments.stability_report import stability_report
from src.experiments.step_size import SearchConfig, StepSizeSearchResult, StepSizeTable
from src.utils.errors import ConfigurationError


def sample_report(**overrides):
    values = dict(
        scheme="trapezoid",
        problem="diffusion(kappa=1.0)",
        reference="third_order_5stage_v2 h=0.00195312",
        t_end=1.0,
        rows=[
            ConvergenceRow(1 / 16, 9.49e-5),
            ConvergenceRow(1 / 32, 2.37e-5, 2.0014),
            ConvergenceRow(1 / 64, math.inf, None, divergent=True),
        ],
    )
    values.update(overrides)
    return ConvergenceReport(**values)


def test_empty_report_has_header_only():
    text = render_table(sample_report(rows=[]))
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    assert lines == ["h,E,rate"]


def test_csv_formatting():
    lines = render_table(sample_report()).splitlines()
    assert "# scheme: trapezoid" in lines
    assert lines[-3] == "1/16,9.49e-05,"
    assert lines[-2] == "1/32,2.37e-05,2.00"
    assert lines[-1] == "1/64,divergent,"


def test_markdown_table():
    text = render_table(sample_report(), "md")
    assert "| h | E | rate |" in text
    assert "| 1/16 | 9.49e-05 |  |" in text


def test_markdown_alias():
    assert TableRenderer("markdown").fmt == "md"


def test_unknown_format():
    with pytest.raises(ConfigurationError):
        render_table(sample_report(), "json")


def test_lossless_csv_round_trips():
    report = sample_report(reference_drift=3.0517578125e-07, t_end=0.5)
    parsed = parse_csv_report(render_table(report, "csv", lossless=True))
    assert parsed == report


def test_rounded_csv_round_trips_to_printed_digits():
    parsed = parse_csv_report(render_table(sample_report()))
    assert parsed.rows[0].h == 1 / 16
    assert parsed.rows[1].error == 2.37e-5
    assert parsed.rows[1].rate == 2.0
    assert parsed.rows[2].divergent


def test_parse_rejects_foreign_tables():
    with pytest.raises(ConfigurationError):
        parse_csv_report("a,b,c\n1,2,3\n")


def test_side_by_side_comparison():
    other = sample_report(scheme="fb_euler")
    text = render_table([sample_report(), other])
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    assert lines[0] == "Method,E(1/16),rate,E(1/32),rate,E(1/64),rate"
    assert lines[1].startswith("trapezoid,9.49e-05,,2.37e-05,2.00,divergent")
    assert lines[2].startswith("fb_euler,")


def test_comparison_needs_matching_steps():
    other = sample_report(rows=[ConvergenceRow(1 / 8, 1e-3)])
    with pytest.raises(ConfigurationError):
        render_table([sample_report(), other])


def test_step_size_table_labels():
    config = SearchConfig.from_config()
    table = StepSizeTable("diffusion", "kappa", [1.0], ["fb_euler", "trapezoid", "imex"])
    table.entries[(1.0, "fb_euler")] = StepSizeSearchResult("fb_euler", "d", config.h_cap, (config.h_cap, None),
                                                            [], config, capped=True)
    table.entries[(1.0, "trapezoid")] = StepSizeSearchResult("trapezoid", "d", 4.5912, (4.5912, 4.7), [], config)
    table.entries[(1.0, "imex")] = StepSizeSearchResult("imex", "d", None, (None, 1e-9), [], config)
    lines = [line for line in render_table(table).splitlines() if not line.startswith("#")]
    assert lines == ["kappa,fb_euler,trapezoid,imex", "1,>1e+04,4.59,<1e-09"]


def test_stability_rendering(catalog):
    text = render_table(stability_report(catalog["fb_euler"], samples=[-10.0, 1.0]))
    assert "# classification: L_stable_evidence" in text
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert rows[0] == "z,|R(z)|,|R_printed(z)|"
    assert rows[1] == "-10+0j,9.09e-02,9.09e-02"
    assert rows[2].endswith(",pole,")
