import numpy as np
import pytest

from src.tableau.catalog import catalog_names, make_builtin
from src.tableau.scheme_file import parse_scheme_text, read_scheme_file, write_scheme_file
from src.utils.errors import ConfigurationError, TableauError

FB_TEXT = """
# forward-backward Euler
name = custom_fb
stages = 2
declared_order = 1
explicit_a = 0, 0, 1, 0
explicit_c = 0, 1
explicit_b = 1, 0
implicit_a = 0, 0, 0, 1   # lower triangular
implicit_c = 0, 1
implicit_b = 0, 0, 1
"""

COEFFICIENTS = ("explicit_a", "explicit_c", "explicit_b", "implicit_a", "implicit_c", "implicit_b")


def test_parse_minimal_scheme():
    tb = parse_scheme_text(FB_TEXT)
    assert tb.name == "custom_fb"
    assert tb.s == 2
    assert tb.linear_solve_count() == 1
    np.testing.assert_array_equal(tb.implicit_b, [0.0, 0.0, 1.0])


@pytest.mark.parametrize("name", catalog_names())
def test_written_catalog_schemes_read_back_exactly(tmp_path, name):
    tb = make_builtin(name)
    path = tmp_path / f"{name}.scheme"
    write_scheme_file(tb, str(path))
    loaded = read_scheme_file(str(path))
    assert loaded.name == tb.name
    assert loaded.declared_order == tb.declared_order
    for attr in COEFFICIENTS:
        np.testing.assert_array_equal(getattr(loaded, attr), getattr(tb, attr))


def test_missing_key():
    text = FB_TEXT.replace("declared_order = 1\n", "")
    with pytest.raises(ConfigurationError, match="declared_order"):
        parse_scheme_text(text)


def test_unknown_key():
    with pytest.raises(ConfigurationError, match="unknown key"):
        parse_scheme_text(FB_TEXT + "gamma = 0.3\n")


def test_wrong_value_count():
    with pytest.raises(ConfigurationError, match="implicit_b"):
        parse_scheme_text(FB_TEXT.replace("implicit_b = 0, 0, 1", "implicit_b = 0, 1"))


def test_bad_number():
    with pytest.raises(ConfigurationError):
        parse_scheme_text(FB_TEXT.replace("explicit_c = 0, 1", "explicit_c = 0, one"))


def test_invalid_tableau_is_rejected_by_validation():
    with pytest.raises(TableauError):
        parse_scheme_text(FB_TEXT.replace("explicit_c = 0, 1", "explicit_c = 0, 0.5"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        read_scheme_file(str(tmp_path / "absent.scheme"))
