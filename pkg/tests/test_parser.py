from fractions import Fraction

import pytest

from core.errors import DegreeError, PhaseParseError, PhaseSpaceError
from models.binary_form import BinaryForm
from models.parser import load_phase, parse_binary_form, parse_phase, phase_from_json, save_phase
from models.poly import MultiIndex


def test_parse_infers_dimensions():
    phase = parse_phase("x1^2*z1 + 2*x1*z2^2 - 1/3*x2*z1*z2")
    assert (phase.n_x, phase.n_z, phase.degree) == (2, 2, 3)
    assert phase.terms[MultiIndex((1, 0), (0, 2))] == 2
    assert phase.terms[MultiIndex((0, 1), (1, 1))] == Fraction(-1, 3)


def test_parse_accepts_decimals_exactly():
    phase = parse_phase("0.5*x1*z1")
    assert phase.terms[MultiIndex((1,), (1,))] == Fraction(1, 2)


def test_explicit_dimensions_pad_variables():
    phase = parse_phase("x1*z1", n_x=2, n_z=3)
    assert (phase.n_x, phase.n_z) == (2, 3)


@pytest.mark.parametrize("text, line, column", [
    ("x1*z1 + $", 1, 9),
    ("x1*z1\n+ x1 @ z1", 2, 6),
    ("x*z1", 1, 1),
])
def test_errors_carry_position(text, line, column):
    with pytest.raises(PhaseParseError) as info:
        parse_phase(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("text", ["", "   ", "(x1*z1", "x1*z1)", "x1*z1 - x1*z1"])
def test_invalid_expressions(text):
    with pytest.raises(PhaseParseError):
        parse_phase(text)


def test_out_of_range_index_is_rejected():
    with pytest.raises(PhaseParseError):
        parse_phase("x3*z1", n_x=2, n_z=1)


def test_non_homogeneous_phase():
    with pytest.raises(DegreeError):
        parse_phase("x1*z1 + x1^2*z1")


def test_pure_monomial_is_rejected():
    with pytest.raises(PhaseSpaceError):
        parse_phase("x1^2 + x1*z1")


def test_binary_form_from_coefficients_and_expression():
    expected = BinaryForm.from_list([1, 0, -1])
    assert parse_binary_form("1, 0, -1") == expected
    assert parse_binary_form("z1^2 - z2^2") == expected
    assert parse_binary_form("u^2 - v^2") == expected


@pytest.mark.parametrize("text", ["", "z1*z3", "0*z1"])
def test_invalid_binary_forms(text):
    with pytest.raises(PhaseParseError):
        parse_binary_form(text)


def test_json_error_reports_line():
    with pytest.raises(PhaseParseError) as info:
        phase_from_json('{\n  "nx": 1,\n  "nz" 1\n}')
    assert info.value.line == 3


def test_json_missing_field():
    with pytest.raises(PhaseParseError):
        phase_from_json({"nx": 1})


def test_save_and_load(tmp_path, s0):
    path = save_phase(s0, tmp_path / "s0.json")
    assert load_phase(path) == s0
    text_file = tmp_path / "cubic.txt"
    text_file.write_text("x1^2*z1 + x1*z1^2\n", encoding="utf-8")
    assert load_phase(text_file).degree == 3


def test_missing_file(tmp_path):
    with pytest.raises(PhaseParseError):
        load_phase(tmp_path / "nope.json")
