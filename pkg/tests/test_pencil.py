from fractions import Fraction

import pytest

from core.errors import ZeroFormError
from controllers.binres_controller import pencil_s
from controllers.pencil_controller import (PencilController, build_pencil, detect_pencil,
                                           pencil_delta_mod, pencil_rate)
from controllers.predict_controller import predict_decay
from models.binary_form import BinaryForm
from models.corpus import get_phase


@pytest.mark.parametrize("phi1, phi2, d, s, r, delta_mod", [
    ((1, 0, 0), (0, 0, 1), 2, 0, Fraction(1, 2), Fraction(1)),
    ((0, 1, 0, 0), (0, 0, 1, 0), 3, 1, Fraction(1, 3), Fraction(3, 2)),
    ((1, 0, 0, 0), (0, 1, 0, 0), 3, 2, Fraction(1, 4), Fraction(2)),
    ((0, 1, 0), (0, 1, 0), 2, 1, Fraction(1, 2), Fraction(1)),
])
def test_pencil_rates(phi1, phi2, d, s, r, delta_mod):
    pencil = build_pencil(BinaryForm.from_list(phi1), BinaryForm.from_list(phi2))
    prediction = pencil_rate(pencil)
    assert (pencil.d, pencil.s) == (d, s)
    assert prediction.r == r
    assert prediction.p == 1
    assert pencil_delta_mod(pencil) == delta_mod
    assert prediction.extra["delta_mod"] == delta_mod
    assert prediction.r == 1 / (2 * delta_mod)


@pytest.mark.parametrize("matrix", [
    [[1, 1], [0, 1]],
    [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]],
    [[2, -1], [1, 3]],
])
def test_s_is_invariant_under_z_substitution(matrix):
    phi1 = BinaryForm.from_list([1, 0, 0, 0])
    phi2 = BinaryForm.from_list([0, 1, 0, 0])
    s, _ = pencil_s(phi1, phi2)
    assert pencil_s(phi1.substitute(matrix), phi2.substitute(matrix))[0] == s


def test_detect_pencil_on_corpus_phase():
    pencil = detect_pencil(get_phase("pencil_d3"))
    assert pencil is not None
    assert (pencil.d, pencil.s) == (3, 1)
    assert pencil.synthesize() == get_phase("pencil_d3")


def test_detect_pencil_rejects_nonlinear_phases(s0):
    assert detect_pencil(s0) is None


def test_degenerate_pencil_is_rejected():
    with pytest.raises(ZeroFormError):
        build_pencil(BinaryForm(2), BinaryForm.from_list([1, 0, 0]))


def test_controller_output():
    result = PencilController().analyze(BinaryForm.from_list([0, 1, 0, 0]), BinaryForm.from_list([0, 0, 1, 0]))
    assert result["success"]
    assert result["r"] == "1/3"
    assert result["delta_mod"] == "3/2"
    assert {entry["rate"] for entry in result["local_rates"]} == {"1/3"}


def test_controller_reports_degree_mismatch():
    result = PencilController().analyze(BinaryForm.from_list([1, 0]), BinaryForm.from_list([1, 0, 0]))
    assert not result["success"]


@pytest.mark.parametrize("phi1, phi2", [
    ((1, 0, 0), (0, 0, 1)),
    ((0, 1, 0, 0), (0, 0, 1, 0)),
    ((1, 0, 0, 0, 0), (0, 0, 0, 0, 1)),
])
def test_pencil_lower_bound_follows_phase_degree(phi1, phi2):
    pencil = build_pencil(BinaryForm.from_list(phi1), BinaryForm.from_list(phi2))
    phase = pencil.synthesize()
    assert pencil_rate(pencil).lower_bound_r == Fraction(phase.n_x + phase.n_z, 2 * phase.degree)
    assert pencil_rate(pencil).lower_bound_r == Fraction(4, 2 * (pencil.d + 1))


def test_pencil_lower_bound_matches_prediction():
    phase = get_phase("pencil_d3")
    assert pencil_rate(detect_pencil(phase)).lower_bound_r == predict_decay(phase).lower_bound_r
