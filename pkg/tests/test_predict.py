from fractions import Fraction

import numpy as np
import pytest

from controllers.predict_controller import (FAILS, HOLDS, PredictController, check_hormander,
                                            check_rank_one, predict_decay, sphere_points, thm_a_hypothesis,
                                            thm_b_check)
from models.corpus import all_phases, get_phase
from models.hessian import mixed_hessian
from models.parser import parse_phase
from models.poly import random_phase


@pytest.mark.parametrize("name, r, p, source", [
    ("thm_a_cubic", Fraction(1, 3), 0, "ThmA/ThmC"),
    ("s0", Fraction(2, 3), 0, "Thm1.4"),
    ("rank_one_m4", Fraction(1, 2), 1, "Thm1.2"),
    ("pencil_d3", Fraction(1, 3), 1, "Prop4.5"),
    ("bilinear", Fraction(1, 2), 0, "Hormander-m2/ThmA/ThmC"),
])
def test_predicted_rates(name, r, p, source):
    prediction = predict_decay(get_phase(name))
    assert prediction.status == "ok"
    assert (prediction.r, prediction.p, prediction.source) == (r, p, source), name


def test_pencil_prediction_carries_delta_mod():
    prediction = predict_decay(get_phase("pencil_d3"))
    assert prediction.extra["delta_mod"] == Fraction(3, 2)


def test_quartic_ties_are_joined():
    prediction = predict_decay(get_phase("hormander_quartic"))
    assert prediction.r == Fraction(1, 4)
    assert prediction.p == 0
    assert prediction.source.split("/") == ["ThmA", "ThmC", "Thm1.1", "Thm1.2"]


def test_rate_never_exceeds_half_of_nz(rng):
    for shape in [(2, 2, 3), (3, 2, 3), (2, 1, 4)]:
        prediction = predict_decay(random_phase(*shape, rng), grid=256)
        if prediction.r is not None:
            assert prediction.r <= Fraction(shape[1], 2), shape


def test_lower_bounds(s0):
    prediction = predict_decay(s0)
    assert prediction.lower_bound_r == Fraction(2, 3)
    assert prediction.lower_bound_r_rank == Fraction(1)
    assert prediction.sharp


def test_adjoint_is_used_when_nx_below_nz():
    phase = parse_phase("x1*z1^2 + x1^2*z1 + x1*z2^2")
    prediction = predict_decay(phase)
    assert prediction.adjoint
    assert prediction.hypotheses[0].condition == "adjoint"


def test_no_theorem_applies_for_direct_sum(direct_sum):
    prediction = predict_decay(direct_sum)
    assert prediction.status == "no_theorem_applies"
    assert prediction.r is None
    assert prediction.lower_bound_r == Fraction(2, 3)
    assert {entry.status for entry in prediction.hypotheses} == {FAILS}


def test_hormander_statuses(s0):
    assert check_hormander(get_phase("hormander_quartic")).status == HOLDS
    assert check_hormander(get_phase("thm_a_cubic")).status == FAILS
    entry = check_hormander(s0)
    assert entry.status == FAILS
    assert entry.method == "exact"
    assert check_hormander(get_phase("bilinear")).status == HOLDS


def test_hormander_finds_axis_witness():
    entry = check_hormander(get_phase("rank_one_m4"))
    assert entry.status == FAILS
    assert entry.method == "exact"
    assert "witness" in entry.detail


def test_rank_one_holds_for_s0(s0):
    entry = check_rank_one(s0)
    assert entry.status == HOLDS
    assert entry.method == "exact"


def test_rank_one_witness_is_a_common_zero(direct_sum):
    entry = check_rank_one(direct_sum)
    assert entry.status == FAILS
    witness = np.array(entry.detail["witness"])
    assert np.linalg.norm(witness) == pytest.approx(1.0)
    np.testing.assert_allclose(mixed_hessian(direct_sum).evaluate(witness), 0.0, atol=1e-12)


def test_rank_one_sampled_for_quartic():
    entry = check_rank_one(get_phase("rank_one_m4"), grid=512)
    assert entry.status == HOLDS
    assert entry.method == "sampled"
    assert entry.detail["points"] == 512


def test_rank_one_certified_for_quartic():
    entry = check_rank_one(get_phase("rank_one_m4"), certify=True)
    assert entry.status == HOLDS
    assert entry.method == "certified"


def test_thm_a_hypothesis(cubic11):
    assert thm_a_hypothesis(cubic11)
    assert not thm_a_hypothesis(parse_phase("x1^3*z1"))


def test_thm_b_check():
    entry = thm_b_check(parse_phase("x1^2*z1 + x2^2*z1 + x1*z1^2 + x2*z1^2"))
    assert entry.detail["j_min"] == 1
    assert entry.detail["j_max"] == 2
    assert entry.status == HOLDS


def test_sphere_points_are_unit_and_reproducible():
    first = sphere_points(4, 100, seed=5)
    second = sphere_points(4, 100, seed=5)
    assert first.shape == (100, 4)
    np.testing.assert_allclose(np.linalg.norm(first, axis=1), 1.0)
    np.testing.assert_array_equal(first, second)


def test_controller_wraps_prediction():
    result = PredictController().predict(get_phase("thm_a_cubic"))
    assert result["success"]
    assert result["r"] == "1/3"
    assert result["source"] == "ThmA/ThmC"


@pytest.mark.parametrize("name", sorted(n for n, ph in all_phases().items() if (ph.n_x, ph.n_z) == (2, 2)))
def test_prediction_is_invariant_under_role_swap(name):
    phase = all_phases()[name]
    direct = predict_decay(phase)
    swapped = predict_decay(phase.swap_roles())
    assert (swapped.status, swapped.r, swapped.p) == (direct.status, direct.r, direct.p), name


def test_z_linear_pencil_is_detected():
    prediction = predict_decay(get_phase("pencil_d3").swap_roles())
    assert prediction.status == "ok"
    assert (prediction.r, prediction.p, prediction.source) == (Fraction(1, 3), 1, "Prop4.5")
    pencil_entry = next(h for h in prediction.hypotheses if h.condition == "Prop4.5")
    assert pencil_entry.detail["linear_in"] == "z"
