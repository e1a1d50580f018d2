import pytest

from core.errors import IncompatibleMatrixError
from controllers.hessmap_controller import (HessMapController, compatibility_violations,
                                            hessian_inverse, is_compatible)
from models.corpus import get_phase
from models.hessian import HessianMatrix, mixed_hessian
from models.poly import HomPoly, random_phase


def _linear(*coefficients) -> HomPoly:
    return HomPoly.linear_form(2, 2, list(coefficients))


def test_mixed_hessian_of_s0(s0):
    hessian = mixed_hessian(s0)
    assert hessian[0, 0] == HomPoly.linear_form(2, 2, [4, 0, 2, 0])
    assert hessian[0, 1] == HomPoly.linear_form(2, 2, [2, 0, 0, 2])
    assert hessian[1, 0] == HomPoly.linear_form(2, 2, [0, -2, 0, 1])
    assert hessian[1, 1] == HomPoly.linear_form(2, 2, [0, 6, 1, 0])


def test_mixed_hessian_of_quartic():
    phase = get_phase("hormander_quartic")
    entry = mixed_hessian(phase)[0, 0]
    assert entry == HomPoly(1, 1, 2, {((2,), (0,)): 1, ((0,), (2,)): 1})


def test_s0_hessian_is_compatible(s0):
    compatible, violations = is_compatible(mixed_hessian(s0))
    assert compatible
    assert violations == []


def test_rotation_matrix_violates_z_relation():
    matrix = HessianMatrix.from_rows([[_linear(0, 0, 1, 0), _linear(0, 0, 0, 1)],
                                      [_linear(0, 0, 0, -1), _linear(0, 0, 1, 0)]])
    violations = compatibility_violations(matrix)
    assert violations == [{"kind": "z", "i": 2, "j": 1, "j2": 2}]
    with pytest.raises(IncompatibleMatrixError) as info:
        hessian_inverse(matrix)
    assert info.value.violations == violations


def test_inverse_builds_rank_one_quartic():
    x1 = HomPoly.variable(2, 2, "x1")
    x2 = HomPoly.variable(2, 2, "x2")
    z1 = HomPoly.variable(2, 2, "z1")
    z2 = HomPoly.variable(2, 2, "z2")
    matrix = HessianMatrix.from_rows([[x1 * x1, HomPoly.zero(2, 2, 2)],
                                      [z1 * z1, x2 * x2 + z2 * z2]])
    assert hessian_inverse(matrix) == get_phase("rank_one_m4")


ROUND_TRIP_SHAPES = ([(1, 1, m) for m in range(3, 7)] + [(2, 2, m) for m in range(3, 6)]
                     + [(3, 2, m) for m in range(3, 5)])


def test_inverse_round_trip_on_random_phases(rng):
    for trial in range(100):
        n_x, n_z, m = ROUND_TRIP_SHAPES[trial % len(ROUND_TRIP_SHAPES)]
        phase = random_phase(n_x, n_z, m, rng)
        assert hessian_inverse(mixed_hessian(phase)) == phase, f"trial={trial} shape={(n_x, n_z, m)}"


@pytest.mark.parametrize("shape", [(2, 1, 4), (2, 3, 5)])
def test_inverse_round_trip_on_unbalanced_shapes(shape, rng):
    phase = random_phase(*shape, rng)
    assert hessian_inverse(mixed_hessian(phase)) == phase, f"shape={shape}"


def test_transpose_matches_swapped_phase(s0):
    assert mixed_hessian(s0).transpose() == mixed_hessian(s0.swap_roles())


def test_controller_reports_phase_for_compatible_matrix(s0):
    result = HessMapController().check_matrix(mixed_hessian(s0))
    assert result["success"]
    assert result["compatible"]
    assert result["phase"] == s0.to_dict()


def test_matrix_dict_round_trip(s0):
    hessian = mixed_hessian(s0)
    assert HessianMatrix.from_dict(hessian.to_dict()) == hessian
