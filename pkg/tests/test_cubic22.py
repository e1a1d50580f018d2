from fractions import Fraction

import numpy as np
import pytest

from core.errors import DimensionMismatchError, PreconditionError
from controllers.binres_controller import resultant
from controllers.cubic22_controller import (Cubic22Controller, check_thm14, check_thm14_pqr,
                                            classify_geometry, definiteness, extract_pqr,
                                            null_directions, sigma1_diagnostic, signature,
                                            to_fractions, to_sympy_matrix)
from models.binary_form import BinaryForm
from models.hessian import mixed_hessian
from models.poly import random_phase
from models.reports import QuadraticFormPQR


def _rows(matrix):
    return [list(row) for row in matrix]


def test_s0_blocks(s0):
    pqr = extract_pqr(s0)
    assert _rows(pqr.P) == [[0, 28], [28, 0]]
    assert _rows(pqr.Q) == [[4, -2], [12, 4]]
    assert _rows(pqr.R) == [[4, 0], [0, -4]]


def test_direct_sum_blocks(direct_sum):
    pqr = extract_pqr(direct_sum)
    for block in (pqr.P, pqr.Q, pqr.R):
        assert _rows(block) == [[0, 4], [4, 0]]


def test_s0_passes_all_conditions(s0):
    report = check_thm14(s0)
    assert report.cond_18 and report.cond_19 and report.cond_111
    assert report.passed
    assert report.matrices["R_schur"] == [[Fraction(4, 7), Fraction(2, 7)], [Fraction(2, 7), Fraction(-24, 7)]]


def test_alternative_s0_blocks_also_pass():
    pqr = QuadraticFormPQR([[0, 14], [14, 0]], [[4, -1], [12, 0]], [[2, 0], [0, -2]])
    assert check_thm14_pqr(pqr).passed


def test_direct_sum_fails_schur_condition(direct_sum):
    report = check_thm14(direct_sum)
    assert report.cond_18
    assert not report.cond_19
    assert not report.passed
    assert report.witnesses["det_P_schur"] == 0


def test_singular_blocks_are_not_evaluable():
    pqr = QuadraticFormPQR([[1, 0], [0, 0]], [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    report = check_thm14_pqr(pqr)
    assert not report.cond_18
    assert report.witnesses["res_111_x"] is None
    assert report.notes


def test_phi_identity_on_random_phases(rng):
    for trial in range(10):
        phase = random_phase(2, 2, 3, rng)
        phi = mixed_hessian(phase).determinant()
        assert extract_pqr(phase).synthesize() == phi, f"trial={trial}"


def test_extract_requires_cubic22(cubic11):
    with pytest.raises(DimensionMismatchError):
        extract_pqr(cubic11)


@pytest.mark.parametrize("matrix, expected", [
    ([[2, 0], [0, 3]], (2, 0, 0)),
    ([[0, 28], [28, 0]], (1, 1, 0)),
    ([[1, 1], [1, 1]], (1, 0, 1)),
    ([[-1, 0, 0], [0, -2, 0], [0, 0, 0]], (0, 2, 1)),
])
def test_signature(matrix, expected):
    assert signature(matrix) == expected


def test_definiteness_labels():
    assert definiteness([[2, 0], [0, 3]]) == "positive definite"
    assert definiteness([[-2, 1], [1, -3]]) == "negative definite"
    assert definiteness([[0, 1], [1, 0]]) == "indefinite"
    assert definiteness([[1, 0], [0, 0]]) == "semidefinite"
    assert definiteness([[0, 0], [0, 0]]) == "zero"


def test_null_directions_of_hyperbola():
    directions = null_directions([[1, 0], [0, -1]])
    assert len(directions) == 2
    for u, v in directions:
        assert u * u - v * v == pytest.approx(0.0, abs=1e-12)
    assert null_directions([[1, 0], [0, 1]]) == []


def test_s0_geometry(s0):
    geometry = classify_geometry(s0)
    assert not geometry.phi_definite
    assert not geometry.sigma_tilde_empty
    assert geometry.definiteness["R_schur"] == "indefinite"
    assert geometry.gamma_R == "hyperbola"
    assert sum(geometry.signature) == 4


def test_geometry_requires_nonsingular_schur(direct_sum):
    with pytest.raises(PreconditionError):
        classify_geometry(direct_sum)


def test_sigma1_vanishes_on_critical_variety(s0):
    # Φ(x, 0) = 28·x₁x₂ se anula en (1, 0, 0, 0)
    sigma1, sigma2, phi = sigma1_diagnostic(s0, [1.0, 0.0, 0.0, 0.0])
    assert sigma1 <= 1e-8 * sigma2
    assert phi == pytest.approx(0.0, abs=1e-12)


def test_singular_values_multiply_to_phi(s0, rng):
    for point in rng.standard_normal((25, 4)):
        sigma1, sigma2, phi = sigma1_diagnostic(s0, point)
        assert sigma1 <= sigma2
        assert sigma1 * sigma2 == pytest.approx(phi, rel=1e-9, abs=1e-12)


def test_sigma1_rejects_origin(s0):
    with pytest.raises(ValueError):
        sigma1_diagnostic(s0, np.zeros(4))


def test_controller_check(s0, direct_sum):
    controller = Cubic22Controller()
    result = controller.check(s0)
    assert result["success"]
    assert result["thm14"]["passed"]
    assert result["geometry"]["gamma_R"] == "hyperbola"
    failing = controller.check(direct_sum)
    assert failing["success"]
    assert not failing["thm14"]["passed"]
    assert failing["geometry"] is None


def test_schur_resultant_identity_on_random_blocks(rng):
    checked = 0
    while checked < 100:
        pqr = extract_pqr(random_phase(2, 2, 3, rng))
        P, Q, R = (to_sympy_matrix(block) for block in (pqr.P, pqr.Q, pqr.R))
        if P.det() == 0 or all(value == 0 for value in R):
            continue
        coupling = Q.T * P.inv() * Q
        base = BinaryForm.from_quadratic_matrix(to_fractions(R))
        schur = BinaryForm.from_quadratic_matrix(to_fractions(R - coupling))
        cross = BinaryForm.from_quadratic_matrix(to_fractions(coupling))
        if schur.is_zero() or cross.is_zero():
            continue
        # para cuadráticas Res[f, f − g] = Res[f, g]
        assert resultant(base, schur) == resultant(base, cross), f"trial={checked}"
        checked += 1
