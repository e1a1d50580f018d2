import numpy as np
from mpmath import iv

from core.interval import CERTIFIED, WITNESS, certify_nonvanishing, interval_eval, refine_common_zero
from models.poly import HomPoly

SQUARES = HomPoly(1, 1, 2, {((2,), (0,)): 1, ((0,), (2,)): 1})
PRODUCT = HomPoly(1, 1, 2, {((1,), (1,)): 1})


def test_interval_evaluation_encloses_values():
    value = interval_eval(PRODUCT, [iv.mpf([0.5, 1.0]), iv.mpf([-1.0, 0.25])])
    assert float(value.a) <= -1.0
    assert float(value.b) >= 0.25


def test_sum_of_squares_is_certified():
    result = certify_nonvanishing([SQUARES])
    assert result.status == CERTIFIED
    assert result.certified
    assert result.min_bound > 0


def test_product_has_a_witness():
    result = certify_nonvanishing([PRODUCT])
    assert result.status == WITNESS
    point = np.array(result.witness)
    assert abs(np.linalg.norm(point) - 1.0) < 1e-12
    assert abs(PRODUCT.evaluate_many(point[None, :])[0]) < 1e-6


def test_joint_vanishing_only_at_origin():
    x_squared = HomPoly(1, 1, 2, {((2,), (0,)): 1})
    z_squared = HomPoly(1, 1, 2, {((0,), (2,)): 1})
    assert certify_nonvanishing([x_squared, z_squared]).certified


def test_zero_polynomials_give_a_trivial_witness():
    result = certify_nonvanishing([HomPoly.zero(1, 1, 2)])
    assert result.status == WITNESS
    assert result.witness is None


def test_refinement_lands_on_common_zero():
    point, residual = refine_common_zero([PRODUCT], np.array([0.9, 0.1]))
    assert residual < 1e-6
    assert abs(np.linalg.norm(point) - 1.0) < 1e-12
