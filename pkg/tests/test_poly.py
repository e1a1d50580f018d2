from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from core.errors import DegreeError, DimensionMismatchError, PhaseSpaceError
from models.poly import (HomPoly, MultiIndex, PhasePoly, dim_phase_space, phase_monomials,
                         random_phase, to_fraction)
from models.parser import parse_phase


def test_eval_s0_at_ones_matches_term_sum(s0):
    # 1 + 1 + 1 + 2 - 1 + 1 + 3
    assert s0.eval([1, 1, 1, 1]) == 8


def test_eval_is_exact_for_rationals_and_float_otherwise(cubic11):
    assert cubic11.eval([Fraction(1, 2), 2]) == Fraction(1, 2) + 2
    assert isinstance(cubic11.eval([0.5, 2.0]), float)
    assert cubic11.eval([0.5, 2.0]) == pytest.approx(2.5)


def test_eval_rejects_wrong_length(cubic11):
    with pytest.raises(DimensionMismatchError):
        cubic11.eval([1, 2, 3])


def test_evaluate_many_agrees_with_eval(s0, rng):
    points = rng.standard_normal((50, 4))
    values = s0.evaluate_many(points)
    expected = [s0.eval(list(p)) for p in points]
    np.testing.assert_allclose(values, expected, rtol=1e-12, atol=1e-12)


def test_partial_derivative_of_quartic():
    phase = parse_phase("1/3*x1^3*z1 + 1/3*x1*z1^3")
    derivative = phase.partial("x1").partial("z1")
    assert derivative == HomPoly(1, 1, 2, {((2,), (0,)): 1, ((0,), (2,)): 1})


def test_partials_commute(rng):
    phase = random_phase(2, 3, 4, rng)
    for a, b in product(["x1", "x2", "z1", "z3"], repeat=2):
        assert phase.partial(a).partial(b) == phase.partial(b).partial(a), (a, b)


@pytest.mark.parametrize("m, n_x, n_z, expected", [(3, 2, 2, 12), (2, 1, 1, 1), (3, 1, 1, 2), (4, 2, 2, 25)])
def test_dim_phase_space(m, n_x, n_z, expected):
    assert dim_phase_space(m, n_x, n_z) == expected
    assert len(phase_monomials(n_x, n_z, m)) == expected


def test_dim_phase_space_rejects_linear():
    with pytest.raises(DegreeError):
        dim_phase_space(1, 2, 2)


def test_pure_monomials_are_not_phases():
    with pytest.raises(PhaseSpaceError):
        PhasePoly(1, 1, 3, {((3,), (0,)): 1, ((1,), (2,)): 1})


def test_constructor_checks_degree_and_shape():
    with pytest.raises(DegreeError):
        HomPoly(1, 1, 3, {((1,), (1,)): 1})
    with pytest.raises(DimensionMismatchError):
        HomPoly(2, 1, 2, {((1,), (1,)): 1})


def test_zero_coefficients_are_dropped():
    poly = HomPoly(1, 1, 2, {MultiIndex((1,), (1,)): 0})
    assert poly.is_zero()
    assert poly.degree == 2


def test_arithmetic_and_powers():
    x = HomPoly.variable(1, 1, "x1")
    z = HomPoly.variable(1, 1, "z1")
    square = (x + z) ** 2
    assert square == x * x + 2 * (x * z) + z * z
    assert (square - square).is_zero()


def test_substitute_linear_identity_and_inverse(rng):
    phase = random_phase(2, 2, 3, rng)
    assert phase.substitute_linear() == phase
    a = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    a_inv = [[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]]
    assert phase.substitute_linear(a, a).substitute_linear(a_inv, a_inv) == phase


def test_swap_roles_is_an_involution(s0):
    swapped = s0.swap_roles()
    assert swapped.eval([1, 2, 3, 4]) == s0.eval([3, 4, 1, 2])
    assert swapped.swap_roles() == s0


def test_dict_round_trip(rng):
    phase = random_phase(2, 2, 3, rng)
    assert PhasePoly.from_dict(phase.to_dict()) == phase


def test_random_phase_is_reproducible():
    first = random_phase(2, 2, 3, np.random.default_rng([1, 7]))
    second = random_phase(2, 2, 3, np.random.default_rng([1, 7]))
    assert first == second


def test_to_fraction_accepts_text_and_numbers():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(np.int64(2)) == 2
    assert to_fraction(0.5) == Fraction(1, 2)
