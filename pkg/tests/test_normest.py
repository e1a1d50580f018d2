import math

import numpy as np
import pytest

from controllers.normest_controller import (NormEstController, choose_grid, estimate_norm, fit_rows,
                                            geometric_lambdas, kernel_matrix, log_band,
                                            lower_bound_witness, power_iteration, sweep_and_fit,
                                            witness_amplitude, witness_sweep)
from models.corpus import get_phase
from models.reports import AmplitudeSpec, NormRow


def _dense_norm(phase, lam, amp, n):
    return float(np.linalg.svd(kernel_matrix(phase, lam, amp, n), compute_uv=False)[0])


def _rows(lambdas, slope, scale=2.0, resolved=True):
    return [NormRow(lam, scale * lam ** slope, 64, 10, 1e-9, resolved) for lam in lambdas]


def test_zero_lambda_is_rank_one(cubic11):
    amp = AmplitudeSpec.uniform(2)
    matrix = kernel_matrix(cubic11, 0.0, amp, 16)
    singular = np.linalg.svd(matrix, compute_uv=False)
    assert singular[1] == pytest.approx(0.0, abs=1e-12)
    row = estimate_norm(cubic11, 0.0, amp, n=16)
    assert row.norm == pytest.approx(singular[0], rel=1e-6)
    assert row.converged


@pytest.mark.parametrize("name, lam", [("bilinear", 5.0), ("thm_a_cubic", 8.0)])
def test_power_iteration_matches_dense_svd(name, lam):
    phase = get_phase(name)
    amp = AmplitudeSpec.uniform(2)
    row = estimate_norm(phase, lam, amp, n=32, tol=1e-9, max_iter=5000)
    expected = _dense_norm(phase, lam, amp, 32)
    assert row.converged
    assert row.norm == pytest.approx(expected, rel=1e-4), f"lam={lam} n=32 tol=1e-9"


def test_swapping_roles_preserves_the_norm(s0):
    amp = AmplitudeSpec.uniform(4)
    direct = _dense_norm(s0, 3.0, amp, 6)
    swapped = _dense_norm(s0.swap_roles(), 3.0, amp, 6)
    assert swapped == pytest.approx(direct, rel=1e-10)


def test_direct_sum_norm_is_tensor_square(direct_sum, cubic11):
    # el núcleo de la suma directa es el producto de Kronecker del núcleo (1+1)
    amp2 = AmplitudeSpec.uniform(2)
    amp4 = AmplitudeSpec.uniform(4)
    one = _dense_norm(cubic11, 6.0, amp2, 8)
    both = _dense_norm(direct_sum, 6.0, amp4, 8)
    assert both == pytest.approx(one ** 2, rel=1e-9)


@pytest.mark.parametrize("lam", [4.0, 20.0])
def test_witness_never_exceeds_discrete_norm(cubic11, lam):
    amp = witness_amplitude(2)
    row = lower_bound_witness(cubic11, lam, amp, n=64)
    assert row.ratio <= _dense_norm(cubic11, lam, amp, 64) * (1 + 1e-9)


def test_witness_requires_large_lambda(cubic11):
    with pytest.raises(ValueError):
        lower_bound_witness(cubic11, 0.5)


def test_log_band():
    assert log_band(10.0, 1000.0, 0) == 0.0
    one = log_band(10.0, 1000.0, 1)
    assert one > 0
    assert log_band(10.0, 1000.0, 2) == pytest.approx(2 * one)
    # por debajo de e el extremo inferior se recorta
    assert log_band(1.5, 1000.0, 1) == log_band(math.e, 1000.0, 1)


def test_choose_grid_respects_cap(cubic11):
    amp = AmplitudeSpec.uniform(2)
    n, needed = choose_grid(cubic11, 1.0e4, amp, grid_cap=16)
    assert n == 16
    assert needed > n
    small, small_needed = choose_grid(cubic11, 0.1, amp)
    assert small >= small_needed


def test_fit_recovers_synthetic_slope():
    lambdas = geometric_lambdas(10.0, 1000.0, 8)
    result = fit_rows(_rows(lambdas, -1.0 / 3.0))
    assert result.slope == pytest.approx(-1.0 / 3.0, abs=1e-12)
    assert result.stderr == pytest.approx(0.0, abs=1e-10)
    assert result.window == (lambdas[2], lambdas[-1])


def test_fit_excludes_unresolved_rows():
    lambdas = geometric_lambdas(10.0, 1000.0, 8)
    rows = _rows(lambdas, -0.5)
    rows[-1] = NormRow(lambdas[-1], 1.0, 16, 3, 1e-3, resolved=False)
    result = fit_rows(rows)
    assert result.excluded == [lambdas[-1]]
    assert result.slope == pytest.approx(-0.5, abs=1e-12)


def test_fit_without_enough_rows_has_no_slope():
    result = fit_rows(_rows([10.0, 20.0], -0.5))
    assert result.slope is None


def test_fit_excludes_rows_above_tolerance():
    lambdas = geometric_lambdas(10.0, 1000.0, 8)
    rows = _rows(lambdas, -0.5)
    rows[-2] = NormRow(lambdas[-2], 5.0, 64, 500, 1e-3, resolved=True, converged=True)
    result = fit_rows(rows, tol=1e-6)
    assert result.excluded == [lambdas[-2]]
    assert result.slope == pytest.approx(-0.5, abs=1e-12)


def test_capped_rows_enter_fit_as_under_resolved():
    lambdas = geometric_lambdas(10.0, 80.0, 6)
    rows = _rows(lambdas, -2.0 / 3.0, resolved=False)
    assert fit_rows(rows).slope is None
    result = fit_rows(rows, include_unresolved=True)
    assert result.excluded == []
    assert result.under_resolved == lambdas
    assert result.slope == pytest.approx(-2.0 / 3.0, abs=1e-12)
    assert result.to_dict()["under_resolved"] == lambdas


def test_sweep_with_grid_cap_reports_under_resolved(s0):
    lambdas = geometric_lambdas(10.0, 80.0, 4)
    result = sweep_and_fit(s0, lambdas, grid_cap=8)
    assert all(not row.resolved for row in result.rows)
    assert result.under_resolved == lambdas
    assert result.slope is not None
    summary = NormEstController().sweep(s0, 10.0, 80.0, 4, grid_cap=8)
    assert summary["success"]
    assert not summary["all_resolved"]


class _DiagonalGram:
    """MᴴM diagonal con brecha espectral pequeña"""

    def __init__(self, diagonal):
        self.diagonal = np.asarray(diagonal, dtype=float)

    def apply(self, v):
        return self.diagonal * v


def test_power_iteration_falls_back_to_lanczos():
    diagonal = np.linspace(0.2, 0.9, 18).tolist() + [0.999, 1.0]
    norm, iters, residual, converged = power_iteration(_DiagonalGram(diagonal), 20, 1e-8, 5)
    assert converged
    assert residual < 1e-8
    assert iters > 5
    assert norm == pytest.approx(1.0, rel=1e-6)


def test_converged_rows_meet_tolerance(cubic11):
    row = estimate_norm(cubic11, 100.0)
    assert row.converged
    assert row.residual < 1e-6, f"residual={row.residual:.2e} n={row.grid_n}"


def test_power_iteration_is_deterministic(cubic11):
    amp = AmplitudeSpec.uniform(2)
    first = estimate_norm(cubic11, 12.0, amp, n=48, seed=3)
    second = estimate_norm(cubic11, 12.0, amp, n=48, seed=3)
    assert first.iters == second.iters
    assert abs(first.norm - second.norm) <= 1e-12


@pytest.mark.parametrize("lam", [1.0, 2.0, 4.0, 8.0, 16.0])
def test_direct_sum_estimate_matches_tensor_oracle(direct_sum, cubic11, lam):
    one = estimate_norm(cubic11, lam, AmplitudeSpec.uniform(2), n=20, tol=1e-9, max_iter=2000)
    both = estimate_norm(direct_sum, lam, AmplitudeSpec.uniform(4), n=20, tol=1e-9, max_iter=2000)
    assert both.norm == pytest.approx(one.norm ** 2, rel=1e-3), f"lam={lam} n=20 tol=1e-9 seed=0"


@pytest.mark.parametrize("lam_min, lam_max, points", [(0.0, 10.0, 5), (10.0, 5.0, 5), (1.0, 10.0, 1)])
def test_geometric_lambdas_rejects_bad_ranges(lam_min, lam_max, points):
    with pytest.raises(ValueError):
        geometric_lambdas(lam_min, lam_max, points)


def test_sweep_needs_four_lambdas(bilinear):
    with pytest.raises(ValueError):
        sweep_and_fit(bilinear, [1.0, 2.0, 3.0])


def test_controller_reports_fixed_grid(bilinear):
    result = NormEstController().sweep(bilinear, 1.0, 8.0, 4, grid=8)
    assert result["success"]
    assert result["grid"] == 8
    assert len(result["rows"]) == 4


@pytest.mark.slow
@pytest.mark.parametrize("name, expected", [
    ("bilinear", -0.5),
    ("thm_a_cubic", -1.0 / 3.0),
])
def test_sweep_slope_matches_prediction(name, expected):
    result = sweep_and_fit(get_phase(name), geometric_lambdas(50.0, 800.0, 5), seed=0)
    assert result.slope is not None
    assert abs(result.slope - expected) <= 0.05, (
        f"{name}: slope={result.slope:.4f} seed=0 grid=auto tol=1e-6")


@pytest.mark.slow
def test_s0_sweep_with_capped_grid(s0):
    result = sweep_and_fit(s0, geometric_lambdas(10.0, 80.0, 6), grid_cap=64, seed=0)
    assert result.slope is not None
    assert abs(result.slope + 2.0 / 3.0) <= 0.12, (
        f"s0: slope={result.slope:.4f} seed=0 grid_cap=64 tol=1e-6")


@pytest.mark.slow
def test_pencil_sweep_within_log_band():
    # malla acotada: la regla pediría miles de nodos por eje en (2+2)
    result = sweep_and_fit(get_phase("pencil_d3"), geometric_lambdas(50.0, 400.0, 5), grid_cap=32, seed=0)
    band = log_band(50.0, 400.0, 1)
    assert result.slope is not None
    assert -1.0 / 3.0 - band - 0.1 <= result.slope <= -1.0 / 3.0 + 0.1, (
        f"pencil_d3: slope={result.slope:.4f} band={band:.3f} seed=0 grid_cap=32 tol=1e-6")


@pytest.mark.slow
def test_doubling_the_grid_changes_norm_by_under_one_percent(cubic11):
    amp = AmplitudeSpec.uniform(2)
    n, _ = choose_grid(cubic11, 20.0, amp)
    coarse = estimate_norm(cubic11, 20.0, amp, n=n)
    fine = estimate_norm(cubic11, 20.0, amp, n=2 * n)
    assert abs(fine.norm / coarse.norm - 1) < 0.01, f"n={n} seed=0 tol=1e-6"


@pytest.mark.slow
def test_cubic_witness_slope_respects_lower_bound(cubic11):
    rows, slope = witness_sweep(cubic11, geometric_lambdas(50.0, 800.0, 5))
    assert all(row.support_points > 0 for row in rows)
    assert slope >= -1.0 / 3.0 - 0.05, f"slope={slope:.4f} grid=auto"


@pytest.mark.slow
def test_s0_witness_slope_and_norm(s0):
    lambdas = geometric_lambdas(10.0, 80.0, 4)
    rows, slope = witness_sweep(s0, lambdas, grid_cap=64)
    assert slope >= -2.0 / 3.0 - 0.1, f"slope={slope:.4f} grid_cap=64"
    amp = witness_amplitude(4)
    last = rows[-1]
    norm = estimate_norm(s0, last.lam, amp, n=last.grid_n)
    assert last.ratio <= norm.norm * (1 + 1e-6), f"lam={last.lam:g} n={last.grid_n}"
