"""
Controlador de predicción de tasas de decaimiento
Verifica las hipótesis de cada teorema aplicable y elige la mejor tasa
‖T_λ‖ <= Cλ^{-r}(log λ)^p con un registro completo de hipótesis.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import List, Optional

import numpy as np
import sympy as sp
from scipy.stats import norm, qmc

from core.config import AppConfig
from core.interval import certify_nonvanishing, refine_common_zero
from models.binary_form import BinaryForm
from models.hessian import HessianMatrix, mixed_hessian
from models.poly import HomPoly, PhasePoly, polynomial_determinant
from models.reports import DecayPrediction, HypothesisEntry, RateCandidate
from controllers.binres_controller import real_projective_roots
from controllers.cubic22_controller import check_thm14, definiteness, extract_pqr
from controllers.newton_controller import newton_distance
from controllers.pencil_controller import detect_pencil, pencil_rate

logger = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
UNDECIDED = "undecided"
NOT_APPLICABLE = "not applicable"


# =============== MUESTREO EN LA ESFERA ===============

def sphere_points(dimension: int, count: int, seed: int = 0) -> np.ndarray:
    """
    Puntos cuasi-uniformes en la esfera unidad de R^dimension

    Sobol aleatorizado, transformado a normales y normalizado.
    """
    sampler = qmc.Sobol(d=dimension, scramble=True, seed=seed)
    uniform = sampler.random_base2(m=max(1, math.ceil(math.log2(max(count, 2)))))[:count]
    gaussian = norm.ppf(np.clip(uniform, 1e-12, 1 - 1e-12))
    return gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)


def _sampling_settings(grid: Optional[int]) -> dict:
    config = AppConfig.get_sampling_config()
    if grid is not None:
        config["sphere_points"] = grid
    return config


def _certify(polys: List[HomPoly], config: dict, condition: str) -> HypothesisEntry:
    result = certify_nonvanishing(polys, tol=config["cell_tol"], max_cells=config["max_cells"],
                                  min_width=config["min_width"], zero_threshold=config["zero_threshold"])
    if result.certified:
        return HypothesisEntry(condition, HOLDS, "certified", result.to_dict())
    if result.status == "witness":
        return HypothesisEntry(condition, FAILS, "certified", result.to_dict())
    return HypothesisEntry(condition, UNDECIDED, "certified", result.to_dict())


def _sampled_entry(condition: str, polys: List[HomPoly], points: np.ndarray,
                   values: np.ndarray, config: dict, key: str) -> HypothesisEntry:
    """
    Estado muestreado: los puntos con menor valor se refinan localmente
    y un cero común encontrado se reporta como fallo con testigo
    """
    smallest = float(values.min())
    detail = {key: smallest, "points": len(points), "seed": config["seed"]}
    if smallest <= config["zero_threshold"]:
        return HypothesisEntry(condition, FAILS, "sampled", detail)
    for index in np.argsort(values)[:config["refine_starts"]]:
        point, residual = refine_common_zero(polys, points[index])
        if residual < config["zero_threshold"]:
            detail["witness"] = point.tolist()
            return HypothesisEntry(condition, FAILS, "sampled", detail)
    return HypothesisEntry(condition, HOLDS, "sampled", detail)


def _constant_rank(matrix: HessianMatrix) -> int:
    rows = [[sp.Rational(str(entry.coefficient((0,) * matrix.n_x, (0,) * matrix.n_z)))
             for entry in row] for row in matrix.entries]
    return sp.Matrix(rows).rank()


# =============== HÖRMANDER ===============

def check_hormander(phase: PhasePoly, grid: Optional[int] = None,
                    certify: bool = False) -> HypothesisEntry:
    """
    ¿rank S''_xz = n_z en todo punto no nulo?

    Exacto para m = 2, (1+1) y cúbicas (2+2); muestreado (o certificado
    por intervalos) en los demás casos.

    Args:
        phase: Fase de grado m >= 2
        grid: Puntos de muestreo en la esfera
        certify: Ejecutar la certificación por intervalos

    Returns:
        HypothesisEntry con estado y método
    """
    condition = "hormander"
    matrix = mixed_hessian(phase)
    if phase.n_x < phase.n_z:
        return HypothesisEntry(condition, FAILS, "exact", {"reason": "n_x < n_z"})
    if phase.degree == 2:
        rank = _constant_rank(matrix)
        return HypothesisEntry(condition, HOLDS if rank == phase.n_z else FAILS, "exact", {"rank": rank})
    if (phase.n_x, phase.n_z) == (1, 1):
        entry = matrix[0, 0]
        if entry.is_zero():
            return HypothesisEntry(condition, FAILS, "exact", {"real_roots": "all"})
        roots = real_projective_roots(BinaryForm.from_hompoly(entry))
        return HypothesisEntry(condition, HOLDS if roots == 0 else FAILS, "exact", {"real_roots": roots})
    if (phase.n_x, phase.n_z, phase.degree) == (2, 2, 3):
        pqr = extract_pqr(phase)
        kind = definiteness(pqr.block_matrix())
        status = HOLDS if kind.endswith("definite") and not kind.startswith("semi") and kind != "indefinite" else FAILS
        return HypothesisEntry(condition, status, "exact", {"phi": kind})

    minors = [polynomial_determinant([[matrix[i, j] for j in range(phase.n_z)] for i in rows])
              for rows in combinations(range(phase.n_x), phase.n_z)]
    if all(m.is_zero() for m in minors):
        return HypothesisEntry(condition, FAILS, "exact", {"reason": "rango < n_z en todo punto"})
    n_vars = phase.n_x + phase.n_z
    for k in range(n_vars):
        axis = [int(i == k) for i in range(n_vars)]
        if all(minor.eval(axis) == 0 for minor in minors):
            return HypothesisEntry(condition, FAILS, "exact", {"witness": axis})
    config = _sampling_settings(grid)
    if certify:
        return _certify(minors, config, condition)
    points = sphere_points(phase.n_x + phase.n_z, config["sphere_points"], config["seed"])
    singular = np.linalg.svd(matrix.evaluate_many(points), compute_uv=False)[:, phase.n_z - 1]
    return _sampled_entry(condition, minors, points, singular, config, "min_singular")


# =============== RANGO UNO ===============

def _coordinate_witness(matrix: HessianMatrix) -> Optional[List[int]]:
    """Punto de un subespacio coordenado donde todas las entradas se anulan"""
    n_x, n_z = matrix.n_x, matrix.n_z
    entries = [entry for row in matrix.entries for entry in row]
    if all(index.z_degree > 0 for entry in entries for index in entry.terms):
        return [1] + [0] * (n_x + n_z - 1)
    if all(index.x_degree > 0 for entry in entries for index in entry.terms):
        return [0] * n_x + [1] + [0] * (n_z - 1)
    for k in range(n_x + n_z):
        axis = [int(i == k) for i in range(n_x + n_z)]
        if all(entry.eval(axis) == 0 for entry in entries):
            return axis
    return None


def check_rank_one(phase: PhasePoly, grid: Optional[int] = None,
                   certify: bool = False) -> HypothesisEntry:
    """
    ¿Alguna entrada de S''_xz es no nula en cada punto no nulo?

    Args:
        phase: Fase de grado m >= 2
        grid: Puntos de muestreo en la esfera
        certify: Ejecutar la certificación por intervalos

    Returns:
        HypothesisEntry; un fallo exacto incluye el cero común como testigo
    """
    condition = "rank-one"
    matrix = mixed_hessian(phase)
    entries = [entry for row in matrix.entries for entry in row if not entry.is_zero()]
    n_vars = phase.n_x + phase.n_z
    if not entries:
        return HypothesisEntry(condition, FAILS, "exact", {"reason": "S''_xz idénticamente nula"})
    if phase.degree == 2:
        return HypothesisEntry(condition, HOLDS, "exact", {"reason": "matriz constante no nula"})
    if (phase.n_x, phase.n_z) == (1, 1):
        roots = real_projective_roots(BinaryForm.from_hompoly(entries[0]))
        return HypothesisEntry(condition, HOLDS if roots == 0 else FAILS, "exact", {"real_roots": roots})
    if phase.degree == 3:
        rows = []
        for entry in entries:
            row = [0] * n_vars
            for index, coef in entry.items():
                row[index.point.index(1)] = sp.Rational(coef.numerator, coef.denominator)
            rows.append(row)
        kernel = sp.Matrix(rows).nullspace()
        if not kernel:
            return HypothesisEntry(condition, HOLDS, "exact", {"rank": n_vars})
        vector = np.array([float(v) for v in kernel[0]])
        return HypothesisEntry(condition, FAILS, "exact",
                               {"witness": (vector / np.linalg.norm(vector)).tolist()})

    witness = _coordinate_witness(matrix)
    if witness is not None:
        return HypothesisEntry(condition, FAILS, "exact", {"witness": witness})
    config = _sampling_settings(grid)
    if certify:
        return _certify(entries, config, condition)
    points = sphere_points(n_vars, config["sphere_points"], config["seed"])
    values = np.abs(matrix.evaluate_many(points)).reshape(len(points), -1).max(axis=1)
    return _sampled_entry(condition, entries, points, values, config, "min_max_entry")


# =============== TEOREMAS ===============

def _thm11_rate(n_x: int, n_z: int, m: int) -> RateCandidate:
    threshold = Fraction(n_x + n_z, n_z)
    if m > threshold:
        return RateCandidate(Fraction(n_x + n_z, 2 * m), 0, "Thm1.1")
    return RateCandidate(Fraction(n_z, 2), 1 if m == threshold else 0, "Thm1.1")


def _thm12_rate(n_x: int, n_z: int, m: int) -> RateCandidate:
    total = n_x + n_z
    if m > total:
        return RateCandidate(Fraction(total, 2 * m), 0, "Thm1.2")
    return RateCandidate(Fraction(1, 2), 1 if m == total else 0, "Thm1.2")


def thm_a_hypothesis(phase: PhasePoly) -> bool:
    """(1+1): algún a_j ≠ 0 con j <= m/2 y algún a_k ≠ 0 con k >= m/2"""
    m = phase.degree
    exponents = [index.alpha[0] for index in phase.terms]
    return any(2 * j <= m for j in exponents) and any(2 * k >= m for k in exponents)


def thm_b_check(phase: PhasePoly) -> HypothesisEntry:
    """
    (2+1): S = Σ P_j(x) z^{m-j} con j_min <= 2m/3 <= j_max y
    P_{j_min}, P_{j_max} no degeneradas
    """
    condition = "ThmB"
    m = phase.degree
    forms = {}
    for index, coef in phase.items():
        j = index.x_degree
        coeffs = forms.setdefault(j, [Fraction(0)] * (j + 1))
        coeffs[index.alpha[1]] = coef
    present = sorted(j for j, coeffs in forms.items() if any(coeffs))
    j_min, j_max = present[0], present[-1]
    p_min = BinaryForm(j_min, tuple(forms[j_min]))
    p_max = BinaryForm(j_max, tuple(forms[j_max]))
    detail = {"j_min": j_min, "j_max": j_max,
              "P_jmin_nondegenerate": p_min.nondegenerate(),
              "P_jmax_nondegenerate": p_max.nondegenerate()}
    holds = 3 * j_min <= 2 * m <= 3 * j_max and p_min.nondegenerate() and p_max.nondegenerate()
    return HypothesisEntry(condition, HOLDS if holds else NOT_APPLICABLE, "exact", detail)


def _thm_b_rate(m: int) -> RateCandidate:
    if m >= 4:
        return RateCandidate(Fraction(3, 2 * m), 0, "ThmB")
    if m == 3:
        return RateCandidate(Fraction(1, 2), 1, "ThmB")
    return RateCandidate(Fraction(1, 2), 0, "ThmB")


def _has_full_rank_somewhere(matrix: HessianMatrix) -> bool:
    if matrix.n_x == matrix.n_z:
        return not matrix.determinant().is_zero()
    return not matrix.gram_determinant().is_zero()


def predict_decay(phase: PhasePoly, grid: Optional[int] = None, certify: bool = False,
                  workers: int = 1) -> DecayPrediction:
    """
    Evalúa todos los teoremas aplicables y devuelve la mejor tasa

    Orden de evaluación: m = 2, (1+1), Hörmander, rango uno, cúbica (2+2),
    haz. La mejor tasa es la de mayor r; a igualdad de r gana el menor p.

    Args:
        phase: Fase no nula sin monomios puros
        grid: Puntos de muestreo en la esfera
        certify: Certificación por intervalos para los casos muestreados
        workers: Si es > 1, Hörmander y rango uno se evalúan en paralelo

    Returns:
        DecayPrediction (estado "no_theorem_applies" si ninguno aplica)
    """
    if phase.is_zero():
        raise ValueError("La fase nula no tiene tasa de decaimiento")
    adjoint = phase.n_x < phase.n_z
    working = phase.swap_roles() if adjoint else phase
    n_x, n_z, m = working.n_x, working.n_z, working.degree
    ledger: List[HypothesisEntry] = []
    candidates: List[RateCandidate] = []
    extra = {}
    if adjoint:
        ledger.append(HypothesisEntry("adjoint", HOLDS, "exact", {"reason": "n_x < n_z: se usan los papeles intercambiados"}))

    matrix = mixed_hessian(working)

    # (i) m = 2: Hessiana constante
    if m == 2:
        rank = _constant_rank(matrix)
        ledger.append(HypothesisEntry("m=2 constant rank", HOLDS, "exact", {"rank": rank}))
        if rank > 0:
            candidates.append(RateCandidate(Fraction(rank, 2), 0, "Hormander-m2"))

    # (ii) (1+1): Newton y Phong-Stein
    if (n_x, n_z) == (1, 1):
        holds_a = thm_a_hypothesis(working)
        ledger.append(HypothesisEntry("ThmA", HOLDS if holds_a else FAILS, "exact"))
        if holds_a:
            candidates.append(RateCandidate(Fraction(1, m), 0, "ThmA"))
        data = newton_distance(working)
        extra["delta"] = data.delta
        ledger.append(HypothesisEntry("ThmC", HOLDS, "exact", {"delta": str(data.delta)}))
        candidates.append(RateCandidate(1 / (2 * data.delta), 0, "ThmC"))

    # (2+1): teorema B
    if (n_x, n_z) == (2, 1):
        entry = thm_b_check(working)
        ledger.append(entry)
        if entry.status == HOLDS:
            candidates.append(_thm_b_rate(m))

    # (iii) y (iv): condiciones de rango
    if m >= 3:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=2) as pool:
                future_h = pool.submit(check_hormander, working, grid, certify)
                future_r = pool.submit(check_rank_one, working, grid, certify)
                hormander, rank_one = future_h.result(), future_r.result()
        else:
            hormander = check_hormander(working, grid, certify)
            rank_one = check_rank_one(working, grid, certify)
        ledger.extend([hormander, rank_one])
        if hormander.status == HOLDS:
            candidates.append(_thm11_rate(n_x, n_z, m))
        if rank_one.status == HOLDS:
            candidates.append(_thm12_rate(n_x, n_z, m))

    # (v) cúbicas (2+2)
    if (n_x, n_z, m) == (2, 2, 3):
        report = check_thm14(working)
        ledger.append(HypothesisEntry("Thm1.4", HOLDS if report.passed else FAILS, "exact", report.to_dict()))
        if report.passed:
            candidates.append(RateCandidate(Fraction(2, 3), 0, "Thm1.4"))

    # (vi) haces, lineales en x o, con n_x = n_z, lineales en z
    pencil = detect_pencil(working)
    pencil_roles = "x"
    if pencil is None and n_x == n_z:
        pencil = detect_pencil(working.swap_roles())
        pencil_roles = "z"
    if pencil is not None:
        rate = pencil_rate(pencil)
        ledger.append(HypothesisEntry("Prop4.5", HOLDS, "exact", {**pencil.to_dict(), "linear_in": pencil_roles}))
        candidates.append(RateCandidate(rate.r, 1, "Prop4.5"))
        extra["delta_mod"] = rate.extra["delta_mod"]

    lower_bound_r = Fraction(n_x + n_z, 2 * m)
    lower_bound_r_rank = Fraction(n_z, 2) if _has_full_rank_somewhere(matrix) else None

    if not candidates:
        logger.warning("⚠️ Ningún teorema aplica; solo se reporta la cota inferior")
        return DecayPrediction(None, 0, None, ledger, lower_bound_r, lower_bound_r_rank,
                               [], adjoint, "no_theorem_applies", extra)

    best = max(candidates, key=lambda c: (c.r, -c.p))
    tied = [c.source for c in candidates if (c.r, c.p) == (best.r, best.p)]
    source = "/".join(dict.fromkeys(tied))
    cap = Fraction(n_z, 2)
    if best.r > cap:
        raise AssertionError(f"Tasa {best.r} supera la cota n_Z/2 = {cap}")
    logger.info(f"Predicción: r = {best.r}, p = {best.p} ({source})")
    return DecayPrediction(best.r, best.p, source, ledger, lower_bound_r, lower_bound_r_rank,
                           candidates, adjoint, "ok", extra)


class PredictController:
    """
    Controlador del subcomando predict
    """

    def predict(self, phase: PhasePoly, grid: Optional[int] = None, certify: bool = False,
                workers: int = 1) -> dict:
        """
        Predicción de decaimiento con registro de hipótesis

        Args:
            phase: Fase a analizar
            grid: Puntos de muestreo
            certify: Certificación por intervalos
            workers: Hilos

        Returns:
            Dict con resultado de la operación
        """
        try:
            prediction = predict_decay(phase, grid, certify, workers)
            data = prediction.to_dict()
            data.update({
                "success": True,
                "message": (f"r = {prediction.r}, p = {prediction.p} ({prediction.source})"
                            if prediction.r is not None else "Ningún teorema aplica"),
            })
            return data
        except ValueError as e:
            logger.error(f"❌ Error en la predicción: {e}")
            return {"success": False, "message": str(e)}
