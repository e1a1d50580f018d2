"""
Controlador de cúbicas en (2+2) dimensiones
Extrae Φ = det S''_xz en bloques P, Q, R, verifica las hipótesis del
decaimiento λ^{-2/3} y clasifica la geometría de Σ = {Φ = 0}.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from core.errors import DimensionMismatchError, PreconditionError
from models.binary_form import BinaryForm
from models.hessian import mixed_hessian
from models.poly import MultiIndex, PhasePoly
from models.reports import GeometryReport, QuadraticFormPQR, Thm14Report
from controllers.binres_controller import resultant

logger = logging.getLogger(__name__)


# =============== ÁLGEBRA LINEAL EXACTA ===============

def to_sympy_matrix(rows: Sequence[Sequence]) -> sp.Matrix:
    """Matriz de sympy con entradas racionales exactas"""
    return sp.Matrix([[sp.Rational(v.numerator, v.denominator) if isinstance(v, Fraction)
                       else sp.Rational(v) for v in row] for row in rows])


def to_fractions(matrix: sp.Matrix) -> List[List[Fraction]]:
    """Matriz de sympy a listas de Fraction"""
    return [[Fraction(int(sp.Rational(v).p), int(sp.Rational(v).q)) for v in matrix.row(i)]
            for i in range(matrix.rows)]


def _sign_changes(values: Sequence) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature(rows: Sequence[Sequence]) -> Tuple[int, int, int]:
    """
    Signatura exacta (positivos, negativos, nulos) de una matriz simétrica racional

    El polinomio característico de una matriz simétrica tiene solo raíces
    reales, así que la regla de Descartes cuenta sus raíces positivas
    y negativas sin error.
    """
    matrix = to_sympy_matrix(rows)
    t = sp.Symbol("t")
    coeffs = sp.Poly(matrix.charpoly(t).as_expr(), t).all_coeffs()
    size = matrix.rows
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
        zero += 1
    positive = _sign_changes(coeffs)
    degree = len(coeffs) - 1
    mirrored = [c * (-1) ** (degree - k) for k, c in enumerate(coeffs)]
    negative = _sign_changes(mirrored)
    assert positive + negative + zero == size
    return positive, negative, zero


def definiteness(rows: Sequence[Sequence]) -> str:
    """positive definite | negative definite | indefinite | semidefinite | zero"""
    positive, negative, zero = signature(rows)
    size = positive + negative + zero
    if zero == size:
        return "zero"
    if positive == size:
        return "positive definite"
    if negative == size:
        return "negative definite"
    if positive and negative:
        return "indefinite"
    return "semidefinite"


def null_directions(rows: Sequence[Sequence]) -> List[List[float]]:
    """
    Direcciones unitarias w con wᵗMw = 0 para una matriz simétrica 2×2

    Son las asíntotas de las cónicas {wᵗMw = ε}; lista vacía si M es definida.
    """
    a, b, c = (float(rows[0][0]), float(rows[0][1]), float(rows[1][1]))
    if a == 0 and b == 0 and c == 0:
        return []
    directions = []
    if a == 0:
        # v·(2b·u + c·v): v = 0 y, si b ≠ 0, la recta 2b·u + c·v = 0
        directions.append((1.0, 0.0))
        if b != 0:
            directions.append((c, -2.0 * b))
    else:
        disc = b * b - a * c
        if disc < 0:
            return []
        root = math.sqrt(disc)
        for t in {(-b + root) / a, (-b - root) / a}:
            directions.append((t, 1.0))
    result = []
    for u, v in directions:
        norm = math.hypot(u, v)
        result.append([u / norm, v / norm])
    return sorted(result)


# =============== EXTRACCIÓN DE P, Q, R ===============

def _require_cubic22(phase: PhasePoly):
    if (phase.n_x, phase.n_z, phase.degree) != (2, 2, 3):
        raise DimensionMismatchError(
            f"Se requiere una cúbica (2+2); recibido ({phase.n_x}+{phase.n_z}), m={phase.degree}")


def extract_pqr(phase: PhasePoly) -> QuadraticFormPQR:
    """
    Expande Φ = det S''_xz y lo escribe como ½xᵗPx + xᵗQz + ½zᵗRz

    Args:
        phase: Cúbica en (2+2) variables

    Returns:
        QuadraticFormPQR con P, R simétricas
    """
    _require_cubic22(phase)
    phi = mixed_hessian(phase).determinant()

    def coef(alpha, beta) -> Fraction:
        return phi.coefficient(alpha, beta)

    P = [[2 * coef((2, 0), (0, 0)), coef((1, 1), (0, 0))],
         [coef((1, 1), (0, 0)), 2 * coef((0, 2), (0, 0))]]
    R = [[2 * coef((0, 0), (2, 0)), coef((0, 0), (1, 1))],
         [coef((0, 0), (1, 1)), 2 * coef((0, 0), (0, 2))]]
    unit = ((1, 0), (0, 1))
    Q = [[coef(unit[i], unit[j]) for j in range(2)] for i in range(2)]
    return QuadraticFormPQR(P, Q, R)


# =============== HIPÓTESIS ===============

def _det(matrix: sp.Matrix) -> Fraction:
    value = sp.Rational(matrix.det())
    return Fraction(int(value.p), int(value.q))


def _res(left: sp.Matrix, right: sp.Matrix) -> Fraction:
    """Resultante de las formas cuadráticas wᵗ·left·w y wᵗ·right·w"""
    f = BinaryForm.from_quadratic_matrix(to_fractions(left))
    g = BinaryForm.from_quadratic_matrix(to_fractions(right))
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    return resultant(f, g)


def schur_complements(pqr: QuadraticFormPQR) -> Tuple[sp.Matrix, sp.Matrix]:
    """
    (P - QR⁻¹Qᵗ, R - QᵗP⁻¹Q); requiere P y R no singulares
    """
    P, Q, R = (to_sympy_matrix(pqr.P), to_sympy_matrix(pqr.Q), to_sympy_matrix(pqr.R))
    return P - Q * R.inv() * Q.T, R - Q.T * P.inv() * Q


def check_thm14_pqr(pqr: QuadraticFormPQR) -> Thm14Report:
    """
    Evalúa las condiciones de no singularidad y de resultantes sobre P, Q, R

    Cuando P o R son singulares, las condiciones dependientes se reportan
    como falsas con la anotación "no evaluable".

    Args:
        pqr: Bloques de la forma cuadrática Φ

    Returns:
        Thm14Report con los valores intermedios
    """
    P, Q, R = (to_sympy_matrix(pqr.P), to_sympy_matrix(pqr.Q), to_sympy_matrix(pqr.R))
    det_p, det_r = _det(P), _det(R)
    witnesses: Dict[str, Optional[Fraction]] = {
        "det_P": det_p, "det_R": det_r,
        "det_P_schur": None, "det_R_schur": None,
        "res_111_x": None, "res_111_z": None,
        "res_112_x": None, "res_112_z": None,
    }
    applicable_112 = (definiteness(pqr.P) == "indefinite" and definiteness(pqr.R) == "indefinite")
    cond_18 = det_p != 0 and det_r != 0
    if not cond_18:
        return Thm14Report(False, False, False, False, applicable_112, witnesses,
                           notes=["P o R singular: condiciones dependientes no evaluables"])

    A, B = schur_complements(pqr)
    det_a, det_b = _det(A), _det(B)
    witnesses["det_P_schur"] = det_a
    witnesses["det_R_schur"] = det_b
    cond_19 = det_a != 0 and det_b != 0
    matrices = {"P_schur": to_fractions(A), "R_schur": to_fractions(B)}
    notes = []

    R_inv, P_inv = R.inv(), P.inv()
    res_111_x = _res(A, Q * R_inv * B * R_inv * Q.T)
    res_111_z = _res(B, Q.T * P_inv * A * P_inv * Q)
    witnesses["res_111_x"] = res_111_x
    witnesses["res_111_z"] = res_111_z
    cond_111 = res_111_x != 0 and res_111_z != 0

    res_112_x = _res(P, A)
    res_112_z = _res(R, B)
    witnesses["res_112_x"] = res_112_x
    witnesses["res_112_z"] = res_112_z
    cond_112 = res_112_x != 0 and res_112_z != 0
    if not applicable_112:
        notes.append("P o R definida: la condición de resultantes con P, R no se exige")
    if not cond_19:
        notes.append("complementos de Schur singulares: Φ degenerada")

    report = Thm14Report(cond_18, cond_19, cond_111, cond_112, applicable_112,
                         witnesses, matrices, notes)
    logger.debug(f"Hipótesis (2+2): {report.to_dict()}")
    return report


def check_thm14(phase: PhasePoly) -> Thm14Report:
    """Hipótesis del decaimiento λ^{-2/3} para una cúbica (2+2)"""
    pqr = extract_pqr(phase)
    report = check_thm14_pqr(pqr)
    report.matrices.update({"P": [list(r) for r in pqr.P], "Q": [list(r) for r in pqr.Q],
                            "R": [list(r) for r in pqr.R]})
    return report


# =============== GEOMETRÍA ===============

def _conic_kind(kind: str) -> str:
    if kind.endswith("definite") and not kind.startswith("semi"):
        return "ellipse"
    if kind == "indefinite":
        return "hyperbola"
    return "degenerate"


def classify_geometry(phase: PhasePoly) -> GeometryReport:
    """
    Signatura de Φ y tipo de las cónicas Γ_R, Γ_L

    Args:
        phase: Cúbica (2+2) con P, R y sus complementos de Schur no singulares

    Returns:
        GeometryReport
    """
    report = check_thm14(phase)
    if not (report.cond_18 and report.cond_19):
        raise PreconditionError("La clasificación requiere P, R y sus complementos de Schur no singulares")
    pqr = extract_pqr(phase)
    return classify_pqr(pqr)


def classify_pqr(pqr: QuadraticFormPQR) -> GeometryReport:
    """Clasificación geométrica a partir de P, Q, R ya validados"""
    A, B = schur_complements(pqr)
    a_rows, b_rows = to_fractions(A), to_fractions(B)
    sig = signature(pqr.block_matrix())
    phi_definite = sig[0] == 4 or sig[1] == 4
    kinds = {
        "P": definiteness(pqr.P),
        "R": definiteness(pqr.R),
        "P_schur": definiteness(a_rows),
        "R_schur": definiteness(b_rows),
        "Phi": definiteness(pqr.block_matrix()),
    }
    route = ("Σ̃ vacío: aplica la condición de Hörmander" if phi_definite
             else "Σ̃ no vacío: ruta de pliegues (decaimiento λ^{-2/3})")
    return GeometryReport(
        signature=sig,
        phi_definite=phi_definite,
        sigma_tilde_empty=phi_definite,
        route=route,
        definiteness=kinds,
        gamma_R=_conic_kind(kinds["R_schur"]),
        gamma_L=_conic_kind(kinds["P_schur"]),
        null_directions={
            "P": null_directions(pqr.P),
            "R": null_directions(pqr.R),
            "P_schur": null_directions(a_rows),
            "R_schur": null_directions(b_rows),
        },
    )


# =============== DIAGNÓSTICO DE VALORES SINGULARES ===============

def sigma1_diagnostic(phase: PhasePoly, point: Sequence[float]) -> Tuple[float, float, float]:
    """
    Valores singulares σ₁ <= σ₂ de S''_xz en un punto y |Φ(punto)|

    Args:
        phase: Cúbica (2+2)
        point: Punto no nulo de R⁴

    Returns:
        (σ₁, σ₂, |Φ|)
    """
    _require_cubic22(phase)
    point = np.asarray(point, dtype=float)
    if not np.any(point):
        raise ValueError("El punto debe ser no nulo")
    matrix = mixed_hessian(phase).evaluate(point)
    singular = np.linalg.svd(matrix, compute_uv=False)
    return float(singular[-1]), float(singular[0]), float(abs(np.linalg.det(matrix)))


class Cubic22Controller:
    """
    Controlador del subcomando check
    """

    def check(self, phase: PhasePoly) -> dict:
        """
        Hipótesis, bloques P, Q, R y geometría de una cúbica (2+2)

        Args:
            phase: Fase a analizar

        Returns:
            Dict con resultado de la operación
        """
        try:
            pqr = extract_pqr(phase)
            report = check_thm14_pqr(pqr)
            result = {
                "success": True,
                "message": "Hipótesis verificadas" if report.passed else "Alguna hipótesis falla",
                "pqr": pqr.to_dict(),
                "thm14": report.to_dict(),
                "geometry": None,
            }
            if report.cond_18 and report.cond_19:
                result["geometry"] = classify_pqr(pqr).to_dict()
            logger.info(f"Hipótesis (2+2) evaluadas: passed={report.passed}")
            return result
        except DimensionMismatchError as e:
            logger.error(f"❌ {e}")
            return {"success": False, "message": str(e)}
