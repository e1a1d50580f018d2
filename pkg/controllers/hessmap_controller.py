"""
Controlador del isomorfismo Hessiano 𝔥: 𝔖^m → 𝕄_𝔥
Prueba de pertenencia (relaciones de compatibilidad) e inversa explícita.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from core.errors import DegreeError, IncompatibleMatrixError
from models.hessian import HessianMatrix
from models.poly import MultiIndex, PhasePoly, phase_monomials

logger = logging.getLogger(__name__)


def compatibility_violations(matrix: HessianMatrix) -> List[Dict]:
    """
    Lista las identidades de compatibilidad que fallan

    Tipo "x": (H_ij)_{x_i'} = (H_i'j)_{x_i} para i < i'.
    Tipo "z": (H_ij)_{z_j'} = (H_ij')_{z_j} para j < j'.
    Los índices devueltos empiezan en 1.

    Args:
        matrix: Matriz candidata

    Returns:
        Lista de violaciones {"kind", "i", "i2"/"j2", "j"}
    """
    violations = []
    n_x = matrix.n_x
    for j in range(matrix.n_z):
        for i in range(matrix.n_x):
            for i2 in range(i + 1, matrix.n_x):
                if matrix[i, j].partial(i2) != matrix[i2, j].partial(i):
                    violations.append({"kind": "x", "i": i + 1, "i2": i2 + 1, "j": j + 1})
    for i in range(matrix.n_x):
        for j in range(matrix.n_z):
            for j2 in range(j + 1, matrix.n_z):
                if matrix[i, j].partial(n_x + j2) != matrix[i, j2].partial(n_x + j):
                    violations.append({"kind": "z", "i": i + 1, "j": j + 1, "j2": j2 + 1})
    return violations


def is_compatible(matrix: HessianMatrix) -> Tuple[bool, List[Dict]]:
    """
    Decide si la matriz pertenece a la imagen del mapa Hessiano

    Returns:
        (compatible, violaciones)
    """
    violations = compatibility_violations(matrix)
    return not violations, violations


def _coefficient_from(matrix: HessianMatrix, monomial: MultiIndex, i: int, j: int) -> Fraction:
    """a_αβ = b^{ij}_{α-e_i, β-ē_j} / (α_i β_j)"""
    alpha = list(monomial.alpha)
    beta = list(monomial.beta)
    scale = alpha[i] * beta[j]
    alpha[i] -= 1
    beta[j] -= 1
    return matrix[i, j].coefficient(alpha, beta) / scale


def hessian_inverse(matrix: HessianMatrix) -> PhasePoly:
    """
    Reconstruye la fase S con Hessiana mixta igual a la matriz dada

    Cada coeficiente se toma del par (i, j) lexicográficamente mínimo
    con α_i, β_j ≠ 0. En modo depuración se comprueba que todos los
    pares válidos den el mismo valor.

    Args:
        matrix: Matriz compatible de grado m-2

    Returns:
        PhasePoly de grado m
    """
    compatible, violations = is_compatible(matrix)
    if not compatible:
        raise IncompatibleMatrixError(
            f"La matriz no satisface {len(violations)} relaciones de compatibilidad", violations)
    m = matrix.phase_degree
    if m < 2:
        raise DegreeError(f"Grado de fase inválido: {m}")

    terms = {}
    for monomial in phase_monomials(matrix.n_x, matrix.n_z, m):
        pairs = [(i, j) for i in range(matrix.n_x) if monomial.alpha[i]
                 for j in range(matrix.n_z) if monomial.beta[j]]
        i, j = pairs[0]
        value = _coefficient_from(matrix, monomial, i, j)
        if __debug__:
            for other in pairs[1:]:
                assert _coefficient_from(matrix, monomial, *other) == value, \
                    f"Coeficiente de {monomial} depende del par elegido"
        if value:
            terms[monomial] = value
    logger.debug(f"Inversa Hessiana: {len(terms)} términos de grado {m}")
    return PhasePoly(matrix.n_x, matrix.n_z, m, terms)


class HessMapController:
    """
    Controlador de consultas sobre matrices Hessianas para la CLI
    """

    def check_matrix(self, matrix: HessianMatrix) -> dict:
        """
        Prueba de compatibilidad y, si procede, reconstrucción de la fase

        Args:
            matrix: Matriz candidata

        Returns:
            Dict con resultado de la operación
        """
        try:
            compatible, violations = is_compatible(matrix)
            result = {
                "success": True,
                "message": "Matriz compatible" if compatible else "Matriz incompatible",
                "compatible": compatible,
                "violations": violations,
            }
            if compatible:
                result["phase"] = hessian_inverse(matrix).to_dict()
            return result
        except DegreeError as e:
            logger.error(f"❌ Error al invertir la Hessiana: {e}")
            return {"success": False, "message": str(e), "compatible": False, "violations": []}
