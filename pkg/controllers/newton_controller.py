"""
Controlador del poliedro de Newton
Distancia de Newton δ(S) por programación lineal exacta y búsqueda de
la distancia modificada δ_mod(S) sobre cambios lineales de x y z.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import permutations
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from core.config import AppConfig
from core.errors import LPError, PreconditionError
from core.simplex import linprog_exact
from models.poly import PhasePoly
from models.reports import ModifiedNewtonResult, NewtonData
from controllers.pencil_controller import detect_pencil, pencil_delta_mod

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def _newton_lp(points: Sequence[Sequence[int]], level: Optional[Fraction] = None):
    """
    min t  s.a.  Σw = 1,  Σ w_i p_i - t·𝟙 <= 0,  w, t >= 0

    Con level fijo se resuelve solo la factibilidad en t = level.
    """
    k = len(points)
    dim = len(points[0])
    if level is None:
        c = [0] * k + [1]
        a_ub = [[p[coord] for p in points] + [-1] for coord in range(dim)]
        b_ub = [0] * dim
        a_eq = [[1] * k + [0]]
    else:
        c = [0] * k
        a_ub = [[p[coord] for p in points] for coord in range(dim)]
        b_ub = [level] * dim
        a_eq = [[1] * k]
    return linprog_exact(c, a_ub, b_ub, a_eq, [1])


def lp_feasible(points: Sequence[Sequence[int]], level) -> bool:
    """True si (level, ..., level) pertenece a 𝒩₀ = conv(puntos) + ortante positivo"""
    return _newton_lp(points, Fraction(level)).is_optimal


def newton_distance(phase: PhasePoly) -> NewtonData:
    """
    Distancia de Newton exacta

    Args:
        phase: Fase no nula

    Returns:
        NewtonData con δ racional y los pesos de la combinación convexa
    """
    if phase.is_zero():
        raise PreconditionError("La distancia de Newton no está definida para la fase nula")
    support = phase.support()
    result = _newton_lp(support)
    if not result.is_optimal:
        raise LPError(f"Programa lineal de Newton terminó con estado {result.status}")
    weights = result.x[:-1]
    delta = result.objective
    n_vars = phase.n_x + phase.n_z
    lower_ok = delta >= Fraction(phase.degree, n_vars)
    if not lower_ok:
        logger.warning(f"⚠️ δ = {delta} por debajo de m/N = {Fraction(phase.degree, n_vars)}")
    logger.debug(f"δ(S) = {delta} con {len(support)} puntos de soporte")
    return NewtonData(support, delta, weights, lower_ok)


def verify_certificate(data: NewtonData, epsilon: Fraction = Fraction(1, 10**6)) -> bool:
    """
    Comprueba los pesos y que ningún nivel δ - ε sea factible
    """
    weights = data.certificate
    if any(w < 0 for w in weights) or sum(weights) != 1:
        return False
    if any(value > data.delta for value in data.combination()):
        return False
    return not lp_feasible(data.support, data.delta - epsilon)


# =============== δ_mod ===============

def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def permutation_matrix(perm: Sequence[int]) -> Matrix:
    n = len(perm)
    return [[Fraction(int(perm[i] == j)) for j in range(n)] for i in range(n)]


def random_invertible(n: int, rng: np.random.Generator, denominator: int,
                      det_threshold: float) -> Matrix:
    """
    Matriz racional con entradas k/denominator en [-1, 1] y |det| > det_threshold
    """
    while True:
        numerators = rng.integers(-denominator, denominator + 1, size=(n, n))
        matrix = [[Fraction(int(v), denominator) for v in row] for row in numerators]
        det = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in matrix]).det()
        if abs(float(det)) > det_threshold:
            return matrix


def reduction_transform(phase: PhasePoly, block: str) -> Optional[Matrix]:
    """
    Cambio lineal que concentra la dependencia del bloque en sus primeras variables

    Si S es invariante en las direcciones del núcleo V del mapa de
    gradientes, A = [complemento | V] hace que S(Ay) dependa solo de
    las primeras k coordenadas. Devuelve None si no hay núcleo.
    """
    n = phase.n_x if block == "x" else phase.n_z
    _, rows = phase.gradient_matrix(block)
    if not rows or not rows[0]:
        return None
    gradient = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in rows])
    kernel = gradient.T.nullspace()
    if not kernel or len(kernel) == n:
        return None
    columns = []
    for k in range(n):
        candidate = sp.Matrix([int(i == k) for i in range(n)])
        trial = sp.Matrix.hstack(*(columns + [candidate] + kernel))
        if trial.rank() == len(columns) + 1 + len(kernel):
            columns.append(candidate)
        if len(columns) + len(kernel) == n:
            break
    full = sp.Matrix.hstack(*(columns + kernel))
    return [[Fraction(int(sp.Rational(full[i, j]).p), int(sp.Rational(full[i, j]).q))
             for j in range(n)] for i in range(n)]


def _candidate_transforms(phase: PhasePoly) -> List[Tuple[str, Matrix, Matrix]]:
    """Identidad, permutaciones de ejes y reducciones por variables inactivas"""
    candidates = []
    for px in permutations(range(phase.n_x)):
        for pz in permutations(range(phase.n_z)):
            name = "identity" if list(px) == sorted(px) and list(pz) == sorted(pz) else "permutation"
            candidates.append((name, permutation_matrix(px), permutation_matrix(pz)))
    reduce_x = reduction_transform(phase, "x")
    reduce_z = reduction_transform(phase, "z")
    if reduce_x or reduce_z:
        a = reduce_x or identity(phase.n_x)
        b = reduce_z or identity(phase.n_z)
        candidates.append(("kernel", a, b))
        if reduce_x and reduce_z:
            candidates.append(("kernel", reduce_x, identity(phase.n_z)))
            candidates.append(("kernel", identity(phase.n_x), reduce_z))
    return candidates


def modified_newton_distance(phase: PhasePoly, samples: Optional[int] = None,
                             seed: Optional[int] = None, workers: int = 1) -> ModifiedNewtonResult:
    """
    Cota inferior certificada de δ_mod(S) (exacta para fases de haz)

    Cada muestra aleatoria usa su propio generador sembrado con
    (seed, índice), de modo que el resultado no depende del orden de
    ejecución de los hilos.

    Args:
        phase: Fase no nula
        samples: Número de pares (A, B) aleatorios
        seed: Semilla
        workers: Hilos para evaluar las muestras

    Returns:
        ModifiedNewtonResult
    """
    config = AppConfig.get_newton_config()
    samples = config["samples"] if samples is None else samples
    seed = config["seed"] if seed is None else seed
    if samples < 1:
        raise ValueError("Se requiere al menos una muestra")

    base = newton_distance(phase)
    pencil = detect_pencil(phase)
    if pencil is not None:
        exact = pencil_delta_mod(pencil)
        logger.info(f"Fase de haz: δ_mod exacto = {exact}")
        return ModifiedNewtonResult(exact, True, identity(2), identity(2), base, 1, "pencil")

    candidates = _candidate_transforms(phase)

    def sample(index: int) -> Tuple[Matrix, Matrix]:
        rng = np.random.default_rng([seed, index])
        a = random_invertible(phase.n_x, rng, config["entry_denominator"], config["det_threshold"])
        b = random_invertible(phase.n_z, rng, config["entry_denominator"], config["det_threshold"])
        return a, b

    def evaluate(transform: Tuple[Matrix, Matrix]) -> NewtonData:
        a, b = transform
        return newton_distance(phase.substitute_linear(a, b))

    transforms = [(a, b) for _, a, b in candidates]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            transforms += list(pool.map(sample, range(samples)))
            results = list(pool.map(evaluate, transforms))
    else:
        transforms += [sample(i) for i in range(samples)]
        results = [evaluate(t) for t in transforms]

    best_index = 0
    for index, data in enumerate(results):
        if data.delta > results[best_index].delta:
            best_index = index
    best_a, best_b = transforms[best_index]
    method = candidates[best_index][0] if best_index < len(candidates) else "random"
    logger.info(f"δ_mod >= {results[best_index].delta} ({method}, {len(transforms)} candidatos)")
    return ModifiedNewtonResult(results[best_index].delta, False, best_a, best_b,
                                results[best_index], len(transforms), method)


class NewtonController:
    """
    Controlador del subcomando newton
    """

    def compute(self, phase: PhasePoly, modified: bool = False, samples: Optional[int] = None,
                seed: Optional[int] = None, workers: int = 1) -> dict:
        """
        Distancia de Newton (y opcionalmente la modificada)

        Args:
            phase: Fase a analizar
            modified: Si se busca δ_mod
            samples: Muestras aleatorias para δ_mod
            seed: Semilla
            workers: Hilos

        Returns:
            Dict con resultado de la operación
        """
        try:
            if not modified:
                data = newton_distance(phase)
                return {
                    "success": True,
                    "message": f"δ(S) = {data.delta}",
                    "delta": data.to_dict()["delta"],
                    "exact": True,
                    "transform_A": None,
                    "transform_B": None,
                    "certificate": data.to_dict(),
                }
            result = modified_newton_distance(phase, samples, seed, workers)
            data = result.to_dict()
            data.update({
                "success": True,
                "message": f"δ_mod(S) {'=' if result.exact else '>='} {result.delta}",
                "seed": AppConfig.get_newton_config()["seed"] if seed is None else seed,
            })
            return data
        except (LPError, PreconditionError) as e:
            logger.error(f"❌ Error en la distancia de Newton: {e}")
            return {"success": False, "message": str(e)}
