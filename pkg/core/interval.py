"""
Certificación por aritmética de intervalos (mpmath.iv) con ramificación y poda

Para polinomios homogéneos, la no anulación simultánea en la esfera
unidad equivale a la no anulación en la frontera del cubo [-1, 1]^N;
se recorren las 2N caras y cada celda se subdivide hasta que alguno de
los polinomios tenga un intervalo que excluye el cero.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import iv
from scipy.optimize import minimize

from models.poly import HomPoly

logger = logging.getLogger(__name__)

CERTIFIED = "certified"
WITNESS = "witness"
UNDECIDED = "undecided"

Box = List[Tuple[float, float]]


@dataclass
class CertificationResult:
    """
    Resultado de una certificación de no anulación
    """
    status: str
    cells: int = 0
    witness: Optional[List[float]] = None
    min_bound: Optional[float] = None
    undecided_cells: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cells": self.cells,
            "witness": self.witness,
            "min_bound": self.min_bound,
            "undecided_cells": self.undecided_cells,
        }


def interval_eval(poly: HomPoly, box: Sequence) -> "iv.mpf":
    """
    Cota intervalar de un polinomio sobre una caja

    Args:
        poly: Polinomio a evaluar
        box: Lista de intervalos iv.mpf (uno por variable)

    Returns:
        Intervalo que contiene poly(box)
    """
    total = iv.mpf(0)
    for index, coef in poly.items():
        term = iv.mpf(coef.numerator) / coef.denominator
        for value, exponent in zip(box, index.point):
            if exponent:
                term = term * value ** exponent
        total = total + term
    return total


def _excludes_zero(value, tol: float) -> Tuple[bool, float]:
    lo, hi = float(value.a), float(value.b)
    if lo > tol:
        return True, lo
    if hi < -tol:
        return True, -hi
    return False, 0.0


def _sphere_residual(polys: Sequence[HomPoly], point: np.ndarray) -> float:
    """max |p(y)| en la proyección de point a la esfera unidad"""
    point = point / np.linalg.norm(point)
    return max(abs(float(p.evaluate_many(point[None, :])[0])) for p in polys)


def refine_common_zero(polys: Sequence[HomPoly], start: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Busca localmente un cero común minimizando Σ p(y/|y|)²

    Returns:
        (punto en la esfera, residuo max |p|)
    """
    def objective(y):
        y = y / np.linalg.norm(y)
        return sum(float(p.evaluate_many(y[None, :])[0]) ** 2 for p in polys)

    result = minimize(objective, np.asarray(start, dtype=float), method="BFGS",
                      options={"gtol": 1e-14, "maxiter": 200})
    point = result.x / np.linalg.norm(result.x)
    return point, _sphere_residual(polys, point)


def certify_nonvanishing(polys: Sequence[HomPoly], tol: float = 1e-6,
                         max_cells: int = 20000, min_width: float = 1e-3,
                         zero_threshold: float = 1e-6) -> CertificationResult:
    """
    Prueba que los polinomios no se anulan simultáneamente en la esfera

    Args:
        polys: Polinomios homogéneos con las mismas variables
        tol: Margen mínimo de la cota inferior para aceptar una celda
        max_cells: Presupuesto de celdas procesadas
        min_width: Ancho mínimo antes de declarar la celda indecidible
        zero_threshold: Umbral relativo para aceptar un cero común como testigo

    Returns:
        CertificationResult: certified, witness (con el punto) o undecided
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return CertificationResult(WITNESS, witness=None, notes=["todas las funciones son idénticamente nulas"])
    n_vars = polys[0].n_x + polys[0].n_z
    stack: List[Box] = []
    for axis in range(n_vars):
        for sign in (-1.0, 1.0):
            box = [(-1.0, 1.0)] * n_vars
            box[axis] = (sign, sign)
            stack.append(box)

    cells = 0
    undecided = 0
    min_bound = None
    while stack:
        box = stack.pop()
        cells += 1
        if cells > max_cells:
            logger.warning(f"⚠️ Certificación agotó el presupuesto de {max_cells} celdas")
            return CertificationResult(UNDECIDED, cells, min_bound=min_bound,
                                       undecided_cells=undecided + len(stack) + 1)

        intervals = [iv.mpf([lo, hi]) for lo, hi in box]
        proven = False
        for poly in polys:
            ok, bound = _excludes_zero(interval_eval(poly, intervals), tol)
            if ok:
                proven = True
                min_bound = bound if min_bound is None else min(min_bound, bound)
                break
        if proven:
            continue

        midpoint = np.array([(lo + hi) / 2 for lo, hi in box])
        widths = [hi - lo for lo, hi in box]
        split = int(np.argmax(widths))
        residual = _sphere_residual(polys, midpoint)
        if residual < 1e-2 or widths[split] < min_width:
            point, residual = refine_common_zero(polys, midpoint)
            if residual < zero_threshold:
                logger.info(f"Cero común encontrado en {point.tolist()}")
                return CertificationResult(WITNESS, cells, witness=point.tolist(), min_bound=min_bound)

        if widths[split] < min_width:
            undecided += 1
            continue
        lo, hi = box[split]
        mid = (lo + hi) / 2
        left, right = list(box), list(box)
        left[split] = (lo, mid)
        right[split] = (mid, hi)
        stack.append(left)
        stack.append(right)

    status = CERTIFIED if undecided == 0 else UNDECIDED
    logger.debug(f"Certificación {status} con {cells} celdas")
    return CertificationResult(status, cells, min_bound=min_bound, undecided_cells=undecided)
