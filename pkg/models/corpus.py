"""
Corpus de fases de referencia
"""
from fractions import Fraction
from typing import Dict

from models.poly import PhasePoly
from models.parser import parse_phase

# Cúbica (2+2) que satisface todas las condiciones del teorema de tasa 2/3
S0_TEXT = "x1*z1^2 + x1*z2^2 + x2*z1*z2 + 2*x1^2*z1 - x2^2*z1 + x1^2*z2 + 3*x2^2*z2"

CORPUS_TEXT: Dict[str, str] = {
    "s0": S0_TEXT,
    "direct_sum": "x1*z1^2 + x1^2*z1 + x2*z2^2 + x2^2*z2",
    "thm_a_cubic": "x1^2*z1 + x1*z1^2",
    "rank_one_m4": "1/3*x1^3*z1 + 1/3*x2*z1^3 + 1/3*x2^3*z2 + 1/3*x2*z2^3",
    "pencil_d3": "x1*z1^2*z2 + x2*z1*z2^2",
    "hormander_quartic": "1/3*x1^3*z1 + 1/3*x1*z1^3",
    "bilinear": "x1*z1",
}

DESCRIPTIONS: Dict[str, str] = {
    "s0": "Cúbica (2+2) no degenerada, tasa λ^{-2/3}",
    "direct_sum": "Suma directa de dos cúbicas (1+1); falla la no singularidad de los complementos de Schur",
    "thm_a_cubic": "Cúbica (1+1) x²z + xz², tasa λ^{-1/3}",
    "rank_one_m4": "Cuártica (2+2) de rango uno, tasa λ^{-1/2} log λ",
    "pencil_d3": "Haz de grado d = 3 con s = 1, tasa λ^{-1/3} log λ",
    "hormander_quartic": "Cuártica (1+1) con S''_xz = x² + z²",
    "bilinear": "Fase bilineal xz, tasa λ^{-1/2}",
}

# Rotación racional (3/5, 4/5): ningún ángulo es múltiplo de π/2
ROTATION = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]


def get_phase(name: str) -> PhasePoly:
    """
    Fase del corpus por nombre

    Las cúbicas (1+1) se devuelven con sus dimensiones mínimas.
    """
    if name == "rotated":
        return rotated_thm_a()
    try:
        text = CORPUS_TEXT[name]
    except KeyError:
        raise KeyError(f"Fase desconocida en el corpus: {name}")
    return parse_phase(text)


def embedded_thm_a() -> PhasePoly:
    """x₁²z₁ + x₁z₁² vista en (2+2) dimensiones"""
    return parse_phase(CORPUS_TEXT["thm_a_cubic"], n_x=2, n_z=2)


def rotated_thm_a() -> PhasePoly:
    """x₁²z₁ + x₁z₁² en (2+2) tras rotar x y z; δ baja a 3/4"""
    return embedded_thm_a().substitute_linear(ROTATION, ROTATION)


def all_phases() -> Dict[str, PhasePoly]:
    """Corpus completo, incluida la fase rotada"""
    phases = {name: get_phase(name) for name in CORPUS_TEXT}
    phases["rotated"] = rotated_thm_a()
    return phases
