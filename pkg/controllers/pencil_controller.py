"""
Controlador de fases de haz S = x₁φ₁(z) + x₂φ₂(z)
"""
import logging
from fractions import Fraction
from typing import List, Optional

from core.errors import DegreeError, ZeroFormError
from models.binary_form import BinaryForm
from models.poly import PhasePoly
from models.reports import DecayPrediction, HypothesisEntry, PencilPhase, RateCandidate
from controllers.binres_controller import format_direction, pencil_s, real_common_factors

logger = logging.getLogger(__name__)


def build_pencil(phi1: BinaryForm, phi2: BinaryForm) -> PencilPhase:
    """
    Construye el haz a partir de dos formas del mismo grado

    Args:
        phi1: Forma de grado d >= 1
        phi2: Forma de grado d

    Returns:
        PencilPhase con s y su dirección
    """
    if phi1.is_zero() or phi2.is_zero():
        raise ZeroFormError("Haz degenerado: una de las formas es nula")
    s, direction = pencil_s(phi1, phi2)
    return PencilPhase(phi1.degree, phi1, phi2, s, direction)


def detect_pencil(phase: PhasePoly) -> Optional[PencilPhase]:
    """
    Reconoce fases lineales en x en (2+2) dimensiones

    Returns:
        PencilPhase o None si la fase no es un haz genuino
    """
    if (phase.n_x, phase.n_z) != (2, 2) or phase.degree < 2:
        return None
    d = phase.degree - 1
    coeffs = {(1, 0): [Fraction(0)] * (d + 1), (0, 1): [Fraction(0)] * (d + 1)}
    for index, coef in phase.items():
        if index.alpha not in coeffs:
            return None
        coeffs[index.alpha][index.beta[1]] = coef
    phi1 = BinaryForm(d, tuple(coeffs[(1, 0)]))
    phi2 = BinaryForm(d, tuple(coeffs[(0, 1)]))
    if phi1.is_zero() or phi2.is_zero():
        logger.debug("Haz degenerado descartado")
        return None
    return build_pencil(phi1, phi2)


def pencil_delta_mod(pencil: PencilPhase) -> Fraction:
    """δ_mod = max(d/2, s)"""
    return max(Fraction(pencil.d, 2), Fraction(pencil.s))


def local_rates(pencil: PencilPhase) -> List[dict]:
    """
    Tasas locales por dirección real común

    Una dirección con multiplicidad común m₀ aporta 1/(2m₀) si m₀ > d/2
    y 1/d en otro caso; ambas con un factor logarítmico.
    """
    rates = []
    for entry in real_common_factors(pencil.phi1, pencil.phi2):
        m0 = entry.common
        rate = Fraction(1, 2 * m0) if 2 * m0 > pencil.d else Fraction(1, pencil.d)
        for direction in entry.directions:
            rates.append({"direction": format_direction(direction), "multiplicity": m0, "rate": rate})
    return rates


def pencil_rate(pencil: PencilPhase) -> DecayPrediction:
    """
    Tasa r = min(1/d, 1/(2s)) con un logaritmo; s = 0 da r = 1/d

    Args:
        pencil: Haz válido

    Returns:
        DecayPrediction con δ_mod adjunto
    """
    r = Fraction(1, pencil.d)
    if pencil.s > 0:
        r = min(r, Fraction(1, 2 * pencil.s))
    delta_mod = pencil_delta_mod(pencil)
    local = local_rates(pencil)
    overall = min([Fraction(1, pencil.d)] + [entry["rate"] for entry in local])
    assert overall == r
    phase = pencil.synthesize()
    ledger = [HypothesisEntry("pencil structure", "holds", "exact",
                              {"d": pencil.d, "s": pencil.s})]
    return DecayPrediction(
        r=r, p=1, source="Prop4.5", hypotheses=ledger,
        lower_bound_r=Fraction(phase.n_x + phase.n_z, 2 * phase.degree),
        candidates=[RateCandidate(r, 1, "Prop4.5")],
        extra={"delta_mod": delta_mod, "direction": format_direction(pencil.direction)},
        sharp_claim=True,
    )


class PencilController:
    """
    Controlador del subcomando pencil
    """

    def analyze(self, phi1: BinaryForm, phi2: BinaryForm) -> dict:
        """
        Calcula d, s, r y δ_mod de un haz

        Args:
            phi1: Primera forma
            phi2: Segunda forma

        Returns:
            Dict con resultado de la operación
        """
        try:
            pencil = build_pencil(phi1, phi2)
            prediction = pencil_rate(pencil)
            logger.info(f"Haz d={pencil.d}, s={pencil.s}: r = {prediction.r}")
            return {
                "success": True,
                "message": f"r = {prediction.r}",
                "d": pencil.d,
                "s": pencil.s,
                "r": prediction.to_dict()["r"],
                "delta_mod": prediction.to_dict()["delta_mod"],
                "direction": format_direction(pencil.direction),
                "local_rates": [{**e, "rate": str(e["rate"])} for e in local_rates(pencil)],
                "phase": pencil.synthesize().to_dict(),
            }
        except (DegreeError, ZeroFormError) as e:
            logger.error(f"❌ Haz inválido: {e}")
            return {"success": False, "message": str(e)}
