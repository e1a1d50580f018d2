"""
Modelos de reportes y resultados
Todos los racionales se serializan como cadenas "p/q".
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.binary_form import BinaryForm
from models.poly import HomPoly, MultiIndex, PhasePoly, format_fraction, to_fraction

Matrix2 = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


def _fmt(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else format_fraction(value)


def _matrix(rows: Sequence[Sequence]) -> Matrix2:
    return tuple(tuple(to_fraction(v) for v in row) for row in rows)


def _fmt_matrix(rows) -> List[List[str]]:
    return [[format_fraction(v) for v in row] for row in rows]


@dataclass(frozen=True)
class QuadraticFormPQR:
    """
    Bloques de Φ(x, z) = ½xᵗPx + xᵗQz + ½zᵗRz para cúbicas (2+2)
    """
    P: Matrix2
    Q: Matrix2
    R: Matrix2

    def __post_init__(self):
        object.__setattr__(self, "P", _matrix(self.P))
        object.__setattr__(self, "Q", _matrix(self.Q))
        object.__setattr__(self, "R", _matrix(self.R))
        if self.P[0][1] != self.P[1][0] or self.R[0][1] != self.R[1][0]:
            raise ValueError("P y R deben ser simétricas")

    def synthesize(self) -> HomPoly:
        """Polinomio ½xᵗPx + xᵗQz + ½zᵗRz en (2+2) variables"""
        terms: Dict[MultiIndex, Fraction] = {}

        def add(alpha, beta, value):
            key = MultiIndex(alpha, beta)
            terms[key] = terms.get(key, 0) + value

        unit = ((1, 0), (0, 1))
        zero = (0, 0)
        for a in range(2):
            for b in range(2):
                add(tuple(p + q for p, q in zip(unit[a], unit[b])), zero, self.P[a][b] / 2)
                add(zero, tuple(p + q for p, q in zip(unit[a], unit[b])), self.R[a][b] / 2)
                add(unit[a], unit[b], self.Q[a][b])
        return HomPoly(2, 2, 2, terms)

    def block_matrix(self) -> List[List[Fraction]]:
        """Matriz simétrica 4×4 [[P, Q], [Qᵗ, R]]"""
        p, q, r = self.P, self.Q, self.R
        return [
            [p[0][0], p[0][1], q[0][0], q[0][1]],
            [p[1][0], p[1][1], q[1][0], q[1][1]],
            [q[0][0], q[1][0], r[0][0], r[0][1]],
            [q[0][1], q[1][1], r[1][0], r[1][1]],
        ]

    def to_dict(self) -> dict:
        return {"P": _fmt_matrix(self.P), "Q": _fmt_matrix(self.Q), "R": _fmt_matrix(self.R)}

    @classmethod
    def from_dict(cls, data: dict) -> "QuadraticFormPQR":
        return cls(data["P"], data["Q"], data["R"])


@dataclass
class Thm14Report:
    """
    Hipótesis del teorema de decaimiento λ^{-2/3} para cúbicas (2+2)

    witnesses guarda los cuatro determinantes y las cuatro resultantes;
    un valor None significa "no evaluable" (falla la no singularidad).
    """
    cond_18: bool
    cond_19: bool
    cond_111: bool
    cond_112: bool
    applicable_112: bool
    witnesses: Dict[str, Optional[Fraction]] = field(default_factory=dict)
    matrices: Dict[str, List[List[Fraction]]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Todas las condiciones aplicables se cumplen"""
        return (self.cond_18 and self.cond_19 and self.cond_111
                and (self.cond_112 or not self.applicable_112))

    def to_dict(self) -> dict:
        return {
            "cond_18": self.cond_18,
            "cond_19": self.cond_19,
            "cond_111": self.cond_111,
            "cond_112": self.cond_112,
            "applicable_112": self.applicable_112,
            "passed": self.passed,
            "witnesses": {k: _fmt(v) for k, v in self.witnesses.items()},
            "matrices": {k: _fmt_matrix(v) for k, v in self.matrices.items()},
            "notes": list(self.notes),
        }


@dataclass
class GeometryReport:
    """
    Clasificación de la variedad crítica Σ = {Φ = 0} de una cúbica (2+2)
    """
    signature: Tuple[int, int, int]
    phi_definite: bool
    sigma_tilde_empty: bool
    route: str
    definiteness: Dict[str, str]
    gamma_R: str
    gamma_L: str
    null_directions: Dict[str, List[List[float]]]

    def to_dict(self) -> dict:
        return {
            "signature": {"positive": self.signature[0], "negative": self.signature[1],
                          "zero": self.signature[2]},
            "phi_definite": self.phi_definite,
            "sigma_tilde_empty": self.sigma_tilde_empty,
            "route": self.route,
            "definiteness": dict(self.definiteness),
            "gamma_R": self.gamma_R,
            "gamma_L": self.gamma_L,
            "null_directions": {k: [list(v) for v in vs] for k, vs in self.null_directions.items()},
        }


@dataclass
class NewtonData:
    """
    Poliedro de Newton: soporte, distancia δ y pesos certificados
    """
    support: List[Tuple[int, ...]]
    delta: Fraction
    certificate: List[Fraction]
    lower_bound_ok: bool = True

    def combination(self) -> List[Fraction]:
        """Σ w_i p_i, componente a componente"""
        dim = len(self.support[0])
        return [sum(w * p[c] for w, p in zip(self.certificate, self.support)) for c in range(dim)]

    def to_dict(self) -> dict:
        return {
            "delta": format_fraction(self.delta),
            "support": [list(p) for p in self.support],
            "certificate": [format_fraction(w) for w in self.certificate],
        }


@dataclass
class ModifiedNewtonResult:
    """
    δ_mod: cota inferior certificada (o valor exacto en el caso de haces)
    """
    delta: Fraction
    exact: bool
    transform_A: List[List[Fraction]]
    transform_B: List[List[Fraction]]
    newton: NewtonData
    candidates: int
    method: str

    def to_dict(self) -> dict:
        return {
            "delta": format_fraction(self.delta),
            "exact": self.exact,
            "kind": "exact" if self.exact else "certified lower bound",
            "method": self.method,
            "candidates": self.candidates,
            "transform_A": _fmt_matrix(self.transform_A),
            "transform_B": _fmt_matrix(self.transform_B),
            "certificate": self.newton.to_dict(),
        }


@dataclass
class HypothesisEntry:
    """
    Entrada del registro de hipótesis: condición, estado y método
    """
    condition: str
    status: str
    method: str
    detail: Optional[dict] = None

    def to_dict(self) -> dict:
        data = {"condition": self.condition, "status": self.status, "method": self.method}
        if self.detail:
            data["detail"] = self.detail
        return data


@dataclass
class RateCandidate:
    """Tasa (r, p) propuesta por un teorema aplicable"""
    r: Fraction
    p: int
    source: str

    def to_dict(self) -> dict:
        return {"r": format_fraction(self.r), "p": self.p, "source": self.source}


@dataclass
class DecayPrediction:
    """
    Predicción ‖T_λ‖ <= Cλ^{-r}(log λ)^p con su registro de hipótesis
    """
    r: Optional[Fraction]
    p: int
    source: Optional[str]
    hypotheses: List[HypothesisEntry]
    lower_bound_r: Fraction
    lower_bound_r_rank: Optional[Fraction] = None
    candidates: List[RateCandidate] = field(default_factory=list)
    adjoint: bool = False
    status: str = "ok"
    extra: Dict[str, object] = field(default_factory=dict)
    sharp_claim: Optional[bool] = None

    @property
    def sharp(self) -> bool:
        """La tasa coincide con la mejor cota inferior conocida"""
        if self.r is None:
            return False
        if self.sharp_claim is not None:
            return self.sharp_claim
        bounds = [b for b in (self.lower_bound_r, self.lower_bound_r_rank) if b is not None]
        return self.r == min(bounds)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "r": _fmt(self.r),
            "p": self.p,
            "source": self.source,
            "lower_bound_r": format_fraction(self.lower_bound_r),
            "lower_bound_r_rank": _fmt(self.lower_bound_r_rank),
            "sharp": self.sharp,
            "adjoint": self.adjoint,
            "candidates": [c.to_dict() for c in self.candidates],
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            **{k: (format_fraction(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()},
        }


def smooth_bump(t: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1-t²)) en (-1, 1), cero fuera; máximo 1 en t = 0"""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


@dataclass(frozen=True)
class AmplitudeSpec:
    """
    Amplitud producto a(x, z) = Π_k g_k(coordenada k) sobre una caja

    kind: "smooth" (bump C₀^∞ reescalado a la caja) o "constant" (1 en la caja)
    """
    box: Tuple[Tuple[float, float], ...]
    kind: str = "smooth"

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if any(hi <= lo for lo, hi in box):
            raise ValueError(f"Caja inválida: {box}")
        if self.kind not in ("smooth", "constant"):
            raise ValueError(f"Tipo de amplitud desconocido: {self.kind}")
        object.__setattr__(self, "box", box)

    @classmethod
    def uniform(cls, dimension: int, low: float = -1.0, high: float = 1.0,
                kind: str = "smooth") -> "AmplitudeSpec":
        """Misma caja [low, high] en todos los ejes"""
        return cls(tuple((low, high) for _ in range(dimension)), kind)

    @property
    def dimension(self) -> int:
        return len(self.box)

    def axis_values(self, axis: int, nodes: np.ndarray) -> np.ndarray:
        """Factor g_k evaluado en nodos del eje k"""
        lo, hi = self.box[axis]
        if self.kind == "constant":
            return ((nodes >= lo) & (nodes <= hi)).astype(float)
        return smooth_bump((2.0 * np.asarray(nodes) - (lo + hi)) / (hi - lo))

    def to_dict(self) -> dict:
        return {"box": [list(b) for b in self.box], "kind": self.kind}


@dataclass
class NormRow:
    """Una fila del barrido en λ"""
    lam: float
    norm: float
    grid_n: int
    iters: int
    residual: float
    resolved: bool
    converged: bool = True

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "norm": self.norm, "grid_n": self.grid_n,
                "iters": self.iters, "residual": self.residual, "resolved": self.resolved,
                "converged": self.converged}


@dataclass
class NormSweepResult:
    """
    Barrido de ‖T_λ‖ y pendiente ajustada de log‖T_λ‖ frente a log λ
    """
    rows: List[NormRow]
    slope: Optional[float]
    stderr: Optional[float]
    window: Tuple[float, float]
    intercept: Optional[float] = None
    excluded: List[float] = field(default_factory=list)
    seed: int = 0
    # λ bajo la regla de oscilación que entraron al ajuste por tope de malla explícito
    under_resolved: List[float] = field(default_factory=list)

    def accepted_rows(self) -> List[NormRow]:
        lo, hi = self.window
        return [row for row in self.rows if row.lam not in self.excluded and lo <= row.lam <= hi]

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "window": list(self.window),
            "excluded": list(self.excluded),
            "under_resolved": list(self.under_resolved),
            "seed": self.seed,
            "rows": [row.to_dict() for row in self.rows],
        }


@dataclass
class PencilPhase:
    """
    Fase de haz S = x₁φ₁(z) + x₂φ₂(z) con s y la dirección que lo alcanza
    """
    d: int
    phi1: BinaryForm
    phi2: BinaryForm
    s: int
    direction: Optional[Tuple] = None

    def synthesize(self) -> PhasePoly:
        """Fase homogénea de grado d+1 en (2+2) variables"""
        terms = {}
        for x_index, form in ((0, self.phi1), (1, self.phi2)):
            alpha = (1, 0) if x_index == 0 else (0, 1)
            for k, c in enumerate(form.coeffs):
                if c:
                    terms[MultiIndex(alpha, (self.d - k, k))] = c
        return PhasePoly(2, 2, self.d + 1, terms)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "s": self.s,
            "phi1": self.phi1.to_dict(),
            "phi2": self.phi2.to_dict(),
            "direction": None if self.direction is None else [
                format_fraction(c) if isinstance(c, Fraction) else float(c) for c in self.direction],
        }


@dataclass
class WitnessRow:
    """
    Cociente ‖T_λ f_λ‖/‖f_λ‖ del testigo de cota inferior en un λ
    """
    lam: float
    ratio: float
    grid_n: int
    support_points: int
    refined: bool = False

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "ratio": self.ratio, "grid_n": self.grid_n,
                "support_points": self.support_points, "refined": self.refined}
