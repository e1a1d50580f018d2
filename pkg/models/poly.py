"""
Modelo de polinomios homogéneos en variables separadas
Aritmética exacta y dispersa sobre x ∈ R^{n_x}, z ∈ R^{n_z}
con coeficientes racionales (fractions.Fraction).
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import DegreeError, DimensionMismatchError, PhaseSpaceError

Coefficient = Union[int, Fraction, str]

_VARIABLE_RE = re.compile(r"^([xz])(\d+)$")


def to_fraction(value) -> Fraction:
    """
    Convierte un coeficiente a racional exacto

    Acepta enteros, Fraction, cadenas decimales o "p/q" y
    racionales de sympy (vía su representación en texto).

    Args:
        value: Valor a convertir

    Returns:
        Fraction equivalente
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    return Fraction(str(value).strip())


def format_fraction(value: Fraction) -> str:
    """Serializa un racional como "p/q" (o "p" si es entero)"""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class MultiIndex:
    """
    Par de multi-índices (alpha, beta) del monomio x^alpha z^beta
    """
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]

    def __post_init__(self):
        """Normaliza a tuplas de enteros y valida no negatividad"""
        alpha = tuple(int(a) for a in self.alpha)
        beta = tuple(int(b) for b in self.beta)
        if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
            raise ValueError(f"Exponentes negativos en {alpha}, {beta}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def x_degree(self) -> int:
        return sum(self.alpha)

    @property
    def z_degree(self) -> int:
        return sum(self.beta)

    @property
    def degree(self) -> int:
        return self.x_degree + self.z_degree

    @property
    def point(self) -> Tuple[int, ...]:
        """Punto (alpha, beta) de R^{n_x+n_z} usado por el poliedro de Newton"""
        return self.alpha + self.beta

    def shifted(self, var: int, delta: int) -> Optional["MultiIndex"]:
        """
        Suma delta al exponente de la variable var (índice global)

        Returns:
            Nuevo multi-índice o None si algún exponente queda negativo
        """
        exps = list(self.point)
        exps[var] += delta
        if exps[var] < 0:
            return None
        n_x = len(self.alpha)
        return MultiIndex(tuple(exps[:n_x]), tuple(exps[n_x:]))


def variable_index(var: Union[int, str], n_x: int, n_z: int) -> int:
    """
    Traduce un identificador de variable ("x1", "z2" o índice global) al índice global

    Args:
        var: Nombre de variable o índice 0..n_x+n_z-1
        n_x: Número de variables x
        n_z: Número de variables z

    Returns:
        Índice global (las x primero, luego las z)
    """
    if isinstance(var, (int, np.integer)):
        if not 0 <= var < n_x + n_z:
            raise DimensionMismatchError(f"Variable {var} fuera de rango para ({n_x}+{n_z})")
        return int(var)
    match = _VARIABLE_RE.match(str(var).strip())
    if not match:
        raise DimensionMismatchError(f"Nombre de variable inválido: {var!r}")
    kind, number = match.group(1), int(match.group(2))
    limit = n_x if kind == "x" else n_z
    if not 1 <= number <= limit:
        raise DimensionMismatchError(f"Variable {var} fuera de rango para ({n_x}+{n_z})")
    return number - 1 if kind == "x" else n_x + number - 1


def variable_names(n_x: int, n_z: int) -> List[str]:
    """Nombres de variables en orden global"""
    return [f"x{i + 1}" for i in range(n_x)] + [f"z{j + 1}" for j in range(n_z)]


def compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """
    Todas las tuplas de `parts` enteros no negativos que suman `total`
    (orden lexicográfico inverso, determinista)
    """
    if parts == 0:
        return [()] if total == 0 else []
    result = []
    for combo in combinations_with_replacement(range(parts), total):
        exps = [0] * parts
        for k in combo:
            exps[k] += 1
        result.append(tuple(exps))
    return result


class HomPoly:
    """
    Polinomio homogéneo de grado m en (x, z) con coeficientes racionales

    Los términos se guardan ordenados por multi-índice; el polinomio
    nulo conserva su grado declarado. Los valores son inmutables.
    """

    __slots__ = ("n_x", "n_z", "degree", "_terms")

    def __init__(self, n_x: int, n_z: int, degree: int,
                 terms: Optional[Mapping] = None):
        """
        Inicializa el polinomio

        Args:
            n_x: Número de variables x
            n_z: Número de variables z
            degree: Grado m (>= 0)
            terms: Mapa MultiIndex (o par (alpha, beta)) -> coeficiente
        """
        if n_x < 0 or n_z < 0:
            raise DimensionMismatchError(f"Dimensiones inválidas ({n_x}+{n_z})")
        if degree < 0:
            raise DegreeError(f"Grado negativo: {degree}")
        clean: Dict[MultiIndex, Fraction] = {}
        for key, coef in (terms or {}).items():
            index = key if isinstance(key, MultiIndex) else MultiIndex(*key)
            if len(index.alpha) != n_x or len(index.beta) != n_z:
                raise DimensionMismatchError(
                    f"Multi-índice {index.alpha}/{index.beta} no corresponde a ({n_x}+{n_z})")
            if index.degree != degree:
                raise DegreeError(f"Monomio de grado {index.degree} en polinomio de grado {degree}")
            value = to_fraction(coef)
            if value != 0:
                clean[index] = value
        object.__setattr__(self, "n_x", n_x)
        object.__setattr__(self, "n_z", n_z)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("HomPoly es inmutable")

    # =============== CONSTRUCTORES ===============

    @classmethod
    def zero(cls, n_x: int, n_z: int, degree: int) -> "HomPoly":
        return HomPoly(n_x, n_z, degree)

    @classmethod
    def constant(cls, n_x: int, n_z: int, value: Coefficient) -> "HomPoly":
        return HomPoly(n_x, n_z, 0, {MultiIndex((0,) * n_x, (0,) * n_z): value})

    @classmethod
    def variable(cls, n_x: int, n_z: int, var: Union[int, str]) -> "HomPoly":
        k = variable_index(var, n_x, n_z)
        exps = [0] * (n_x + n_z)
        exps[k] = 1
        return HomPoly(n_x, n_z, 1, {MultiIndex(tuple(exps[:n_x]), tuple(exps[n_x:])): 1})

    @classmethod
    def linear_form(cls, n_x: int, n_z: int, coefficients: Sequence[Coefficient]) -> "HomPoly":
        """Forma lineal Σ c_k v_k en las n_x+n_z variables"""
        if len(coefficients) != n_x + n_z:
            raise DimensionMismatchError("Longitud de coeficientes incorrecta")
        terms = {}
        for k, c in enumerate(coefficients):
            exps = [0] * (n_x + n_z)
            exps[k] = 1
            terms[MultiIndex(tuple(exps[:n_x]), tuple(exps[n_x:]))] = c
        return HomPoly(n_x, n_z, 1, terms)

    # =============== ACCESO ===============

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
        return self._terms.get(MultiIndex(tuple(alpha), tuple(beta)), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def support(self) -> List[Tuple[int, ...]]:
        """Puntos (alpha, beta) con coeficiente no nulo"""
        return [index.point for index in self._terms]

    def depends_on(self, var: Union[int, str]) -> bool:
        k = variable_index(var, self.n_x, self.n_z)
        return any(index.point[k] > 0 for index in self._terms)

    # =============== ARITMÉTICA ===============

    def _check_shape(self, other: "HomPoly"):
        if (self.n_x, self.n_z) != (other.n_x, other.n_z):
            raise DimensionMismatchError(
                f"Dimensiones distintas: ({self.n_x}+{self.n_z}) vs ({other.n_x}+{other.n_z})")

    def _build(self, degree: int, terms: Mapping) -> "HomPoly":
        return HomPoly(self.n_x, self.n_z, degree, terms)

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if not isinstance(other, HomPoly):
            return NotImplemented
        self._check_shape(other)
        if self.degree != other.degree:
            if other.is_zero():
                return HomPoly(self.n_x, self.n_z, self.degree, self._terms)
            if self.is_zero():
                return HomPoly(other.n_x, other.n_z, other.degree, other._terms)
            raise DegreeError(f"Suma de grados distintos: {self.degree} y {other.degree}")
        terms = dict(self._terms)
        for index, coef in other._terms.items():
            terms[index] = terms.get(index, 0) + coef
        return HomPoly(self.n_x, self.n_z, self.degree, terms)

    def __neg__(self) -> "HomPoly":
        return HomPoly(self.n_x, self.n_z, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        if not isinstance(other, HomPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Coefficient) -> "HomPoly":
        factor = to_fraction(factor)
        return HomPoly(self.n_x, self.n_z, self.degree, {k: c * factor for k, c in self._terms.items()})

    def __mul__(self, other) -> "HomPoly":
        if isinstance(other, HomPoly):
            self._check_shape(other)
            terms: Dict[MultiIndex, Fraction] = {}
            for a, ca in self._terms.items():
                for b, cb in other._terms.items():
                    key = MultiIndex(tuple(p + q for p, q in zip(a.alpha, b.alpha)),
                                     tuple(p + q for p, q in zip(a.beta, b.beta)))
                    terms[key] = terms.get(key, 0) + ca * cb
            return HomPoly(self.n_x, self.n_z, self.degree + other.degree, terms)
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "HomPoly":
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "HomPoly":
        if exponent < 0:
            raise DegreeError("Potencia negativa")
        result = HomPoly.constant(self.n_x, self.n_z, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomPoly):
            return NotImplemented
        return ((self.n_x, self.n_z, self.degree) == (other.n_x, other.n_z, other.degree)
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.n_x, self.n_z, self.degree, tuple(self._terms.items())))

    # =============== CÁLCULO ===============

    def eval(self, point: Sequence) -> Union[Fraction, float]:
        """
        Evalúa Σ c_{αβ} x^α z^β en un punto

        El resultado es exacto si todas las coordenadas son racionales
        (int o Fraction) y flotante en otro caso.

        Args:
            point: Vector de longitud n_x + n_z

        Returns:
            Valor del polinomio
        """
        if len(point) != self.n_x + self.n_z:
            raise DimensionMismatchError(
                f"Punto de longitud {len(point)} para ({self.n_x}+{self.n_z})")
        exact = all(isinstance(v, (int, Fraction, np.integer)) for v in point)
        values = [to_fraction(v) for v in point] if exact else [float(v) for v in point]
        total = Fraction(0) if exact else 0.0
        for index, coef in self._terms.items():
            term = coef if exact else float(coef)
            for v, e in zip(values, index.point):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """
        Evaluación vectorizada en flotantes

        Args:
            points: Arreglo (N, n_x+n_z)

        Returns:
            Arreglo (N,) de valores
        """
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.n_x + self.n_z:
            raise DimensionMismatchError(f"Forma de puntos inválida: {points.shape}")
        values = np.zeros(points.shape[0])
        for index, coef in self._terms.items():
            values += float(coef) * np.prod(points ** np.array(index.point), axis=1)
        return values

    def partial(self, var: Union[int, str]) -> "HomPoly":
        """
        Derivada parcial exacta respecto de una variable

        Args:
            var: "x1".."x{n_x}", "z1".."z{n_z}" o índice global

        Returns:
            Polinomio de grado max(m-1, 0)
        """
        k = variable_index(var, self.n_x, self.n_z)
        terms = {}
        for index, coef in self._terms.items():
            exponent = index.point[k]
            if exponent:
                terms[index.shifted(k, -1)] = coef * exponent
        return HomPoly(self.n_x, self.n_z, max(self.degree - 1, 0), terms)

    def gradient_matrix(self, block: str = "x") -> Tuple[List[MultiIndex], List[List[Fraction]]]:
        """
        Matriz de coeficientes de las derivadas parciales de un bloque

        Fila i: coeficientes de ∂S/∂(variable i del bloque) sobre una base
        común de monomios. Su núcleo izquierdo son las direcciones en las
        que S no depende del bloque.
        """
        names = [f"{block}{i + 1}" for i in range(self.n_x if block == "x" else self.n_z)]
        partials = [self.partial(name) for name in names]
        basis = sorted({index for p in partials for index in p.terms})
        rows = [[p.coefficient(b.alpha, b.beta) for b in basis] for p in partials]
        return basis, rows

    def substitute_linear(self, a_matrix: Optional[Sequence[Sequence]] = None,
                          b_matrix: Optional[Sequence[Sequence]] = None) -> "HomPoly":
        """
        Devuelve S(Ax, Bz) con matrices racionales exactas

        Args:
            a_matrix: Matriz n_x×n_x (None = identidad)
            b_matrix: Matriz n_z×n_z (None = identidad)

        Returns:
            Polinomio transformado del mismo grado
        """
        n = self.n_x + self.n_z
        forms: List[HomPoly] = []
        for i in range(self.n_x):
            row = [0] * n
            if a_matrix is None:
                row[i] = 1
            else:
                if len(a_matrix) != self.n_x or any(len(r) != self.n_x for r in a_matrix):
                    raise DimensionMismatchError("A debe ser n_x×n_x")
                row[:self.n_x] = [to_fraction(v) for v in a_matrix[i]]
            forms.append(HomPoly.linear_form(self.n_x, self.n_z, row))
        for j in range(self.n_z):
            row = [0] * n
            if b_matrix is None:
                row[self.n_x + j] = 1
            else:
                if len(b_matrix) != self.n_z or any(len(r) != self.n_z for r in b_matrix):
                    raise DimensionMismatchError("B debe ser n_z×n_z")
                row[self.n_x:] = [to_fraction(v) for v in b_matrix[j]]
            forms.append(HomPoly.linear_form(self.n_x, self.n_z, row))

        powers: Dict[Tuple[int, int], HomPoly] = {}

        def power(k: int, e: int) -> HomPoly:
            if (k, e) not in powers:
                powers[(k, e)] = forms[k] ** e
            return powers[(k, e)]

        result = HomPoly.zero(self.n_x, self.n_z, self.degree)
        for index, coef in self._terms.items():
            term = HomPoly.constant(self.n_x, self.n_z, coef)
            for k, e in enumerate(index.point):
                if e:
                    term = term * power(k, e)
            result = result + term
        return HomPoly(self.n_x, self.n_z, self.degree, result._terms)

    def swap_roles(self) -> "HomPoly":
        """Devuelve S(z, x): intercambia los papeles de x y z"""
        return HomPoly(self.n_z, self.n_x, self.degree,
                       {MultiIndex(k.beta, k.alpha): c for k, c in self._terms.items()})

    def max_partial_bound(self, var: Union[int, str], radius: float) -> float:
        """
        Cota de |∂S/∂var| sobre el cubo [-radius, radius]^N por norma de coeficientes
        """
        derivative = self.partial(var)
        if derivative.is_zero():
            return 0.0
        return sum(abs(float(c)) for c in derivative._terms.values()) * radius ** derivative.degree

    # =============== SERIALIZACIÓN ===============

    def to_dict(self) -> dict:
        """
        Convierte el polinomio al formato JSON de fases

        Returns:
            Dict {"nx", "nz", "m", "terms": [{"alpha", "beta", "coef"}]}
        """
        return {
            "nx": self.n_x,
            "nz": self.n_z,
            "m": self.degree,
            "terms": [
                {"alpha": list(k.alpha), "beta": list(k.beta), "coef": format_fraction(c)}
                for k, c in self._terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HomPoly":
        """
        Crea un polinomio desde el formato JSON de fases

        Args:
            data: Diccionario con nx, nz, m y terms

        Returns:
            Instancia de HomPoly
        """
        terms = {}
        for term in data.get("terms", []):
            index = MultiIndex(tuple(term["alpha"]), tuple(term["beta"]))
            terms[index] = terms.get(index, 0) + to_fraction(term["coef"])
        return cls(int(data["nx"]), int(data["nz"]), int(data["m"]), terms)

    def to_text(self) -> str:
        """Expresión legible como "x1^2*z1 + 2*x1*z2^2" """
        if self.is_zero():
            return "0"
        names = variable_names(self.n_x, self.n_z)
        pieces = []
        for index, coef in self._terms.items():
            factors = []
            for name, e in zip(names, index.point):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coef)
            if not factors:
                body = format_fraction(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{format_fraction(magnitude)}*" + "*".join(factors)
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(({self.n_x}+{self.n_z}), m={self.degree}, '{self.to_text()}')"


class PhasePoly(HomPoly):
    """
    Fase en 𝔖^m: polinomio homogéneo sin monomios puros en x ni en z
    """

    __slots__ = ()

    def __init__(self, n_x: int, n_z: int, degree: int, terms: Optional[Mapping] = None):
        super().__init__(n_x, n_z, degree, terms)
        for index in self._terms:
            if index.x_degree == 0 or index.z_degree == 0:
                raise PhaseSpaceError(f"Monomio puro no permitido en una fase: {index.alpha}/{index.beta}")

    @classmethod
    def from_hompoly(cls, poly: HomPoly) -> "PhasePoly":
        """Envuelve un HomPoly validando la pertenencia a 𝔖^m"""
        return cls(poly.n_x, poly.n_z, poly.degree, poly.terms)

    def substitute_linear(self, a_matrix=None, b_matrix=None) -> "PhasePoly":
        return PhasePoly.from_hompoly(super().substitute_linear(a_matrix, b_matrix))

    def swap_roles(self) -> "PhasePoly":
        return PhasePoly.from_hompoly(super().swap_roles())


def dim_phase_space(m: int, n_x: int, n_z: int) -> int:
    """
    Dimensión del espacio de fases 𝔖^m R^{n_x+n_z}

    Args:
        m: Grado (>= 2)
        n_x: Número de variables x (>= 1)
        n_z: Número de variables z (>= 1)

    Returns:
        binom(m+N-1, m) - binom(m+n_x-1, m) - binom(m+n_z-1, m)
    """
    if m < 2 or n_x < 1 or n_z < 1:
        raise DegreeError(f"Parámetros fuera de rango: m={m}, n_x={n_x}, n_z={n_z}")
    return comb(m + n_x + n_z - 1, m) - comb(m + n_x - 1, m) - comb(m + n_z - 1, m)


def phase_monomials(n_x: int, n_z: int, m: int) -> List[MultiIndex]:
    """Enumera los monomios x^α z^β de grado m con |α|, |β| > 0"""
    monomials = []
    for x_degree in range(1, m):
        for alpha in compositions(x_degree, n_x):
            for beta in compositions(m - x_degree, n_z):
                monomials.append(MultiIndex(alpha, beta))
    return sorted(monomials)


def random_phase(n_x: int, n_z: int, m: int, rng: np.random.Generator,
                 height: int = 20, denominator: int = 7) -> PhasePoly:
    """
    Fase aleatoria con coeficientes racionales independientes

    Cada coeficiente es k/q con k uniforme en [-height, height] y
    q uniforme en [1, denominator].

    Args:
        n_x: Número de variables x
        n_z: Número de variables z
        m: Grado
        rng: Generador de numpy
        height: Cota del numerador
        denominator: Cota del denominador

    Returns:
        PhasePoly no nulo
    """
    monomials = phase_monomials(n_x, n_z, m)
    while True:
        numerators = rng.integers(-height, height + 1, size=len(monomials))
        denominators = rng.integers(1, denominator + 1, size=len(monomials))
        terms = {index: Fraction(int(p), int(q)) for index, p, q in zip(monomials, numerators, denominators)}
        phase = PhasePoly(n_x, n_z, m, terms)
        if not phase.is_zero():
            return phase


def polynomial_determinant(rows: Sequence[Sequence[HomPoly]]) -> HomPoly:
    """
    Determinante exacto de una matriz cuadrada de polinomios (expansión por cofactores)

    Args:
        rows: Matriz k×k de HomPoly con las mismas dimensiones

    Returns:
        HomPoly del determinante
    """
    size = len(rows)
    if size == 0:
        raise DimensionMismatchError("Matriz vacía")
    if any(len(r) != size for r in rows):
        raise DimensionMismatchError("La matriz debe ser cuadrada")
    if size == 1:
        return rows[0][0]
    result: Optional[HomPoly] = None
    for col in range(size):
        minor = [list(r[:col]) + list(r[col + 1:]) for r in rows[1:]]
        term = rows[0][col] * polynomial_determinant(minor)
        if col % 2:
            term = -term
        result = term if result is None else result + term
    return result


def sum_of_squares(polys: Iterable[HomPoly]) -> HomPoly:
    """Σ p² de una colección de polinomios del mismo grado"""
    result = None
    for p in polys:
        square = p * p
        result = square if result is None else result + square
    if result is None:
        raise DimensionMismatchError("Colección vacía")
    return result
