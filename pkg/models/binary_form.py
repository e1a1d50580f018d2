"""
Modelo de formas binarias: polinomios homogéneos en dos variables (u, v)
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy as sp

from core.errors import DegreeError, DimensionMismatchError
from models.poly import HomPoly, MultiIndex, format_fraction, to_fraction

U, V = sp.symbols("u v")


@dataclass(frozen=True)
class BinaryForm:
    """
    Forma binaria de grado d: Σ_k c_k u^{d-k} v^k

    coeffs[k] es el coeficiente de u^{d-k} v^k (potencias de u descendentes).
    """
    degree: int
    coeffs: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeError(f"Grado negativo: {self.degree}")
        coeffs = tuple(to_fraction(c) for c in self.coeffs) or (Fraction(0),) * (self.degree + 1)
        if len(coeffs) != self.degree + 1:
            raise DimensionMismatchError(
                f"Una forma de grado {self.degree} requiere {self.degree + 1} coeficientes")
        object.__setattr__(self, "coeffs", coeffs)

    # =============== CONSTRUCTORES ===============

    @classmethod
    def from_list(cls, coeffs: Sequence) -> "BinaryForm":
        """Forma a partir de coeficientes en potencias de u descendentes"""
        if not coeffs:
            raise DimensionMismatchError("Lista de coeficientes vacía")
        return cls(len(coeffs) - 1, tuple(coeffs))

    @classmethod
    def from_sympy(cls, expr, degree: int = None) -> "BinaryForm":
        """
        Convierte una expresión o Poly de sympy en (u, v)

        Args:
            expr: Expresión homogénea en u, v
            degree: Grado declarado (obligatorio para la forma nula)

        Returns:
            Instancia de BinaryForm
        """
        poly = expr if isinstance(expr, sp.Poly) else sp.Poly(sp.expand(expr), U, V, domain="QQ")
        if poly.is_zero:
            if degree is None:
                raise DegreeError("La forma nula requiere grado explícito")
            return cls(degree)
        total = poly.total_degree()
        if degree is not None and degree != total:
            raise DegreeError(f"Grado {total} distinto del declarado {degree}")
        coeffs = [Fraction(0)] * (total + 1)
        for (a, b), c in poly.terms():
            if a + b != total:
                raise DegreeError("La forma binaria debe ser homogénea")
            coeffs[b] = Fraction(int(c.p), int(c.q))
        return cls(total, tuple(coeffs))

    @classmethod
    def from_hompoly(cls, poly: HomPoly) -> "BinaryForm":
        """Forma binaria de un HomPoly en exactamente dos variables (x o z)"""
        if poly.n_x + poly.n_z != 2:
            raise DimensionMismatchError("Se requieren exactamente dos variables")
        coeffs = [Fraction(0)] * (poly.degree + 1)
        for index, coef in poly.items():
            coeffs[index.point[1]] = coef
        return cls(poly.degree, tuple(coeffs))

    @classmethod
    def from_quadratic_matrix(cls, matrix: Sequence[Sequence]) -> "BinaryForm":
        """
        Forma cuadrática wᵗMw de una matriz simétrica 2×2

        Returns:
            BinaryForm de grado 2 con coeficientes (M00, 2·M01, M11)
        """
        m00, m01 = to_fraction(matrix[0][0]), to_fraction(matrix[0][1])
        m10, m11 = to_fraction(matrix[1][0]), to_fraction(matrix[1][1])
        return cls(2, (m00, m01 + m10, m11))

    # =============== CONSULTAS ===============

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_sympy(self) -> sp.Poly:
        """Poly de sympy en (u, v) con dominio QQ"""
        expr = sum(sp.Rational(c.numerator, c.denominator) * U ** (self.degree - k) * V ** k
                   for k, c in enumerate(self.coeffs))
        return sp.Poly(expr, U, V, domain="QQ")

    def to_hompoly(self, n_x: int = 0, n_z: int = 2) -> HomPoly:
        """Forma como HomPoly en (z1, z2) (o en (x1, x2) si n_x = 2)"""
        terms = {}
        for k, c in enumerate(self.coeffs):
            exps = (self.degree - k, k)
            if n_x == 2:
                terms[MultiIndex(exps, (0,) * n_z)] = c
            else:
                terms[MultiIndex((0,) * n_x, exps)] = c
        return HomPoly(n_x, n_z, self.degree, terms)

    def eval(self, u, v):
        return sum(c * u ** (self.degree - k) * v ** k for k, c in enumerate(self.coeffs))

    def scale(self, factor) -> "BinaryForm":
        factor = to_fraction(factor)
        return BinaryForm(self.degree, tuple(c * factor for c in self.coeffs))

    def substitute(self, matrix: Sequence[Sequence]) -> "BinaryForm":
        """
        Cambio lineal de variables (u, v) ↦ B(u, v)

        Args:
            matrix: Matriz racional 2×2 B

        Returns:
            Forma f(B00·u + B01·v, B10·u + B11·v)
        """
        b = [[sp.Rational(str(to_fraction(x))) for x in row] for row in matrix]
        expr = self.to_sympy().as_expr().subs({U: b[0][0] * U + b[0][1] * V,
                                                V: b[1][0] * U + b[1][1] * V}, simultaneous=True)
        return BinaryForm.from_sympy(sp.expand(expr), self.degree)

    def nondegenerate(self) -> bool:
        """
        True si la forma no tiene factores lineales complejos repetidos
        (equivalente a ∇f ≠ 0 fuera del origen)
        """
        if self.is_zero():
            return False
        if self.degree == 0:
            return True
        _, factors = sp.sqf_list(self.to_sympy())
        return all(multiplicity == 1 for _, multiplicity in factors)

    def to_text(self) -> str:
        """Expresión en (z1, z2)"""
        return self.to_hompoly().to_text()

    def to_list(self) -> List[str]:
        return [format_fraction(c) for c in self.coeffs]

    def to_dict(self) -> dict:
        return {"degree": self.degree, "coeffs": self.to_list()}

    @classmethod
    def from_dict(cls, data: dict) -> "BinaryForm":
        return cls(int(data["degree"]), tuple(data["coeffs"]))
