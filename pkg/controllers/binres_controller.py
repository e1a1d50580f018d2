"""
Controlador de resultantes y factores lineales de formas binarias
Todas las operaciones son exactas sobre los racionales.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from core.errors import DegreeError, ZeroFormError
from models.binary_form import BinaryForm, U, V
from models.poly import format_fraction, to_fraction

logger = logging.getLogger(__name__)


def _require_nonzero(*forms: BinaryForm):
    for form in forms:
        if form.is_zero():
            raise ZeroFormError("La forma binaria nula no está permitida")


def sylvester_matrix(f: BinaryForm, g: BinaryForm) -> sp.Matrix:
    """
    Matriz de Sylvester (d₁+d₂)×(d₁+d₂) de dos formas binarias

    Las d₂ primeras filas son desplazamientos de f, las d₁ siguientes de g.
    """
    size = f.degree + g.degree
    rows = []
    for shift in range(g.degree):
        row = [0] * size
        for k, c in enumerate(f.coeffs):
            row[shift + k] = sp.Rational(c.numerator, c.denominator)
        rows.append(row)
    for shift in range(f.degree):
        row = [0] * size
        for k, c in enumerate(g.coeffs):
            row[shift + k] = sp.Rational(c.numerator, c.denominator)
        rows.append(row)
    return sp.Matrix(rows) if rows else sp.zeros(0, 0)


def resultant(f: BinaryForm, g: BinaryForm) -> Fraction:
    """
    Resultante de dos formas binarias no nulas

    Se anula exactamente cuando f y g comparten una raíz proyectiva compleja.

    Args:
        f: Forma de grado d₁
        g: Forma de grado d₂

    Returns:
        Determinante de Sylvester como Fraction
    """
    _require_nonzero(f, g)
    if f.degree + g.degree == 0:
        return Fraction(1)
    value = sylvester_matrix(f, g).det(method="bareiss")
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _normalize(poly: sp.Poly) -> BinaryForm:
    """Forma con el primer coeficiente no nulo (u descendente) igual a 1"""
    form = BinaryForm.from_sympy(poly)
    lead = next(c for c in form.coeffs if c != 0)
    return form.scale(1 / lead)


def gcd_form(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """
    Máximo común divisor normalizado de dos formas

    Incluye el factor común en potencias de v. El resultado tiene su
    primer coeficiente no nulo igual a 1.

    Args:
        f: Forma no nula
        g: Forma no nula

    Returns:
        BinaryForm del mcd (grado 0 si son coprimas)
    """
    _require_nonzero(f, g)
    common = sp.gcd(f.to_sympy(), g.to_sympy())
    return _normalize(common)


def _multiplicity(poly: sp.Poly, factor: sp.Poly) -> int:
    """Número de veces que factor divide exactamente a poly"""
    count = 0
    current = poly
    while not current.is_zero:
        quotient, remainder = sp.div(current, factor)
        if not remainder.is_zero:
            break
        count += 1
        current = quotient
        if current.total_degree() < factor.total_degree():
            break
    return count


def real_linear_multiplicity(f: BinaryForm, direction: Sequence) -> int:
    """
    Multiplicidad exacta de la forma lineal a·u + b·v en f

    Args:
        f: Forma no nula
        direction: Par racional (a, b) ≠ (0, 0)

    Returns:
        Entero k >= 0 con (a·u+b·v)^k | f
    """
    a, b = (to_fraction(direction[0]), to_fraction(direction[1]))
    if a == 0 and b == 0:
        raise ValueError("La dirección (0, 0) no define una forma lineal")
    _require_nonzero(f)
    linear = sp.Poly(sp.Rational(str(a)) * U + sp.Rational(str(b)) * V, U, V, domain="QQ")
    return _multiplicity(f.to_sympy(), linear)


def real_projective_roots(f: BinaryForm) -> int:
    """
    Número de raíces proyectivas reales distintas de una forma no nula

    La raíz (1:0) se detecta por el coeficiente de u^d; las demás por
    conteo de Sturm sobre la parte libre de cuadrados de f(t, 1).
    """
    _require_nonzero(f)
    if f.degree == 0:
        return 0
    count = 1 if f.coeffs[0] == 0 else 0
    t = sp.Symbol("t")
    univariate = sp.Poly(f.to_sympy().as_expr().subs({U: t, V: 1}), t, domain="QQ")
    if univariate.degree() > 0:
        count += univariate.sqf_part().count_roots()
    return count


@dataclass(frozen=True)
class RealLinearFactor:
    """
    Factor irreducible sobre Q de un mcd junto con sus raíces reales

    directions: formas lineales reales a·u+b·v (exactas si el factor es lineal)
    """
    factor: BinaryForm
    directions: Tuple[Tuple, ...]
    exact: bool
    multiplicities: Tuple[int, int]

    @property
    def common(self) -> int:
        return min(self.multiplicities)


def _real_directions(factor: sp.Poly) -> Tuple[Tuple, bool]:
    """
    Direcciones reales (a, b) de las raíces de un factor irreducible

    Un factor lineal da una dirección exacta. Para grado >= 2 las raíces
    reales se cuentan por sucesiones de Sturm y se aíslan numéricamente.
    """
    degree = factor.total_degree()
    form = BinaryForm.from_sympy(factor)
    if degree == 1:
        a, b = form.coeffs
        return ((a, b),), True
    # un irreducible de grado >= 2 no es divisible por v: deshomogeneizar en t = u/v
    univariate = sp.Poly(factor.as_expr().subs({U: sp.Symbol("t"), V: 1}), sp.Symbol("t"), domain="QQ")
    if univariate.count_roots() == 0:
        return (), False
    directions = []
    for root in univariate.real_roots():
        t = float(sp.N(root, 30))
        directions.append((1.0, -t))
    return tuple(directions), False


def real_common_factors(phi1: BinaryForm, phi2: BinaryForm) -> List[RealLinearFactor]:
    """
    Factores del mcd con raíces reales y sus multiplicidades en φ₁, φ₂

    Args:
        phi1: Primera forma del haz
        phi2: Segunda forma del haz

    Returns:
        Lista de RealLinearFactor (vacía si el mcd no tiene factores lineales reales)
    """
    common = gcd_form(phi1, phi2)
    if common.degree == 0:
        return []
    p1, p2 = phi1.to_sympy(), phi2.to_sympy()
    _, factors = sp.factor_list(common.to_sympy())
    result = []
    for factor, _ in factors:
        directions, exact = _real_directions(factor)
        if not directions:
            continue
        result.append(RealLinearFactor(
            factor=_normalize(factor),
            directions=directions,
            exact=exact,
            multiplicities=(_multiplicity(p1, factor), _multiplicity(p2, factor)),
        ))
    return result


def pencil_s(phi1: BinaryForm, phi2: BinaryForm) -> Tuple[int, Optional[Tuple]]:
    """
    s = máx sobre direcciones reales de min(mult(φ₁), mult(φ₂))

    Args:
        phi1: Forma de grado d >= 1
        phi2: Forma de grado d

    Returns:
        (s, dirección que lo alcanza o None si s = 0)
    """
    if phi1.degree != phi2.degree:
        raise DegreeError(f"Grados distintos: {phi1.degree} y {phi2.degree}")
    if phi1.degree < 1:
        raise DegreeError("El haz requiere grado d >= 1")
    best, direction = 0, None
    for entry in real_common_factors(phi1, phi2):
        if entry.common > best:
            best, direction = entry.common, entry.directions[0]
    logger.debug(f"s del haz = {best}, dirección {direction}")
    return best, direction


def format_direction(direction: Optional[Tuple]) -> Optional[List]:
    """Dirección serializable: racionales como "p/q", flotantes tal cual"""
    if direction is None:
        return None
    return [format_fraction(c) if isinstance(c, Fraction) else float(c) for c in direction]


class BinResController:
    """
    Controlador de consultas sobre formas binarias para la CLI
    """

    def analyze(self, f: BinaryForm, g: BinaryForm) -> dict:
        """
        Resultante, mcd y s de un par de formas

        Args:
            f: Primera forma
            g: Segunda forma

        Returns:
            Dict con resultado de la operación
        """
        try:
            res = resultant(f, g)
            common = gcd_form(f, g)
            data = {
                "success": True,
                "message": "Análisis de formas completado",
                "resultant": format_fraction(res),
                "gcd": common.to_dict(),
            }
            if f.degree == g.degree and f.degree >= 1:
                s, direction = pencil_s(f, g)
                data["s"] = s
                data["direction"] = format_direction(direction)
            return data
        except (ZeroFormError, DegreeError) as e:
            logger.error(f"❌ Error en el análisis de formas: {e}")
            return {"success": False, "message": str(e)}
