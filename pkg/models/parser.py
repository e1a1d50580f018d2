"""
Lectura de fases y formas binarias desde texto, JSON o archivos
"""
import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple, Union

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, rationalize, standard_transformations

from core.errors import DegreeError, PhaseParseError
from models.binary_form import BinaryForm, U, V
from models.poly import MultiIndex, PhasePoly

logger = logging.getLogger(__name__)

ALLOWED_CHARS = re.compile(r"[\sxz0-9+\-*/^().]")
VARIABLE_PATTERN = re.compile(r"\b([xz])([1-9][0-9]*)\b")
COEFFICIENT_LIST = re.compile(r"^\s*-?[0-9./]+(\s*,\s*-?[0-9./]+)*\s*$")
TRANSFORMATIONS = standard_transformations + (convert_xor, rationalize)


def _position(text: str, offset: int) -> Tuple[int, int]:
    """Línea y columna (desde 1) de un desplazamiento en el texto"""
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


def _check_characters(text: str, allowed: re.Pattern):
    for offset, char in enumerate(text):
        if not allowed.fullmatch(char):
            line, column = _position(text, offset)
            raise PhaseParseError(f"Carácter inesperado {char!r}", line, column)
    depth = 0
    for offset, char in enumerate(text):
        depth += {"(": 1, ")": -1}.get(char, 0)
        if depth < 0:
            raise PhaseParseError("Paréntesis de cierre sin abrir", *_position(text, offset))
    if depth:
        raise PhaseParseError("Paréntesis sin cerrar", *_position(text, len(text) - 1))


def _sympy_expression(text: str, symbols: dict):
    try:
        return sp.expand(parse_expr(text.replace("\n", " "), local_dict=symbols,
                                    transformations=TRANSFORMATIONS, evaluate=True))
    except (SyntaxError, TypeError, sp.SympifyError) as e:
        offset = getattr(e, "offset", None)
        line, column = _position(text, max((offset or 1) - 1, 0)) if offset else (None, None)
        raise PhaseParseError(f"Expresión inválida: {e}", line, column)


def parse_phase(text: str, n_x: Optional[int] = None, n_z: Optional[int] = None) -> PhasePoly:
    """
    Interpreta una expresión como "x1^2*z1 + 2*x1*z2^2"

    Las dimensiones se infieren del mayor índice si no se indican.

    Args:
        text: Expresión homogénea en x1.., z1..
        n_x: Número de variables x
        n_z: Número de variables z

    Returns:
        PhasePoly con coeficientes racionales exactos
    """
    if not text or not text.strip():
        raise PhaseParseError("Expresión vacía", 1, 1)
    _check_characters(text, ALLOWED_CHARS)
    indices = {"x": 0, "z": 0}
    for match in VARIABLE_PATTERN.finditer(text):
        indices[match.group(1)] = max(indices[match.group(1)], int(match.group(2)))
    stray = re.search(r"[xz](?![1-9])", text)
    if stray:
        raise PhaseParseError("Variable sin índice", *_position(text, stray.start()))
    n_x = n_x or indices["x"]
    n_z = n_z or indices["z"]
    if indices["x"] > n_x or indices["z"] > n_z:
        raise PhaseParseError(f"Índices fuera de rango para ({n_x}+{n_z})")
    if n_x < 1 or n_z < 1:
        raise PhaseParseError("La fase debe contener variables x y z")

    names = [f"x{i + 1}" for i in range(n_x)] + [f"z{j + 1}" for j in range(n_z)]
    symbols = {name: sp.Symbol(name) for name in names}
    expr = _sympy_expression(text, symbols)
    if expr == 0:
        raise PhaseParseError("La fase es idénticamente nula")
    try:
        poly = sp.Poly(expr, *[symbols[name] for name in names], domain="QQ")
    except sp.PolynomialError as e:
        raise PhaseParseError(f"No es un polinomio: {e}")
    if not poly.is_homogeneous:
        raise DegreeError("La fase debe ser homogénea")
    degree = poly.total_degree()
    terms = {}
    for monomial, coef in poly.terms():
        terms[MultiIndex(tuple(monomial[:n_x]), tuple(monomial[n_x:]))] = Fraction(int(coef.p), int(coef.q))
    return PhasePoly(n_x, n_z, degree, terms)


def parse_binary_form(text: str) -> BinaryForm:
    """
    Forma binaria desde "1,0,-1" (potencias de u descendentes) o una
    expresión en z1, z2 (también u, v)
    """
    if text is None or not text.strip():
        raise PhaseParseError("Forma binaria vacía", 1, 1)
    if COEFFICIENT_LIST.match(text):
        try:
            return BinaryForm.from_list([Fraction(item.strip()) for item in text.split(",")])
        except (ValueError, ZeroDivisionError) as e:
            raise PhaseParseError(f"Coeficiente inválido: {e}")
    _check_characters(text.replace("u", "0").replace("v", "0"), ALLOWED_CHARS)
    symbols = {"z1": U, "z2": V, "u": U, "v": V}
    if re.search(r"z([3-9]|[1-9][0-9])", text):
        raise PhaseParseError("Una forma binaria usa solo z1 y z2")
    expr = _sympy_expression(text, symbols)
    if expr == 0:
        raise PhaseParseError("La forma binaria nula no está permitida")
    return BinaryForm.from_sympy(expr)


def phase_from_json(data: Union[str, dict]) -> PhasePoly:
    """Fase desde el formato JSON {"nx","nz","m","terms"}"""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise PhaseParseError(f"JSON inválido: {e.msg}", e.lineno, e.colno)
    try:
        return PhasePoly.from_dict(data)
    except (KeyError, TypeError) as e:
        raise PhaseParseError(f"Campo faltante o inválido en la fase: {e}")


def load_phase(path: Union[str, Path]) -> PhasePoly:
    """
    Carga una fase desde archivo (.json o texto con una expresión)

    Args:
        path: Ruta del archivo

    Returns:
        PhasePoly
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise PhaseParseError(f"No se pudo leer {path}: {e}")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        phase = phase_from_json(text)
    else:
        phase = parse_phase(text)
    logger.debug(f"Fase cargada desde {path}: {phase!r}")
    return phase


def save_phase(phase: PhasePoly, path: Union[str, Path], indent: int = 2) -> Path:
    """Escribe la fase en formato JSON canónico"""
    path = Path(path)
    path.write_text(json.dumps(phase.to_dict(), indent=indent, sort_keys=True) + "\n", encoding="utf-8")
    return path
