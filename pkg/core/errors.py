"""
Jerarquía de excepciones de oscint
"""
from typing import Optional


class OscIntError(ValueError):
    """Error base de la biblioteca"""


class DimensionMismatchError(OscIntError):
    """Dimensiones (n_x, n_z o longitud de punto) incompatibles"""


class DegreeError(OscIntError):
    """Grado fuera del rango admitido por la operación"""


class PhaseSpaceError(OscIntError):
    """El polinomio contiene monomios puros en x o en z"""


class IncompatibleMatrixError(OscIntError):
    """La matriz no satisface las relaciones de compatibilidad de un Hessiano"""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class ZeroFormError(OscIntError):
    """Se recibió la forma binaria nula donde no está permitida"""


class PreconditionError(OscIntError):
    """No se cumplen las hipótesis previas de la operación"""


class LPError(OscIntError):
    """Programa lineal infactible o no acotado"""


class PhaseParseError(OscIntError):
    """Error de lectura de una fase, con posición"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (línea {line}, columna {column})"
        super().__init__(f"{message}{where}")
