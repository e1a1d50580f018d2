"""
Modelo de la matriz Hessiana mixta S''_xz
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import DegreeError, DimensionMismatchError
from models.poly import HomPoly, PhasePoly, polynomial_determinant, sum_of_squares


@dataclass(frozen=True)
class HessianMatrix:
    """
    Matriz n_x×n_z de polinomios homogéneos de grado m-2
    """
    n_x: int
    n_z: int
    degree: int
    entries: Tuple[Tuple[HomPoly, ...], ...]

    def __post_init__(self):
        """Valida forma y grado de las entradas"""
        rows = tuple(tuple(row) for row in self.entries)
        if len(rows) != self.n_x or any(len(row) != self.n_z for row in rows):
            raise DimensionMismatchError(f"Se esperaba una matriz {self.n_x}×{self.n_z}")
        for row in rows:
            for entry in row:
                if (entry.n_x, entry.n_z) != (self.n_x, self.n_z):
                    raise DimensionMismatchError("Entrada con dimensiones distintas a la matriz")
                if entry.degree != self.degree:
                    raise DegreeError(f"Entrada de grado {entry.degree}, se esperaba {self.degree}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[HomPoly]]) -> "HessianMatrix":
        """
        Construye la matriz infiriendo dimensiones y grado de la primera entrada

        Args:
            rows: Filas de HomPoly

        Returns:
            Instancia de HessianMatrix
        """
        if not rows or not rows[0]:
            raise DimensionMismatchError("Matriz vacía")
        first = rows[0][0]
        return cls(first.n_x, first.n_z, first.degree, tuple(tuple(r) for r in rows))

    def __getitem__(self, key: Tuple[int, int]) -> HomPoly:
        i, j = key
        return self.entries[i][j]

    @property
    def phase_degree(self) -> int:
        """Grado m de la fase correspondiente"""
        return self.degree + 2

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.entries for entry in row)

    def evaluate(self, point: Sequence[float]) -> np.ndarray:
        """Evalúa la matriz en un punto (flotantes)"""
        return np.array([[float(entry.eval([float(v) for v in point])) for entry in row]
                         for row in self.entries])

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """
        Evaluación vectorizada

        Args:
            points: Arreglo (N, n_x+n_z)

        Returns:
            Arreglo (N, n_x, n_z)
        """
        points = np.asarray(points, dtype=float)
        out = np.empty((points.shape[0], self.n_x, self.n_z))
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                out[:, i, j] = entry.evaluate_many(points)
        return out

    def determinant(self) -> HomPoly:
        """det S''_xz (solo para matrices cuadradas)"""
        if self.n_x != self.n_z:
            raise DimensionMismatchError("El determinante requiere n_x = n_z")
        return polynomial_determinant(self.entries)

    def gram_determinant(self) -> HomPoly:
        """
        det(HᵗH): se anula exactamente donde el rango cae por debajo de n_z
        (suponiendo n_x >= n_z)
        """
        gram = [[sum_of_products(self.entries, a, b) for b in range(self.n_z)]
                for a in range(self.n_z)]
        return polynomial_determinant(gram)

    def entries_square_sum(self) -> HomPoly:
        """Σ H_ij²: se anula exactamente en los ceros comunes de las entradas"""
        return sum_of_squares(entry for row in self.entries for entry in row)

    def transpose(self) -> "HessianMatrix":
        """Hessiana de la fase con papeles de x y z intercambiados"""
        rows = [[self.entries[i][j].swap_roles() for i in range(self.n_x)] for j in range(self.n_z)]
        return HessianMatrix(self.n_z, self.n_x, self.degree, tuple(tuple(r) for r in rows))

    def to_dict(self) -> dict:
        """
        Serializa como rejilla JSON de polinomios

        Returns:
            Dict con nx, nz, degree y entries
        """
        return {
            "nx": self.n_x,
            "nz": self.n_z,
            "degree": self.degree,
            "entries": [[entry.to_dict() for entry in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HessianMatrix":
        """
        Crea una matriz desde su rejilla JSON

        Args:
            data: Diccionario con nx, nz, degree y entries

        Returns:
            Instancia de HessianMatrix
        """
        rows = tuple(tuple(HomPoly.from_dict(entry) for entry in row) for row in data["entries"])
        return cls(int(data["nx"]), int(data["nz"]), int(data["degree"]), rows)


def sum_of_products(entries, a: int, b: int) -> HomPoly:
    """Σ_i H_ia · H_ib"""
    total = None
    for row in entries:
        term = row[a] * row[b]
        total = term if total is None else total + term
    return total


def mixed_hessian(phase: PhasePoly) -> HessianMatrix:
    """
    Calcula la Hessiana mixta ∂²S/∂x_i∂z_j

    Args:
        phase: Fase de grado m >= 2

    Returns:
        HessianMatrix n_x×n_z de grado m-2
    """
    if phase.degree < 2:
        raise DegreeError(f"La Hessiana mixta requiere m >= 2 (m={phase.degree})")
    rows: List[Tuple[HomPoly, ...]] = []
    for i in range(phase.n_x):
        d_x = phase.partial(i)
        rows.append(tuple(d_x.partial(phase.n_x + j) for j in range(phase.n_z)))
    return HessianMatrix(phase.n_x, phase.n_z, phase.degree - 2, tuple(rows))
