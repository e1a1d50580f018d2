"""
Simplex exacto en dos fases sobre racionales (fractions.Fraction)

Resuelve   min cᵗx   s.a.   A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
con la regla de Bland, sin redondeo alguno.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    """
    Resultado de un programa lineal
    """
    status: str
    objective: Optional[Fraction] = None
    x: List[Fraction] = field(default_factory=list)
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _frac_matrix(rows: Optional[Sequence[Sequence]]) -> List[List[Fraction]]:
    return [[Fraction(v) for v in row] for row in (rows or [])]


class ExactSimplex:
    """
    Problema lineal en forma estándar con tableau racional
    """

    def __init__(self, c: Sequence, a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                 max_iter: int = 10000):
        """
        Inicializa el problema

        Args:
            c: Coeficientes de la función objetivo (minimización)
            a_ub: Filas de restricciones <=
            b_ub: Lados derechos de las restricciones <=
            a_eq: Filas de restricciones de igualdad
            b_eq: Lados derechos de las igualdades
            max_iter: Límite de pivotes por fase
        """
        self.c = [Fraction(v) for v in c]
        self.n = len(self.c)
        self.a_ub = _frac_matrix(a_ub)
        self.b_ub = [Fraction(v) for v in (b_ub or [])]
        self.a_eq = _frac_matrix(a_eq)
        self.b_eq = [Fraction(v) for v in (b_eq or [])]
        self.max_iter = max_iter
        if len(self.a_ub) != len(self.b_ub) or len(self.a_eq) != len(self.b_eq):
            raise ValueError("Número de filas y lados derechos distinto")
        if any(len(row) != self.n for row in self.a_ub + self.a_eq):
            raise ValueError("Las filas deben tener tantas columnas como variables")

        self._build_tableau()

    def _build_tableau(self):
        """Agrega holguras y artificiales; todos los lados derechos quedan >= 0"""
        n_slack = len(self.a_ub)
        n_rows = len(self.a_ub) + len(self.a_eq)
        self.n_slack = n_slack
        self.first_artificial = self.n + n_slack
        width = self.first_artificial + n_rows

        self.rows: List[List[Fraction]] = []
        for k, (row, rhs) in enumerate(list(zip(self.a_ub, self.b_ub)) + list(zip(self.a_eq, self.b_eq))):
            line = list(row) + [Fraction(0)] * (width - self.n) + [rhs]
            if k < n_slack:
                line[self.n + k] = Fraction(1)
            if rhs < 0:
                line = [-v for v in line]
            line[self.first_artificial + k] = Fraction(1)
            self.rows.append(line)
        self.basis = [self.first_artificial + k for k in range(n_rows)]
        self.width = width

    def _pivot(self, r: int, col: int):
        pivot_row = self.rows[r]
        value = pivot_row[col]
        pivot_row[:] = [v / value for v in pivot_row]
        for i, row in enumerate(self.rows):
            if i != r and row[col] != 0:
                factor = row[col]
                row[:] = [a - factor * b for a, b in zip(row, pivot_row)]
        self.basis[r] = col

    def _optimize(self, cost: List[Fraction], allowed: int) -> Optional[str]:
        """
        Itera con la regla de Bland sobre las columnas < allowed

        Returns:
            None si se alcanzó el óptimo, UNBOUNDED si la función no está acotada
        """
        for iteration in range(self.max_iter):
            entering = None
            in_basis = set(self.basis)
            for j in range(allowed):
                if j in in_basis:
                    continue
                reduced = cost[j] - sum(cost[b] * row[j] for b, row in zip(self.basis, self.rows))
                if reduced < 0:
                    entering = j
                    break
            if entering is None:
                self.iterations += iteration
                return None

            leaving, best = None, None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                return UNBOUNDED
            self._pivot(leaving, entering)
        raise RuntimeError(f"Simplex sin converger tras {self.max_iter} pivotes")

    def solve(self) -> LPResult:
        """
        Resuelve el problema en dos fases

        Returns:
            LPResult con estado, valor óptimo y solución
        """
        self.iterations = 0
        phase1_cost = [Fraction(0)] * self.first_artificial + [Fraction(1)] * (self.width - self.first_artificial)
        self._optimize(phase1_cost, self.width)
        infeasibility = sum(row[-1] for b, row in zip(self.basis, self.rows) if b >= self.first_artificial)
        if infeasibility > 0:
            logger.debug(f"Fase 1 terminó con infactibilidad {infeasibility}")
            return LPResult(INFEASIBLE, iterations=self.iterations)

        # sacar artificiales degeneradas de la base; las filas redundantes se eliminan
        for i in reversed(range(len(self.rows))):
            if self.basis[i] < self.first_artificial:
                continue
            col = next((j for j in range(self.first_artificial) if self.rows[i][j] != 0), None)
            if col is None:
                del self.rows[i]
                del self.basis[i]
            else:
                self._pivot(i, col)

        phase2_cost = self.c + [Fraction(0)] * (self.width - self.n)
        if self._optimize(phase2_cost, self.first_artificial) == UNBOUNDED:
            return LPResult(UNBOUNDED, iterations=self.iterations)

        x = [Fraction(0)] * self.n
        for b, row in zip(self.basis, self.rows):
            if b < self.n:
                x[b] = row[-1]
        objective = sum(ci * xi for ci, xi in zip(self.c, x))
        logger.debug(f"Óptimo exacto {objective} en {self.iterations} pivotes")
        return LPResult(OPTIMAL, objective, x, self.iterations)


def linprog_exact(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> LPResult:
    """Atajo funcional de ExactSimplex(...).solve()"""
    return ExactSimplex(c, a_ub, b_ub, a_eq, b_eq).solve()
