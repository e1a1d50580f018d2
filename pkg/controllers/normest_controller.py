"""
Controlador de estimación numérica de ‖T_λ‖
Discretización por punto medio del operador oscilatorio, iteración de
potencia sin matriz explícita, barridos en λ con ajuste log-log y el
testigo de cota inferior por reescalamiento.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh
from scipy.stats import linregress

from core.config import AppConfig
from core.errors import DimensionMismatchError
from core.events import emit_event
from models.poly import HomPoly, PhasePoly, variable_names
from models.reports import AmplitudeSpec, NormRow, NormSweepResult, WitnessRow, smooth_bump

logger = logging.getLogger(__name__)


# =============== DISCRETIZACIÓN ===============

def midpoint_nodes(low: float, high: float, n: int) -> Tuple[np.ndarray, float]:
    """Nodos de la regla del punto medio y su paso"""
    h = (high - low) / n
    return low + (np.arange(n) + 0.5) * h, h


def _product_grid(axes: Sequence[np.ndarray]) -> np.ndarray:
    """Producto tensorial de nodos por eje, (Π n_k, dim)"""
    if not axes:
        return np.zeros((1, 0))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _product_weights(factors: Sequence[np.ndarray]) -> np.ndarray:
    weights = np.ones(1)
    for factor in factors:
        weights = np.multiply.outer(weights, factor).ravel()
    return weights


@dataclass
class Discretization:
    """
    Operador discretizado M = diag(w_x) e^{iλS(x_i, z_j)} diag(w_z)

    Los pesos incluyen la amplitud y la raíz del volumen de cada celda,
    de modo que σ_max(M) aproxima la norma L²→L² del operador continuo.
    """
    x_points: np.ndarray
    z_points: np.ndarray
    x_weights: np.ndarray
    z_weights: np.ndarray
    x_monomials: np.ndarray
    z_monomials: np.ndarray
    coefficients: np.ndarray
    lam: float
    n: int

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.x_points), len(self.z_points)

    def phase_block(self, rows: slice, cols: slice = slice(None)) -> np.ndarray:
        """S(x_i, z_j) como X_mon · C · Z_monᵗ"""
        return self.x_monomials[rows] @ self.coefficients @ self.z_monomials[cols].T

    def kernel_block(self, rows: slice, cols: slice = slice(None)) -> np.ndarray:
        phase = self.phase_block(rows, cols)
        return (self.x_weights[rows, None] * np.exp(1j * self.lam * phase)
                * self.z_weights[None, cols])


def discretize(phase: HomPoly, lam: float, amp: AmplitudeSpec, n: int) -> Discretization:
    """
    Construye la discretización de punto medio en la caja de la amplitud

    Args:
        phase: Fase S(x, z)
        lam: Parámetro de oscilación λ >= 0
        amp: Amplitud producto con una caja por eje
        n: Nodos por eje

    Returns:
        Discretization lista para aplicar
    """
    n_x, n_z = phase.n_x, phase.n_z
    if amp.dimension != n_x + n_z:
        raise DimensionMismatchError(f"La amplitud tiene {amp.dimension} ejes, la fase {n_x + n_z}")
    if lam < 0:
        raise ValueError("λ debe ser >= 0")
    axes, factors = [], []
    for axis, (lo, hi) in enumerate(amp.box):
        nodes, h = midpoint_nodes(lo, hi, n)
        axes.append(nodes)
        factors.append(amp.axis_values(axis, nodes) * math.sqrt(h))
    x_points = _product_grid(axes[:n_x])
    z_points = _product_grid(axes[n_x:])

    alphas = sorted({index.alpha for index in phase.terms})
    betas = sorted({index.beta for index in phase.terms})
    coefficients = np.zeros((max(len(alphas), 1), max(len(betas), 1)))
    for index, coef in phase.items():
        coefficients[alphas.index(index.alpha), betas.index(index.beta)] += float(coef)

    def monomials(points: np.ndarray, exponents: List[Tuple[int, ...]]) -> np.ndarray:
        if not exponents:
            return np.zeros((len(points), 1))
        return np.stack([np.prod(points ** np.array(e), axis=1) for e in exponents], axis=1)

    return Discretization(
        x_points=x_points,
        z_points=z_points,
        x_weights=_product_weights(factors[:n_x]),
        z_weights=_product_weights(factors[n_x:]),
        x_monomials=monomials(x_points, alphas),
        z_monomials=monomials(z_points, betas),
        coefficients=coefficients,
        lam=float(lam),
        n=n,
    )


def kernel_matrix(phase: HomPoly, lam: float, amp: AmplitudeSpec, n: int) -> np.ndarray:
    """Matriz densa completa (solo para mallas pequeñas y pruebas)"""
    disc = discretize(phase, lam, amp, n)
    return disc.kernel_block(slice(None))


# =============== REGLA DE OSCILACIÓN ===============

def required_grid(phase: HomPoly, lam: float, amp: AmplitudeSpec,
                  points_per_wavelength: Optional[float] = None) -> int:
    """
    Nodos por eje exigidos por la regla n >= (ppw/2π)·λ·L·G

    G acota |∂S/∂(eje)| en la caja por la norma de coeficientes.
    """
    if points_per_wavelength is None:
        points_per_wavelength = AppConfig.get_normest_config()["points_per_wavelength"]
    radius = max(max(abs(lo), abs(hi)) for lo, hi in amp.box)
    needed = 0
    for axis, name in enumerate(variable_names(phase.n_x, phase.n_z)):
        lo, hi = amp.box[axis]
        bound = phase.max_partial_bound(name, radius)
        needed = max(needed, math.ceil(points_per_wavelength / (2 * math.pi) * lam * (hi - lo) * bound))
    return needed


def choose_grid(phase: HomPoly, lam: float, amp: AmplitudeSpec,
                grid_cap: Optional[int] = None) -> Tuple[int, int]:
    """
    Malla automática: el mínimo que cumple la regla, acotado por los topes

    Returns:
        (n elegido, n requerido)
    """
    config = AppConfig.get_normest_config()
    needed = required_grid(phase, lam, amp, config["points_per_wavelength"])
    cap = min(grid_cap or config["grid_cap"], config["grid_cap"])
    dim = phase.n_x + phase.n_z
    cap = min(cap, int(math.floor(config["entry_cap"] ** (1.0 / dim) + 1e-9)))
    n = min(max(config["min_grid"], needed), max(cap, config["min_grid"]))
    if n < needed:
        logger.warning(f"⚠️ λ = {lam:g}: malla {n} por eje bajo el tope, se requieren {needed}")
    else:
        logger.debug(f"λ = {lam:g}: malla {n} por eje (tope {cap})")
    return n, needed


# =============== ITERACIÓN DE POTENCIA ===============

def _pairwise_sum(parts: List[np.ndarray]) -> np.ndarray:
    """Suma en árbol con orden fijo"""
    while len(parts) > 1:
        merged = [parts[k] + parts[k + 1] for k in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


class GramOperator:
    """
    Aplicación v ↦ MᴴM v por bloques de filas

    Si el núcleo cabe en el límite de caché se guarda completo; si no,
    cada bloque se regenera en cada aplicación.
    """

    def __init__(self, disc: Discretization, block_rows: int, cache_entries: int,
                 workers: int = 1):
        self.disc = disc
        rows, cols = disc.shape
        self.blocks = [slice(start, min(start + block_rows, rows)) for start in range(0, rows, block_rows)]
        self.workers = max(1, workers)
        self.cached: Optional[np.ndarray] = None
        if rows * cols <= cache_entries:
            self.cached = disc.kernel_block(slice(None))

    def _apply_block(self, rows: slice, v: np.ndarray) -> np.ndarray:
        block = self.cached[rows] if self.cached is not None else self.disc.kernel_block(rows)
        return block.conj().T @ (block @ v)

    def apply(self, v: np.ndarray) -> np.ndarray:
        if self.cached is not None:
            return self.cached.conj().T @ (self.cached @ v)
        if self.workers > 1 and len(self.blocks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                parts = list(pool.map(lambda rows: self._apply_block(rows, v), self.blocks))
        else:
            parts = [self._apply_block(rows, v) for rows in self.blocks]
        return _pairwise_sum(parts)


def _lanczos_fallback(operator: GramOperator, size: int, tol: float, max_iter: int,
                      start: np.ndarray) -> Optional[Tuple[float, int, float]]:
    """
    Lanczos implícito (ARPACK) sobre MᴴM cuando la potencia no alcanza tol

    Returns:
        (autovalor, aplicaciones de MᴴM, residuo relativo) o None si no converge
    """
    applies = 0

    def matvec(x: np.ndarray) -> np.ndarray:
        nonlocal applies
        applies += 1
        return operator.apply(np.asarray(x).ravel())

    gram = LinearOperator((size, size), matvec=matvec, dtype=np.complex128)
    try:
        values, vectors = eigsh(gram, k=1, which="LA", v0=start, tol=0.1 * tol, maxiter=max_iter)
    except ArpackNoConvergence:
        logger.warning(f"⚠️ Lanczos sin converger tras {applies} aplicaciones")
        return None
    v = vectors[:, 0] / np.linalg.norm(vectors[:, 0])
    u = operator.apply(v)
    value = float(np.linalg.norm(u))
    if value == 0.0:
        return 0.0, applies + 1, 0.0
    residual = float(np.linalg.norm(u - float(values[0]) * v)) / value
    return value, applies + 1, residual


def power_iteration(operator: GramOperator, size: int, tol: float, max_iter: int,
                    seed: int = 0) -> Tuple[float, int, float, bool]:
    """
    Mayor valor singular de M por iteración de potencia sobre MᴴM

    Se detiene cuando el residuo relativo ‖MᴴMv − ρv‖/‖MᴴMv‖ baja de tol.
    Si la brecha espectral es pequeña y se agotan los pasos, se recurre a
    Lanczos partiendo del último vector.

    Args:
        operator: Aplicación de MᴴM
        size: Dimensión del dominio
        tol: Tolerancia sobre el residuo relativo
        max_iter: Máximo de iteraciones (también para Lanczos)
        seed: Semilla del vector inicial complejo

    Returns:
        (σ_max, aplicaciones de MᴴM, residuo relativo, convergió)
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    v /= np.linalg.norm(v)
    value, residual = 0.0, float("inf")
    for iteration in range(1, max_iter + 1):
        u = operator.apply(v)
        value = float(np.linalg.norm(u))
        if value == 0.0:
            return 0.0, iteration, 0.0, True
        rayleigh = float(np.real(np.vdot(v, u)))
        residual = float(np.linalg.norm(u - rayleigh * v)) / value
        if residual < tol:
            return math.sqrt(value), iteration, residual, True
        v = u / value

    logger.debug(f"Potencia con residuo {residual:.2e} tras {max_iter} pasos; se pasa a Lanczos")
    steps = max_iter
    if size > 2:
        fallback = _lanczos_fallback(operator, size, tol, max_iter, v)
        if fallback is not None:
            lanczos_value, applies, lanczos_residual = fallback
            if lanczos_residual < tol:
                return math.sqrt(lanczos_value), steps + applies, lanczos_residual, True
            if lanczos_residual < residual:
                value, residual = lanczos_value, lanczos_residual
            steps += applies
    logger.warning(f"⚠️ Iteración de potencia sin converger tras {steps} pasos (residuo {residual:.2e})")
    return math.sqrt(value), steps, residual, False


def estimate_norm(phase: HomPoly, lam: float, amp: Optional[AmplitudeSpec] = None,
                  n: Optional[int] = None, tol: Optional[float] = None,
                  max_iter: Optional[int] = None, seed: int = 0, workers: int = 1) -> NormRow:
    """
    Estima ‖T_λ‖ en la malla de punto medio

    Args:
        phase: Fase S(x, z)
        lam: λ >= 0
        amp: Amplitud (por defecto bump suave en [-1, 1] por eje)
        n: Nodos por eje (None = malla automática)
        tol: Tolerancia relativa
        max_iter: Máximo de iteraciones
        seed: Semilla del vector inicial
        workers: Hilos para la aplicación por bloques

    Returns:
        NormRow con la norma, iteraciones, residuo y banderas
    """
    config = AppConfig.get_normest_config()
    amp = amp or AmplitudeSpec.uniform(phase.n_x + phase.n_z, *config["box"], kind=config["bump"])
    tol = config["tol"] if tol is None else tol
    max_iter = config["max_iter"] if max_iter is None else max_iter
    if n is None:
        n, needed = choose_grid(phase, lam, amp)
    else:
        needed = required_grid(phase, lam, amp, config["points_per_wavelength"])
    if n < config["min_grid"]:
        raise ValueError(f"Se requieren al menos {config['min_grid']} nodos por eje")
    disc = discretize(phase, lam, amp, n)
    operator = GramOperator(disc, config["block_rows"], config["cache_entries"], workers)
    norm, iters, residual, converged = power_iteration(operator, disc.shape[1], tol, max_iter, seed)
    resolved = n >= needed
    logger.debug(f"‖T_λ‖ ≈ {norm:.6e} (λ = {lam:g}, n = {n}, {iters} iteraciones)")
    return NormRow(float(lam), norm, n, iters, residual, resolved, converged)


# =============== BARRIDOS Y AJUSTE ===============

def geometric_lambdas(lam_min: float, lam_max: float, points: int) -> List[float]:
    """λ en progresión geométrica entre los extremos"""
    if points < 2 or lam_min <= 0 or lam_max <= lam_min:
        raise ValueError("Rango de λ inválido")
    return [float(v) for v in np.geomspace(lam_min, lam_max, points)]


def log_band(lam_min: float, lam_max: float, p: int) -> float:
    """
    Máximo efecto de (log λ)^p sobre la pendiente log-log en la ventana

    La pendiente secante de p·log(log λ) frente a log λ entre los extremos.
    """
    if p == 0:
        return 0.0
    if lam_min <= math.e:
        lam_min = math.e
    if lam_max <= lam_min:
        return 0.0
    return p * (math.log(math.log(lam_max)) - math.log(math.log(lam_min))) / (
        math.log(lam_max) - math.log(lam_min))


def fit_window(lambdas: Sequence[float], drop_fraction: Optional[float] = None) -> Tuple[float, float]:
    """Ventana de ajuste: se descarta la fracción menor de los λ"""
    if drop_fraction is None:
        drop_fraction = AppConfig.get_fit_config()["drop_fraction"]
    ordered = sorted(lambdas)
    start = int(math.floor(drop_fraction * len(ordered)))
    return ordered[start], ordered[-1]


def fit_rows(rows: List[NormRow], drop_fraction: Optional[float] = None, seed: int = 0,
             tol: Optional[float] = None, include_unresolved: bool = False) -> NormSweepResult:
    """
    Ajusta log‖T_λ‖ = a + slope·log λ por mínimos cuadrados

    Se excluyen las filas sin converger, con residuo por encima de tol o con
    norma no positiva. Las filas bajo la regla de oscilación se excluyen
    también, salvo con include_unresolved: entonces entran al ajuste y
    quedan listadas en under_resolved.

    Args:
        rows: Filas del barrido
        drop_fraction: Fracción de los λ menores a descartar
        seed: Semilla registrada en el resultado
        tol: Residuo máximo aceptado (por defecto el de la configuración)
        include_unresolved: Ajustar también las filas con malla insuficiente

    Returns:
        NormSweepResult con pendiente y error estándar
    """
    if not rows:
        raise ValueError("No hay filas que ajustar")
    tol = AppConfig.get_normest_config()["tol"] if tol is None else tol
    window = fit_window([row.lam for row in rows], drop_fraction)

    excluded, under_resolved = [], []
    for row in rows:
        if not row.converged or row.residual > tol or row.norm <= 0:
            excluded.append(row.lam)
        elif not row.resolved:
            (under_resolved if include_unresolved else excluded).append(row.lam)
    if excluded:
        logger.warning(f"{AppConfig.get_message('sweep', 'excluded')}: {excluded}")
    if under_resolved:
        logger.warning(f"{AppConfig.get_message('sweep', 'under_resolved')}: {under_resolved}")

    accepted = [row for row in rows
                if row.lam not in excluded and window[0] <= row.lam <= window[1]]
    result = NormSweepResult(rows, None, None, window, excluded=excluded, seed=seed,
                             under_resolved=under_resolved)
    if len(accepted) < AppConfig.get_fit_config()["min_rows"]:
        logger.warning(f"⚠️ Solo {len(accepted)} filas válidas en la ventana; no se ajusta pendiente")
        return result
    fit = linregress(np.log([row.lam for row in accepted]), np.log([row.norm for row in accepted]))
    result.slope = float(fit.slope)
    result.stderr = float(fit.stderr)
    result.intercept = float(fit.intercept)
    logger.info(f"Pendiente ajustada {result.slope:.4f} ± {result.stderr:.4f} en λ ∈ [{window[0]:g}, {window[1]:g}]")
    return result


def sweep_and_fit(phase: HomPoly, lambdas: Sequence[float], amp: Optional[AmplitudeSpec] = None,
                  grid: Optional[int] = None, grid_cap: Optional[int] = None,
                  tol: Optional[float] = None, seed: int = 0, workers: int = 1) -> NormSweepResult:
    """
    Barrido de ‖T_λ‖ con malla por λ y ajuste de la pendiente

    Args:
        phase: Fase
        lambdas: Al menos 4 valores crecientes
        amp: Amplitud
        grid: Nodos fijos por eje (None = automático por λ)
        grid_cap: Tope de nodos por eje para la malla automática; si se da,
            las filas acotadas por él entran al ajuste como under_resolved
        tol: Tolerancia de la iteración de potencia
        seed: Semilla
        workers: Hilos repartidos entre valores de λ

    Returns:
        NormSweepResult
    """
    lambdas = [float(v) for v in lambdas]
    if len(lambdas) < 4:
        raise ValueError(AppConfig.get_message("sweep", "error_points"))
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("Los valores de λ deben ser crecientes")
    config = AppConfig.get_normest_config()
    amp = amp or AmplitudeSpec.uniform(phase.n_x + phase.n_z, *config["box"], kind=config["bump"])

    def run(lam: float) -> NormRow:
        n = grid if grid is not None else choose_grid(phase, lam, amp, grid_cap)[0]
        row = estimate_norm(phase, lam, amp, n, tol, seed=seed)
        emit_event("normest.row", row.to_dict())
        logger.debug(f"λ = {lam:g}: ‖T_λ‖ ≈ {row.norm:.6e} (n = {row.grid_n}, resuelto = {row.resolved})")
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, lambdas))
    else:
        rows = [run(lam) for lam in lambdas]
    return fit_rows(rows, seed=seed, tol=tol, include_unresolved=grid_cap is not None)


# =============== TESTIGO DE COTA INFERIOR ===============

def witness_amplitude(dimension: int) -> AmplitudeSpec:
    """Bump suave en una caja desplazada del origen"""
    lo, hi = AppConfig.get_witness_config()["box"]
    return AmplitudeSpec.uniform(dimension, lo, hi, "smooth")


def _witness_grid(amp: AmplitudeSpec, n: int, radius: float,
                  min_points: int, max_grid: int) -> Tuple[int, bool]:
    """Refina la malla hasta tener min_points nodos por eje en el soporte"""
    refined = False
    lengths = [hi - lo for lo, hi in amp.box]
    needed = max(math.ceil(min_points * length / (2 * radius)) + 1 for length in lengths)
    if needed > n:
        n, refined = min(needed, max_grid), True
    return n, refined


def lower_bound_witness(phase: HomPoly, lam: float, amp: Optional[AmplitudeSpec] = None,
                        n: Optional[int] = None, grid_cap: Optional[int] = None) -> WitnessRow:
    """
    Cociente de Rayleigh ‖M f_λ‖/‖f_λ‖ para el bump reescalado

    f_λ está centrado en λ^{-1/m}z₀ con radio λ^{-1/m}ε y lleva la fase
    e^{-iλS(c_x, z)} con c_x = λ^{-1/m}x₀, de modo que el integrando no
    oscila en x = c_x. Se calcula sobre la misma malla que estimate_norm,
    por lo que nunca supera la norma discreta.

    Args:
        phase: Fase de grado m
        lam: λ >= 1
        amp: Amplitud (por defecto la caja desplazada)
        n: Nodos por eje (None = malla automática, refinada si el soporte
           tiene pocos nodos)
        grid_cap: Tope de nodos por eje para la malla automática y el refinamiento

    Returns:
        WitnessRow
    """
    if lam < 1:
        raise ValueError("El testigo requiere λ >= 1")
    config = AppConfig.get_witness_config()
    n_x, n_z, m = phase.n_x, phase.n_z, phase.degree
    amp = amp or witness_amplitude(n_x + n_z)
    scale = lam ** (-1.0 / m)
    x0 = np.full(n_x, config["z0_fraction"]) * scale
    z0 = np.full(n_z, config["z0_fraction"]) * scale
    radius = config["epsilon"] * scale
    refined = False
    if n is None:
        n = choose_grid(phase, lam, amp, grid_cap)[0]
        entry_cap = AppConfig.get_normest_config()["entry_cap"]
        max_grid = min(config["max_grid"], int(math.floor(entry_cap ** (1.0 / (n_x + n_z)) + 1e-9)))
        if grid_cap is not None:
            max_grid = min(max_grid, grid_cap)
        n, refined = _witness_grid(amp, n, radius, config["min_support_points"], max(max_grid, n))

    disc = discretize(phase, lam, amp, n)
    offsets = (disc.z_points - z0) / radius
    profile = np.prod(smooth_bump(offsets), axis=1)
    support = np.nonzero(profile)[0]
    if support.size == 0:
        logger.warning(f"⚠️ λ = {lam:g}: el soporte del testigo no contiene nodos (n = {n})")
        return WitnessRow(float(lam), 0.0, n, 0, refined)
    anchor_points = np.hstack([np.tile(x0, (support.size, 1)), disc.z_points[support]])
    matched = profile[support] * np.exp(-1j * lam * phase.evaluate_many(anchor_points))

    block = disc.kernel_block(slice(None), support)
    image = block @ matched
    ratio = float(np.linalg.norm(image) / np.linalg.norm(matched))
    logger.debug(f"Testigo λ = {lam:g}: cociente {ratio:.4e} con {support.size} nodos de soporte")
    return WitnessRow(float(lam), ratio, n, int(support.size), refined)


def witness_sweep(phase: HomPoly, lambdas: Sequence[float], amp: Optional[AmplitudeSpec] = None,
                  grid: Optional[int] = None,
                  grid_cap: Optional[int] = None) -> Tuple[List[WitnessRow], Optional[float]]:
    """
    Testigos sobre varios λ y la pendiente log-log de sus cocientes

    Returns:
        (filas, pendiente o None si hay menos de dos cocientes positivos)
    """
    rows = [lower_bound_witness(phase, lam, amp, grid, grid_cap) for lam in lambdas]
    valid = [row for row in rows if row.ratio > 0]
    if len(valid) < 2:
        return rows, None
    fit = linregress(np.log([row.lam for row in valid]), np.log([row.ratio for row in valid]))
    bound = -(phase.n_x + phase.n_z) / (2 * phase.degree)
    logger.info(f"Pendiente del testigo {fit.slope:.4f} (cota {bound:.4f})")
    return rows, float(fit.slope)


class NormEstController:
    """
    Controlador de los subcomandos sweep y fit
    """

    def sweep(self, phase: PhasePoly, lam_min: float, lam_max: float, points: int,
              grid: Optional[int] = None, grid_cap: Optional[int] = None,
              tol: Optional[float] = None, seed: int = 0, workers: int = 1) -> dict:
        """
        Barrido geométrico y ajuste de pendiente

        Returns:
            Dict con resultado de la operación
        """
        try:
            lambdas = geometric_lambdas(lam_min, lam_max, points)
            result = sweep_and_fit(phase, lambdas, grid=grid, grid_cap=grid_cap,
                                   tol=tol, seed=seed, workers=workers)
            data = result.to_dict()
            data.update({
                "success": True,
                "message": (f"Pendiente {result.slope:.4f}" if result.slope is not None
                            else "Sin filas suficientes para ajustar"),
                "all_resolved": not result.excluded and not result.under_resolved,
                "grid": "auto" if grid is None else grid,
            })
            return data
        except (ValueError, DimensionMismatchError) as e:
            logger.error(f"❌ Error en el barrido: {e}")
            return {"success": False, "message": str(e)}

    def fit(self, rows: List[NormRow], drop_fraction: Optional[float] = None) -> dict:
        """
        Ajuste de pendiente sobre filas ya calculadas (p. ej. leídas de CSV)

        Returns:
            Dict con slope, stderr y window
        """
        try:
            result = fit_rows(rows, drop_fraction)
            return {
                "success": result.slope is not None,
                "message": "Ajuste completado" if result.slope is not None else "Filas insuficientes",
                "slope": result.slope,
                "stderr": result.stderr,
                "window": list(result.window),
                "excluded": result.excluded,
                "under_resolved": result.under_resolved,
            }
        except ValueError as e:
            logger.error(f"❌ Error en el ajuste: {e}")
            return {"success": False, "message": str(e)}

    def witness(self, phase: PhasePoly, lambdas: Sequence[float], grid: Optional[int] = None,
                grid_cap: Optional[int] = None) -> Dict:
        """Testigos de cota inferior y su pendiente"""
        try:
            rows, slope = witness_sweep(phase, lambdas, grid=grid, grid_cap=grid_cap)
            bound = -(phase.n_x + phase.n_z) / (2 * phase.degree)
            return {"success": True, "message": f"Pendiente del testigo {slope}",
                    "rows": [row.to_dict() for row in rows], "slope": slope, "bound_slope": bound}
        except ValueError as e:
            logger.error(f"❌ Error en el testigo: {e}")
            return {"success": False, "message": str(e)}
