"""
Controlador principal de oscint
Despacha cada subcomando a su controlador y emite los resultados por las vistas
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from core.config import AppConfig
from core.events import Event, emit_event, event_manager, register_event_handler
from models.corpus import DESCRIPTIONS, all_phases, get_phase
from models.hessian import mixed_hessian
from models.parser import load_phase, parse_binary_form, parse_phase, save_phase
from models.poly import PhasePoly, random_phase
from models.reports import NormRow
from models.run_config import RunConfig
from models.validators import RunConfigValidator
from controllers.cubic22_controller import Cubic22Controller, check_thm14
from controllers.hessmap_controller import HessMapController
from controllers.newton_controller import NewtonController, modified_newton_distance
from controllers.normest_controller import NormEstController, geometric_lambdas, sweep_and_fit
from controllers.pencil_controller import PencilController
from controllers.predict_controller import PredictController, check_rank_one
from views.report_view import ReportView
from views.sweep_view import SweepView

logger = logging.getLogger(__name__)


def run_genericity(n_x: int, n_z: int, m: int, trials: Optional[int] = None,
                   seed: Optional[int] = None, workers: int = 1) -> dict:
    """
    Lote de fases aleatorias: fracción que pasa rango uno y, para
    cúbicas (2+2), las condiciones del teorema de tasa 2/3

    Cada ensayo usa un generador sembrado con (seed, índice).

    Args:
        n_x: Variables x
        n_z: Variables z
        m: Grado
        trials: Número de ensayos
        seed: Semilla
        workers: Hilos

    Returns:
        Dict con fracciones de aprobación y fallos
    """
    config = AppConfig.get_genericity_config()
    trials = config["trials"] if trials is None else trials
    seed = config["seed"] if seed is None else seed
    cubic22 = (n_x, n_z, m) == (2, 2, 3)

    def trial(index: int) -> dict:
        rng = np.random.default_rng([seed, index])
        phase = random_phase(n_x, n_z, m, rng, config["height"], config["denominator"])
        rank_one = check_rank_one(phase)
        outcome = {"index": index, "rank_one": rank_one.status == "holds", "method": rank_one.method}
        if cubic22:
            outcome["thm14"] = check_thm14(phase).passed
        if not all(v for k, v in outcome.items() if k in ("rank_one", "thm14")):
            outcome["phase"] = phase.to_dict()
        emit_event("genericity.trial", outcome)
        return outcome

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(trial, range(trials)))
    else:
        outcomes = [trial(i) for i in range(trials)]

    result = {
        "n_x": n_x, "n_z": n_z, "m": m, "trials": trials, "seed": seed,
        "rank_one_pass_fraction": sum(o["rank_one"] for o in outcomes) / trials,
        "failures": [o for o in outcomes if "phase" in o],
    }
    if cubic22:
        result["thm14_pass_fraction"] = sum(o["thm14"] for o in outcomes) / trials
    logger.info(f"Genericidad ({n_x}+{n_z}), m={m}: rango uno {result['rank_one_pass_fraction']:.2%}")
    return result


class AppController:
    """
    Controlador principal que coordina los subcomandos
    """

    def __init__(self, report_view: Optional[ReportView] = None, sweep_view: Optional[SweepView] = None):
        """
        Inicializa el controlador de aplicación

        Args:
            report_view: Vista JSON
            sweep_view: Vista CSV / plot-data
        """
        self.report_view = report_view or ReportView()
        self.sweep_view = sweep_view or SweepView(self.report_view.stream)
        self.cubic22_controller = Cubic22Controller()
        self.hessmap_controller = HessMapController()
        self.newton_controller = NewtonController()
        self.predict_controller = PredictController()
        self.pencil_controller = PencilController()
        self.normest_controller = NormEstController()
        self._handlers: Dict[str, Callable[[RunConfig], dict]] = {
            "check": self._run_check,
            "newton": self._run_newton,
            "predict": self._run_predict,
            "pencil": self._run_pencil,
            "sweep": self._run_sweep,
            "fit": self._run_fit,
            "genericity": self._run_genericity,
            "examples": self._run_examples,
            "conjecture": self._run_conjecture,
            "witness": self._run_witness,
        }
        # suscritos solo mientras corre un subcomando
        self._progress: Dict[str, Callable[[Event], None]] = {
            "normest.row": self._log_sweep_row,
            "genericity.trial": self._log_genericity_trial,
        }
        logger.debug("AppController inicializado")

    # =============== DESPACHO ===============

    def run(self, config: RunConfig) -> Tuple[int, dict]:
        """
        Valida la configuración, ejecuta el subcomando y emite la salida

        Args:
            config: Configuración de la ejecución

        Returns:
            (código de salida, resultado)
        """
        codes = AppConfig.EXIT_CODES
        validation = RunConfigValidator.validate(config)
        if not validation["is_valid"]:
            for error in validation["errors"]:
                logger.error(f"❌ {error}")
            result = {"success": False, "message": "; ".join(validation["errors"])}
            self.report_view.emit(result)
            return codes["validation"], result

        for name, handler in self._progress.items():
            register_event_handler(name, handler)
        try:
            result = self._handlers[config.command](config)
        except (ValueError, KeyError, OSError) as e:  # OscIntError deriva de ValueError
            logger.error(f"❌ {config.command}: {e}")
            result = {"success": False, "message": str(e)}
            self.report_view.emit(result)
            return codes["validation"], result
        finally:
            for name, handler in self._progress.items():
                event_manager.unregister_handler(name, handler)

        result.setdefault("seed", config.seed)
        self._emit(config, result)
        if not result.get("success", False):
            return codes["validation"], result
        if config.strict and result.get("soft_fail"):
            logger.warning("⚠️ Numérica sin resolver con --strict")
            return codes["soft_fail"], result
        return codes["ok"], result

    def _emit(self, config: RunConfig, result: dict):
        rows = result.pop("_rows", None)
        if config.fmt == "csv" and rows is not None:
            self.sweep_view.write_csv(rows, config.out)
        elif config.fmt == "plot-data" and rows is not None:
            self.sweep_view.write_plot_data(rows, config.out)
        else:
            self.report_view.emit(result, config.out)
        self.report_view.write_metadata(config.command, config.to_dict(), config.out)

    # =============== PROGRESO ===============

    def _log_sweep_row(self, event: Event):
        row = event.data
        logger.info(f"λ = {row['lambda']:g}: ‖T_λ‖ ≈ {row['norm']:.6e} "
                    f"(n = {row['grid_n']}, resuelto = {row['resolved']})")

    def _log_genericity_trial(self, event: Event):
        outcome = event.data
        if "phase" in outcome:
            logger.warning(f"⚠️ Ensayo {outcome['index']} fuera del caso genérico: {outcome}")
        else:
            logger.info(f"Ensayo {outcome['index']} genérico")

    def _phase(self, config: RunConfig) -> PhasePoly:
        if config.corpus:
            return get_phase(config.corpus)
        if config.phase_path:
            return load_phase(config.phase_path)
        return parse_phase(config.expr)

    # =============== SUBCOMANDOS ===============

    def _run_check(self, config: RunConfig) -> dict:
        phase = self._phase(config)
        hessian = mixed_hessian(phase)
        inverse = self.hessmap_controller.check_matrix(hessian)
        result = {
            "success": inverse["success"],
            "message": inverse["message"],
            "phase": phase.to_dict(),
            "hessian": hessian.to_dict(),
            "compatible": inverse["compatible"],
            "round_trip": inverse.get("phase") == phase.to_dict(),
        }
        if (phase.n_x, phase.n_z, phase.degree) == (2, 2, 3):
            cubic = self.cubic22_controller.check(phase)
            result.update({k: cubic[k] for k in ("pqr", "thm14", "geometry") if k in cubic})
            result["message"] = cubic["message"]
            result["success"] = result["success"] and cubic["success"]
        return result

    def _run_newton(self, config: RunConfig) -> dict:
        return self.newton_controller.compute(self._phase(config), config.modified, config.samples,
                                              config.seed, config.workers)

    def _run_predict(self, config: RunConfig) -> dict:
        result = self.predict_controller.predict(self._phase(config), config.sphere_points,
                                                 config.certify, config.workers)
        result["soft_fail"] = any(h.get("status") == "undecided" for h in result.get("hypotheses", []))
        return result

    def _run_pencil(self, config: RunConfig) -> dict:
        return self.pencil_controller.analyze(parse_binary_form(config.phi1), parse_binary_form(config.phi2))

    def _run_sweep(self, config: RunConfig) -> dict:
        result = self.normest_controller.sweep(self._phase(config), config.lam_min, config.lam_max,
                                               config.points, config.grid, config.grid_cap,
                                               config.tol, config.seed, config.workers)
        if result["success"]:
            result["soft_fail"] = not result["all_resolved"]
            result["_rows"] = [_row_from_dict(row) for row in result["rows"]]
        return result

    def _run_fit(self, config: RunConfig) -> dict:
        rows = self.sweep_view.read_csv(config.input_path)
        return self.normest_controller.fit(rows, config.drop_fraction)

    def _run_genericity(self, config: RunConfig) -> dict:
        result = run_genericity(config.n_x, config.n_z, config.m, config.trials, config.seed, config.workers)
        result.update({"success": True, "message": "Lote de genericidad completado"})
        return result

    def _run_examples(self, config: RunConfig) -> dict:
        phases = all_phases()
        written = []
        if config.write_dir:
            target = Path(config.write_dir)
            target.mkdir(parents=True, exist_ok=True)
            for name, phase in phases.items():
                written.append(str(save_phase(phase, target / f"{name}.json")))
        return {
            "success": True,
            "message": f"{len(phases)} fases en el corpus",
            "phases": {
                name: {"text": phase.to_text(), "description": DESCRIPTIONS.get(name, ""),
                       "phase": phase.to_dict()}
                for name, phase in phases.items()
            },
            "written": written,
        }

    def _run_conjecture(self, config: RunConfig) -> dict:
        """δ_mod y pendiente observada frente a -1/(2δ_mod); no se afirma potencia logarítmica"""
        phase = self._phase(config)
        search = modified_newton_distance(phase, config.samples, config.seed, config.workers)
        sweep = sweep_and_fit(phase, geometric_lambdas(config.lam_min, config.lam_max, config.points),
                              grid=config.grid, grid_cap=config.grid_cap, tol=config.tol,
                              seed=config.seed, workers=config.workers)
        predicted = -1 / (2 * float(search.delta))
        return {
            "success": True,
            "message": f"Pendiente {sweep.slope} frente a {predicted:.4f}",
            "delta_mod": search.to_dict(),
            "predicted_slope": predicted,
            "sweep": sweep.to_dict(),
            "difference": None if sweep.slope is None else sweep.slope - predicted,
            "soft_fail": bool(sweep.excluded or sweep.under_resolved),
        }

    def _run_witness(self, config: RunConfig) -> dict:
        lambdas = geometric_lambdas(config.lam_min, config.lam_max, config.points)
        return self.normest_controller.witness(self._phase(config), lambdas, config.grid, config.grid_cap)


def _row_from_dict(data: dict) -> NormRow:
    return NormRow(data["lambda"], data["norm"], data["grid_n"], data["iters"],
                   data["residual"], data["resolved"], data.get("converged", True))
