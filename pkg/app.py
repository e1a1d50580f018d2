"""
oscint - Operadores integrales oscilatorios con fases polinomiales homogéneas
Punto de entrada de la línea de comandos
"""
import argparse
import logging
import sys
from typing import List, Optional

from core.config import AppConfig
from controllers.app_controller import AppController
from models.run_config import FORMATS, RunConfig

logger = logging.getLogger(__name__)


def _grid(value: str) -> Optional[int]:
    """--grid acepta un entero o "auto" """
    if value == "auto":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("--grid debe ser un entero o 'auto'")


class OscIntApp:
    """
    Aplicación de línea de comandos
    Traduce los argumentos a RunConfig y delega en AppController
    """

    def __init__(self, controller: Optional[AppController] = None):
        """
        Inicializa la aplicación

        Args:
            controller: Controlador principal (se crea uno si no se indica)
        """
        self.controller = controller or AppController()
        self.parser = self.build_parser()

    # =============== ARGUMENTOS ===============

    @staticmethod
    def _add_phase_arguments(parser: argparse.ArgumentParser):
        source = parser.add_argument_group("fase")
        source.add_argument("--phase", dest="phase_path", help="Archivo de fase (.json o expresión)")
        source.add_argument("--expr", help='Expresión en línea, p. ej. "x1^2*z1 + x1*z1^2"')
        source.add_argument("--corpus", help="Nombre de una fase del corpus (ver 'examples')")

    @staticmethod
    def _add_sweep_arguments(parser: argparse.ArgumentParser):
        parser.add_argument("--lambda-min", dest="lam_min", type=float, default=50.0)
        parser.add_argument("--lambda-max", dest="lam_max", type=float, default=800.0)
        parser.add_argument("--points", type=int, default=8)
        parser.add_argument("--grid", type=_grid, default=None, help="Nodos por eje o 'auto'")
        parser.add_argument("--grid-cap", dest="grid_cap", type=int, default=None)
        parser.add_argument("--tol", type=float, default=None)

    def build_parser(self) -> argparse.ArgumentParser:
        """Parser con un subcomando por operación"""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--log-level", dest="log_level", default=None)
        common.add_argument("--workers", type=int, default=AppConfig.get_normest_config()["workers"])
        common.add_argument("--seed", type=int, default=0)
        common.add_argument("--strict", action="store_true", help="Salida 2 si queda numérica sin resolver")
        common.add_argument("--out", default=None, help="Archivo de salida")
        common.add_argument("--format", dest="fmt", choices=FORMATS, default="json")

        parser = argparse.ArgumentParser(prog="oscint", description=__doc__.strip().splitlines()[0])
        subparsers = parser.add_subparsers(dest="command", required=True)

        check = subparsers.add_parser("check", parents=[common], help="Hessiana e hipótesis (2+2)")
        self._add_phase_arguments(check)

        newton = subparsers.add_parser("newton", parents=[common], help="Distancia de Newton")
        self._add_phase_arguments(newton)
        newton.add_argument("--modified", action="store_true")
        newton.add_argument("--samples", type=int, default=None)

        predict = subparsers.add_parser("predict", parents=[common], help="Tasa de decaimiento")
        self._add_phase_arguments(predict)
        predict.add_argument("--certify", action="store_true")
        predict.add_argument("--sphere-points", dest="sphere_points", type=int, default=None)

        pencil = subparsers.add_parser("pencil", parents=[common], help="Haz x₁φ₁(z) + x₂φ₂(z)")
        pencil.add_argument("--phi1", required=True)
        pencil.add_argument("--phi2", required=True)

        sweep = subparsers.add_parser("sweep", parents=[common], help="Barrido de ‖T_λ‖")
        self._add_phase_arguments(sweep)
        self._add_sweep_arguments(sweep)

        fit = subparsers.add_parser("fit", parents=[common], help="Pendiente desde un CSV")
        fit.add_argument("--in", dest="input_path", required=True)
        fit.add_argument("--drop", dest="drop_fraction", type=float, default=None)

        genericity = subparsers.add_parser("genericity", parents=[common], help="Lote de fases aleatorias")
        genericity.add_argument("--nx", dest="n_x", type=int, default=2)
        genericity.add_argument("--nz", dest="n_z", type=int, default=2)
        genericity.add_argument("--m", type=int, default=3)
        genericity.add_argument("--trials", type=int, default=None)

        examples = subparsers.add_parser("examples", parents=[common], help="Corpus de fases")
        examples.add_argument("--write", dest="write_dir", default=None)

        conjecture = subparsers.add_parser("conjecture", parents=[common], help="δ_mod frente a la pendiente")
        self._add_phase_arguments(conjecture)
        self._add_sweep_arguments(conjecture)
        conjecture.add_argument("--samples", type=int, default=None)

        witness = subparsers.add_parser("witness", parents=[common], help="Testigo de cota inferior")
        self._add_phase_arguments(witness)
        self._add_sweep_arguments(witness)
        return parser

    # =============== MANEJADORES ===============

    def _config(self, args: argparse.Namespace) -> RunConfig:
        return RunConfig.from_dict(vars(args))

    def handle_check(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_newton(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_predict(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_pencil(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_sweep(self, args: argparse.Namespace) -> int:
        config = self._config(args)
        if config.fmt == "csv" and config.out is None:
            logger.info("CSV de barrido por la salida estándar")
        return self._dispatch(config)

    def handle_fit(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_genericity(self, args: argparse.Namespace) -> int:
        config = self._config(args)
        if config.trials is None:
            config.trials = AppConfig.get_genericity_config()["trials"]
        return self._dispatch(config)

    def handle_examples(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_conjecture(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def handle_witness(self, args: argparse.Namespace) -> int:
        return self._dispatch(self._config(args))

    def _dispatch(self, config: RunConfig) -> int:
        code, result = self.controller.run(config)
        if code == AppConfig.EXIT_CODES["ok"]:
            logger.info(f"{config.command}: {result.get('message', AppConfig.get_message('general', 'success'))}")
        return code

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Ejecuta la CLI

        Args:
            argv: Argumentos (None = sys.argv)

        Returns:
            Código de salida 0 (ok), 1 (validación) o 2 (numérica sin resolver con --strict)
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return AppConfig.EXIT_CODES["ok"] if e.code == 0 else AppConfig.EXIT_CODES["validation"]
        AppConfig.setup_logging(args.log_level)
        handler = getattr(self, f"handle_{args.command}", None)
        if handler is None:
            logger.error(AppConfig.get_message("general", "unknown_command"))
            return AppConfig.EXIT_CODES["validation"]
        return handler(args)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Función principal de la aplicación
    """
    try:
        return OscIntApp().run(argv)
    except KeyboardInterrupt:
        logger.warning("⚠️ Interrumpido por el usuario")
        return AppConfig.EXIT_CODES["soft_fail"]


if __name__ == "__main__":
    sys.exit(main())
