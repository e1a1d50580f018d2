"""
Validadores para los parámetros de la CLI
"""
import re
from typing import Any, Dict

from models.run_config import COMMANDS, FORMATS, RunConfig

PHASE_COMMANDS = ("check", "newton", "predict", "sweep", "conjecture", "witness")


class LambdaRangeValidator:
    """Validador de rangos de λ para barridos"""

    MIN_POINTS = 4

    @staticmethod
    def validate(lam_min: float, lam_max: float, points: int) -> Dict[str, Any]:
        """
        Valida un rango geométrico de λ

        Args:
            lam_min: Extremo inferior
            lam_max: Extremo superior
            points: Número de valores

        Returns:
            Dict con resultado de validación
        """
        errors = []
        if lam_min is None or lam_min <= 0:
            errors.append("λ mínimo debe ser positivo")
        elif lam_max is None or lam_max <= lam_min:
            errors.append("λ máximo debe superar a λ mínimo")
        if points is None or points < LambdaRangeValidator.MIN_POINTS:
            errors.append(f"Se requieren al menos {LambdaRangeValidator.MIN_POINTS} valores de λ")
        return {
            "is_valid": len(errors) == 0,
            "errors": errors,
            "cleaned_value": (lam_min, lam_max, points),
        }


class BinaryFormTextValidator:
    """Validador de formas binarias en texto"""

    @staticmethod
    def validate(text: str) -> Dict[str, Any]:
        errors = []
        if not text or not text.strip():
            errors.append("La forma binaria es obligatoria")
        elif re.search(r"[^\sz12uv0-9+\-*/^().,]", text):
            errors.append("La forma binaria contiene caracteres no válidos")
        return {
            "is_valid": len(errors) == 0,
            "errors": errors,
            "cleaned_value": text.strip() if text else "",
        }


class RunConfigValidator:
    """Validador de la configuración completa de una ejecución"""

    @staticmethod
    def validate(config: RunConfig) -> Dict[str, Any]:
        """
        Valida una RunConfig antes de despachar

        Args:
            config: Configuración construida desde la CLI

        Returns:
            Dict con resultado de validación
        """
        errors = []
        if config.command not in COMMANDS:
            errors.append(f"Subcomando desconocido: {config.command}")
        if config.fmt not in FORMATS:
            errors.append(f"Formato desconocido: {config.fmt}")
        if config.workers < 1:
            errors.append("--workers debe ser >= 1")
        if config.command in PHASE_COMMANDS and not config.has_phase:
            errors.append("Debe indicar --phase, --expr o --corpus")
        if sum(bool(v) for v in (config.phase_path, config.expr, config.corpus)) > 1:
            errors.append("Indique una sola fuente de fase")
        if config.command == "pencil":
            for name, text in (("--phi1", config.phi1), ("--phi2", config.phi2)):
                result = BinaryFormTextValidator.validate(text)
                errors.extend(f"{name}: {e}" for e in result["errors"])
        if config.command in ("sweep", "conjecture", "witness"):
            result = LambdaRangeValidator.validate(config.lam_min, config.lam_max, config.points)
            errors.extend(result["errors"])
            if config.grid is not None and config.grid < 8:
                errors.append("--grid debe ser >= 8 o 'auto'")
        if config.command == "fit" and not config.input_path:
            errors.append("fit requiere --in con un CSV de barrido")
        if config.command == "genericity":
            if min(config.n_x, config.n_z) < 1 or config.m < 2:
                errors.append("genericity requiere n_x, n_z >= 1 y m >= 2")
            if config.trials is not None and config.trials < 1:
                errors.append("--trials debe ser >= 1")
        if config.command == "newton" and config.samples is not None and config.samples < 1:
            errors.append("--samples debe ser >= 1")
        if config.drop_fraction is not None and not 0 <= config.drop_fraction < 1:
            errors.append("--drop debe estar en [0, 1)")
        return {
            "is_valid": len(errors) == 0,
            "errors": errors,
            "cleaned_value": config,
        }
