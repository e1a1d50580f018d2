"""
Configuración y constantes de oscint
"""
import logging
import os
from typing import Dict, Any

from dotenv import load_dotenv

# Cargar variables de entorno (.env opcional)
load_dotenv()


def _env(name: str, default, cast=float):
    """
    Lee una variable de entorno OSCINT_* con conversión de tipo

    Args:
        name: Nombre sin prefijo
        default: Valor por defecto
        cast: Función de conversión

    Returns:
        Valor convertido o el valor por defecto
    """
    raw = os.getenv(f"OSCINT_{name}")
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Valor inválido para OSCINT_{name}: {raw!r}, se usa {default}")
        return default


class AppConfig:
    """
    Configuración central de la aplicación
    """

    # Configuración de logging
    LOGGING_CONFIG = {
        "level": getattr(logging, str(_env("LOG_LEVEL", "INFO", str)).upper(), logging.INFO),
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    }

    # Estimación numérica de ||T_λ||
    NORMEST_CONFIG = {
        "tol": _env("NORM_TOL", 1e-6),
        "max_iter": _env("NORM_MAX_ITER", 500, int),
        "points_per_wavelength": _env("POINTS_PER_WAVELENGTH", 10.0),
        "min_grid": 8,
        "grid_cap": _env("GRID_CAP", 8192, int),
        "entry_cap": _env("ENTRY_CAP", 3 * 10**8, int),
        "block_rows": _env("BLOCK_ROWS", 512, int),
        "cache_entries": _env("CACHE_ENTRIES", 2 * 10**7, int),
        "box": (-1.0, 1.0),
        "bump": "smooth",
        "workers": _env("WORKERS", 1, int),
    }

    # Ajuste de pendientes log-log
    FIT_CONFIG = {
        "drop_fraction": 0.25,
        "min_rows": 3,
    }

    # Muestreo y certificación en la esfera
    SAMPLING_CONFIG = {
        "sphere_points": _env("SPHERE_POINTS", 10**4, int),
        "zero_threshold": 1e-6,
        "cell_tol": 1e-6,
        "max_cells": _env("MAX_CELLS", 20000, int),
        "min_width": 1e-3,
        "refine_starts": 5,
        "seed": 0,
    }

    # Distancia de Newton modificada
    NEWTON_CONFIG = {
        "samples": 200,
        "det_threshold": 0.1,
        "entry_denominator": 16,
        "seed": 0,
    }

    # Experimentos de genericidad
    GENERICITY_CONFIG = {
        "trials": 100,
        "height": 20,
        "denominator": 7,
        "seed": 1,
    }

    # Testigo de cota inferior
    WITNESS_CONFIG = {
        "z0_fraction": 0.5,
        "epsilon": 0.25,
        "min_support_points": 4,
        "box": (-0.75, 1.25),
        "max_grid": 4096,
    }

    # Salida de resultados
    OUTPUT_CONFIG = {
        "indent": 2,
        "sort_keys": True,
        "csv_columns": ["lambda", "norm", "grid_n", "iters", "residual", "resolved"],
    }

    EXIT_CODES = {
        "ok": 0,
        "validation": 1,
        "soft_fail": 2,
    }

    # Mensajes de la aplicación
    MESSAGES = {
        "general": {
            "success": "Operación exitosa",
            "unknown_command": "❌ Subcomando desconocido",
        },
        "sweep": {
            "excluded": "⚠️ Filas excluidas del ajuste",
            "under_resolved": "⚠️ Filas bajo la regla de oscilación ajustadas con malla acotada",
            "error_points": "❌ Se requieren al menos 4 valores de λ",
        },
    }

    @classmethod
    def get_normest_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de estimación de normas"""
        return cls.NORMEST_CONFIG.copy()

    @classmethod
    def get_fit_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de ajuste"""
        return cls.FIT_CONFIG.copy()

    @classmethod
    def get_sampling_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de muestreo"""
        return cls.SAMPLING_CONFIG.copy()

    @classmethod
    def get_newton_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de Newton"""
        return cls.NEWTON_CONFIG.copy()

    @classmethod
    def get_genericity_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de genericidad"""
        return cls.GENERICITY_CONFIG.copy()

    @classmethod
    def get_witness_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración del testigo de cota inferior"""
        return cls.WITNESS_CONFIG.copy()

    @classmethod
    def get_output_config(cls) -> Dict[str, Any]:
        """Obtiene la configuración de salida"""
        return cls.OUTPUT_CONFIG.copy()

    @classmethod
    def get_message(cls, category: str, key: str) -> str:
        """
        Obtiene un mensaje específico

        Args:
            category: Categoría del mensaje
            key: Clave del mensaje

        Returns:
            Mensaje correspondiente o mensaje de error si no existe
        """
        try:
            return cls.MESSAGES[category][key]
        except KeyError:
            return f"❌ Mensaje no encontrado: {category}.{key}"

    @classmethod
    def setup_logging(cls, level: str = None):
        """
        Configura el sistema de logging

        Args:
            level: Nivel opcional que reemplaza al configurado
        """
        config = cls.LOGGING_CONFIG.copy()
        if level:
            config["level"] = getattr(logging, level.upper(), config["level"])
        logging.basicConfig(**config)
