"""
Vista de reportes
Emite los resultados como JSON canónico. La marca de tiempo y el entorno
van en un canal lateral de metadatos para que la salida principal sea
idéntica byte a byte entre ejecuciones con la misma configuración.
"""
import json
import logging
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, TextIO

from core.config import AppConfig

logger = logging.getLogger(__name__)


def _default(value):
    """Serializa tipos no nativos (Fraction, numpy) como cadenas o números"""
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, int):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"Tipo no serializable: {type(value).__name__}")


class ReportView:
    """
    Vista de salida JSON
    """

    def __init__(self, stream: Optional[TextIO] = None):
        """
        Inicializa la vista

        Args:
            stream: Flujo de salida por defecto (stdout)
        """
        self.stream = stream or sys.stdout
        self.config = AppConfig.get_output_config()

    def render(self, data: dict) -> str:
        """
        JSON canónico: claves ordenadas y sangría fija

        Args:
            data: Resultado de un controlador

        Returns:
            Texto JSON terminado en salto de línea
        """
        return json.dumps(data, indent=self.config["indent"], sort_keys=self.config["sort_keys"],
                          ensure_ascii=False, default=_default) + "\n"

    def emit(self, data: dict, out: Optional[str] = None) -> Optional[Path]:
        """
        Escribe el resultado en un archivo o en el flujo

        Args:
            data: Resultado
            out: Ruta de salida (None = flujo)

        Returns:
            Ruta escrita o None
        """
        text = self.render(data)
        if out is None:
            self.stream.write(text)
            return None
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Reporte escrito en {path}")
        return path

    def write_metadata(self, command: str, config: dict, out: Optional[str] = None) -> dict:
        """
        Canal lateral de metadatos (marca de tiempo, versiones)

        Con out se escribe junto al reporte como <out>.meta.json; sin él
        se registra en el log.
        """
        metadata = {
            "command": command,
            "config": config,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "python": platform.python_version(),
        }
        if out is None:
            logger.info(f"Metadatos: {json.dumps(metadata, sort_keys=True, default=_default)}")
        else:
            meta_path = Path(f"{out}.meta.json")
            meta_path.parent.mkdir(parents=True, exist_ok=True)
            meta_path.write_text(self.render(metadata), encoding="utf-8")
        return metadata
