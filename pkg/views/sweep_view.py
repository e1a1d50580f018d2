"""
Vista de barridos: CSV de filas y datos para graficar
"""
import csv
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from core.config import AppConfig
from models.reports import NormRow

logger = logging.getLogger(__name__)


def _as_bool(text: str) -> bool:
    return str(text).strip().lower() in ("1", "true", "yes")


class SweepView:
    """
    Vista CSV y plot-data de un barrido en λ
    """

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream or sys.stdout
        self.columns = AppConfig.get_output_config()["csv_columns"]

    def write_csv(self, rows: Sequence[NormRow], out: Optional[str] = None) -> Optional[Path]:
        """
        Columnas: lambda, norm, grid_n, iters, residual, resolved

        Args:
            rows: Filas del barrido
            out: Ruta de salida (None = flujo)

        Returns:
            Ruta escrita o None
        """
        handle = self.stream if out is None else open(out, "w", newline="", encoding="utf-8")
        try:
            writer = csv.DictWriter(handle, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                data = row.to_dict()
                writer.writerow({key: data[key] for key in self.columns})
        finally:
            if out is not None:
                handle.close()
        if out is not None:
            logger.info(f"CSV de barrido escrito en {out} ({len(rows)} filas)")
            return Path(out)
        return None

    def read_csv(self, path: str) -> List[NormRow]:
        """
        Lee un CSV de barrido escrito por write_csv

        Returns:
            Lista de NormRow
        """
        rows = []
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            missing = [c for c in self.columns if c not in (reader.fieldnames or [])]
            if missing:
                raise ValueError(f"Columnas faltantes en {path}: {missing}")
            for record in reader:
                rows.append(NormRow(
                    lam=float(record["lambda"]),
                    norm=float(record["norm"]),
                    grid_n=int(record["grid_n"]),
                    iters=int(record["iters"]),
                    residual=float(record["residual"]),
                    resolved=_as_bool(record["resolved"]),
                ))
        return rows

    def write_plot_data(self, rows: Sequence[NormRow], out: Optional[str] = None) -> Optional[Path]:
        """Dos columnas: log λ y log ‖T_λ‖ (solo normas positivas)"""
        lines = [f"{math.log(row.lam):.12g} {math.log(row.norm):.12g}\n"
                 for row in rows if row.norm > 0 and row.lam > 0]
        if out is None:
            self.stream.writelines(lines)
            return None
        path = Path(out)
        path.write_text("".join(lines), encoding="utf-8")
        return path
