"""
Modelo de configuración de una ejecución de la CLI
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

COMMANDS = ("check", "newton", "predict", "pencil", "sweep", "fit",
            "genericity", "examples", "conjecture", "witness")
FORMATS = ("json", "csv", "plot-data")


@dataclass
class RunConfig:
    """
    Parámetros de una ejecución; basta con ellos y la semilla para
    reproducir la salida
    """
    command: str
    phase_path: Optional[str] = None
    expr: Optional[str] = None
    corpus: Optional[str] = None
    phi1: Optional[str] = None
    phi2: Optional[str] = None
    # newton
    modified: bool = False
    samples: Optional[int] = None
    # predict / check
    certify: bool = False
    sphere_points: Optional[int] = None
    # sweep / witness / conjecture
    lam_min: float = 50.0
    lam_max: float = 800.0
    points: int = 8
    grid: Optional[int] = None
    grid_cap: Optional[int] = None
    tol: Optional[float] = None
    # fit
    input_path: Optional[str] = None
    drop_fraction: Optional[float] = None
    # genericity
    n_x: int = 2
    n_z: int = 2
    m: int = 3
    trials: Optional[int] = None
    # común
    seed: int = 0
    workers: int = 1
    strict: bool = False
    out: Optional[str] = None
    fmt: str = "json"
    write_dir: Optional[str] = None
    log_level: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def has_phase(self) -> bool:
        return bool(self.phase_path or self.expr or self.corpus)

    def to_dict(self) -> dict:
        """Parámetros registrados en los artefactos de salida"""
        data = asdict(self)
        data.pop("log_level")
        data.pop("extra")
        return {k: v for k, v in data.items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)
