# Models package
from .poly import MultiIndex, HomPoly, PhasePoly, dim_phase_space, random_phase
from .hessian import HessianMatrix, mixed_hessian
from .binary_form import BinaryForm
from .reports import (
    QuadraticFormPQR,
    Thm14Report,
    GeometryReport,
    NewtonData,
    ModifiedNewtonResult,
    DecayPrediction,
    AmplitudeSpec,
    NormRow,
    NormSweepResult,
    PencilPhase,
)
from .run_config import RunConfig
from .validators import RunConfigValidator, LambdaRangeValidator, BinaryFormTextValidator

__all__ = [
    'MultiIndex',
    'HomPoly',
    'PhasePoly',
    'dim_phase_space',
    'random_phase',
    'HessianMatrix',
    'mixed_hessian',
    'BinaryForm',
    'QuadraticFormPQR',
    'Thm14Report',
    'GeometryReport',
    'NewtonData',
    'ModifiedNewtonResult',
    'DecayPrediction',
    'AmplitudeSpec',
    'NormRow',
    'NormSweepResult',
    'PencilPhase',
    'RunConfig',
    'RunConfigValidator',
    'LambdaRangeValidator',
    'BinaryFormTextValidator',
]
