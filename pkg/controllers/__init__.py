# Controllers package
from .hessmap_controller import HessMapController
from .binres_controller import BinResController
from .cubic22_controller import Cubic22Controller
from .newton_controller import NewtonController
from .predict_controller import PredictController
from .normest_controller import NormEstController
from .pencil_controller import PencilController
from .app_controller import AppController

__all__ = [
    'HessMapController',
    'BinResController',
    'Cubic22Controller',
    'NewtonController',
    'PredictController',
    'NormEstController',
    'PencilController',
    'AppController',
]
