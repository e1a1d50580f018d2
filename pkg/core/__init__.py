"""
Módulo core de oscint
Contiene la configuración, los eventos de progreso y la jerarquía de errores
"""

from .config import AppConfig
from .events import EventManager, Event, event_manager, emit_event, register_event_handler
from .errors import OscIntError

__all__ = [
    'AppConfig',
    'EventManager',
    'Event',
    'event_manager',
    'emit_event',
    'register_event_handler',
    'OscIntError',
]
