"""
Eventos de progreso
Los bucles largos (filas de un barrido en λ, ensayos de genericidad)
publican un evento por paso; la CLI u otro consumidor se suscribe por nombre.
"""
import logging
import threading
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)

WILDCARD = "*"


class Event:
    """
    Paso de progreso publicado por un cálculo

    sequence es el orden de publicación dentro del manejador.
    """

    def __init__(self, name: str, data: Dict[str, Any] = None, sequence: int = 0):
        self.name = name
        self.data = data or {}
        self.sequence = sequence

    def __repr__(self):
        return f"Event(name='{self.name}', sequence={self.sequence}, data={self.data})"


class EventManager:
    """
    Registro de suscriptores por nombre de evento

    Es seguro entre hilos: los barridos con --workers publican desde el pool.
    """

    def __init__(self):
        self._handlers: Dict[str, List[Callable]] = {}
        self._lock = threading.Lock()
        self._published = 0
        logger.debug("EventManager inicializado")

    def register_handler(self, event_name: str, handler: Callable):
        """
        Suscribe handler a event_name ("*" recibe todos los eventos)

        Args:
            event_name: Nombre del evento, p. ej. "normest.row"
            handler: Función que recibe un Event
        """
        with self._lock:
            self._handlers.setdefault(event_name, []).append(handler)
        logger.debug(f"Suscriptor añadido a {event_name}")

    def unregister_handler(self, event_name: str, handler: Callable):
        with self._lock:
            subscribers = self._handlers.get(event_name, [])
            if handler in subscribers:
                subscribers.remove(handler)
                logger.debug(f"Suscriptor retirado de {event_name}")
                return
        logger.warning(f"⚠️ {event_name}: el suscriptor no estaba registrado")

    def emit(self, event_name: str, data: Dict[str, Any] = None) -> bool:
        """
        Publica un evento a sus suscriptores y a los comodín

        Un suscriptor que falla se registra en el log; el cálculo sigue y
        los demás suscriptores reciben el evento igualmente.

        Returns:
            False si algún suscriptor lanzó una excepción
        """
        with self._lock:
            self._published += 1
            event = Event(event_name, data, self._published)
            subscribers = self._handlers.get(event_name, []) + self._handlers.get(WILDCARD, [])

        delivered = True
        for handler in subscribers:
            try:
                handler(event)
            except Exception as e:
                logger.error(f"❌ Suscriptor de {event_name} falló: {e}")
                delivered = False
        return delivered

    def get_registered_events(self) -> list:
        """Nombres con al menos una suscripción registrada"""
        with self._lock:
            return [name for name, subscribers in self._handlers.items() if subscribers]

    def clear_handlers(self, event_name: Optional[str] = None):
        """
        Retira las suscripciones de un evento, o todas si event_name es None
        """
        with self._lock:
            if event_name is None:
                self._handlers.clear()
            else:
                self._handlers.pop(event_name, None)
        logger.debug(f"Suscripciones retiradas: {event_name or 'todas'}")


# Manejador compartido por controladores y CLI
event_manager = EventManager()


def emit_event(event_name: str, data: Dict[str, Any] = None) -> bool:
    """Publica en el manejador compartido"""
    return event_manager.emit(event_name, data)


def register_event_handler(event_name: str, handler: Callable):
    """Suscribe en el manejador compartido"""
    event_manager.register_handler(event_name, handler)
