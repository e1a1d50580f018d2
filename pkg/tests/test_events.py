from core.events import EventManager, emit_event, event_manager, register_event_handler


def test_handlers_receive_events():
    manager = EventManager()
    received = []
    manager.register_handler("normest.row", received.append)
    assert manager.emit("normest.row", {"lambda": 10.0})
    assert received[0].name == "normest.row"
    assert received[0].data == {"lambda": 10.0}
    assert manager.get_registered_events() == ["normest.row"]


def test_wildcard_listens_to_everything():
    manager = EventManager()
    names = []
    manager.register_handler("*", lambda event: names.append(event.name))
    manager.emit("genericity.trial")
    manager.emit("normest.row")
    assert names == ["genericity.trial", "normest.row"]


def test_failing_handler_does_not_stop_others():
    manager = EventManager()
    seen = []

    def broken(event):
        raise RuntimeError("fallo")

    manager.register_handler("x", broken)
    manager.register_handler("x", seen.append)
    assert not manager.emit("x")
    assert len(seen) == 1


def test_unregister_and_clear():
    manager = EventManager()
    handler = lambda event: None  # noqa: E731
    manager.register_handler("a", handler)
    manager.unregister_handler("a", handler)
    manager.unregister_handler("a", handler)
    manager.register_handler("b", handler)
    manager.clear_handlers("b")
    assert manager.emit("b")
    manager.register_handler("c", handler)
    manager.clear_handlers()
    assert manager.get_registered_events() == []


def test_global_helpers():
    events = []
    register_event_handler("normest.row", events.append)
    assert emit_event("normest.row", {"norm": 0.5})
    assert events[0].data["norm"] == 0.5
    assert "normest.row" in event_manager.get_registered_events()
