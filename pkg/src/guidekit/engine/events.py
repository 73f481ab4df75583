"""The engine's structured event log: one JSON object per line.

This stream is simultaneously the live debugging surface, the websocket
feed source, and the replay-test oracle, so the schema is kept flat and
every field deterministic.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..values import Value, canon_json
from .suggestions import Suggestion, suggestion_to_value


class EventLog:
    def __init__(self):
        self.events: list[dict] = []
        self._subscribers: list[Callable[[dict], None]] = []

    def subscribe(self, fn: Callable[[dict], None]) -> None:
        self._subscribers.append(fn)

    def emit(self, event: dict) -> None:
        self.events.append(event)
        for fn in self._subscribers:
            fn(event)

    def lines(self) -> list[str]:
        return [canon_json(event) for event in self.events]


def inference_tick(t: float, active: list[str]) -> dict:
    return {"event": "inference_tick", "t": t, "active": list(active)}


def guidance_tick(t: float, trigger: str, revision: int) -> dict:
    return {"event": "guidance_tick", "t": t, "trigger": trigger, "revision": revision}


def state_update(
    t: float, revision: int, keys: list[str], values: dict[str, Value], via: str,
) -> dict:
    return {
        "event": "state_update", "t": t, "revision": revision,
        "keys": list(keys), "values": values, "via": via,
    }


def suggestion_emitted(t: float, suggestion: Suggestion) -> dict:
    return {"event": "suggestion", "t": t, "suggestion": suggestion_to_value(suggestion)}


def retraction(t: float, suggestion_id: str, reason: str) -> dict:
    return {"event": "retraction", "t": t, "suggestion_id": suggestion_id, "reason": reason}


def meta_filter(t: float, candidates: list[Suggestion], selected: list[str]) -> dict:
    return {
        "event": "meta_filter", "t": t,
        "candidates": [
            {"suggestion_id": c.suggestion_id, "action_id": c.action_id}
            for c in candidates
        ],
        "selected": list(selected),
    }


def interaction(t: float, kind: str, suggestion_id: str, status: str) -> dict:
    return {
        "event": "interaction", "t": t, "kind": kind,
        "suggestion_id": suggestion_id, "status": status,
    }


def diagnostic(t: float, source: str, message: str) -> dict:
    return {"event": "diagnostic", "t": t, "source": source, "message": message}


def wire_suggestion(suggestion_payload: Value) -> dict:
    return {"type": "suggestion", "payload": suggestion_payload}


def wire_retraction(suggestion_id: str) -> dict:
    return {"type": "retraction", "payload": {"suggestion_id": suggestion_id}}


def wire_hello(engine_info: dict, pending: list[Value]) -> dict:
    payload = dict(engine_info)
    payload["pending"] = pending
    return {"type": "hello", "payload": payload}


def to_wire(event: dict) -> Optional[dict]:
    """Map a log event to its websocket message, if it has one."""
    if event["event"] == "suggestion":
        return wire_suggestion(event["suggestion"])
    if event["event"] == "retraction":
        return wire_retraction(event["suggestion_id"])
    return None
