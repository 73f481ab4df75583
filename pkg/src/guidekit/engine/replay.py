"""Deterministic replay: drive an engine through a timeline on a virtual clock.

Identical inputs produce byte-identical event traces. Events that share a
timestamp run in file order, before any tick scheduled at that instant;
an interaction referencing a suggestion that was never emitted records a
diagnostic and the replay continues.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..clock import VirtualClock
from ..script.errors import ScriptError
from ..specs.model import Bundle
from ..state import ArgumentMismatch, UnknownCallback
from ..values import Value, ensure_value
from . import events as ev
from .config import EngineConfig
from .core import GuidanceEngine, InvalidTransition, UnknownSuggestion
from .suggestions import IdGenerator

EVENT_KINDS = (
    "set_properties", "invoke_callback",
    "accept", "reject", "preview_start", "preview_end",
)


class TimelineError(Exception):
    pass


@dataclass(frozen=True)
class TimelineEvent:
    at: float
    kind: str
    payload: Value


@dataclass(frozen=True)
class Timeline:
    events: tuple[TimelineEvent, ...] = ()
    duration: float = 0.0

    @property
    def end_time(self) -> float:
        last = self.events[-1].at if self.events else 0.0
        return max(self.duration, last)


def parse_timeline(doc: Value) -> Timeline:
    if not isinstance(doc, dict):
        raise TimelineError("timeline must be a JSON object")
    raw_events = doc.get("events", [])
    if not isinstance(raw_events, list):
        raise TimelineError("timeline events must be a list")
    events: list[TimelineEvent] = []
    previous = 0.0
    for i, raw in enumerate(raw_events):
        where = f"events[{i}]"
        if not isinstance(raw, dict):
            raise TimelineError(f"{where}: must be an object")
        at = raw.get("at")
        if not isinstance(at, (int, float)) or isinstance(at, bool) or at < 0:
            raise TimelineError(f"{where}: 'at' must be a non-negative number")
        at = float(at)
        if at < previous:
            raise TimelineError(f"{where}: timestamps must be non-decreasing")
        previous = at
        kind = raw.get("kind")
        if kind not in EVENT_KINDS:
            raise TimelineError(
                f"{where}: unknown kind {kind!r}; expected one of {', '.join(EVENT_KINDS)}"
            )
        payload = ensure_value(raw.get("payload", {}), f"{where}.payload")
        events.append(TimelineEvent(at=at, kind=kind, payload=payload))
    duration = doc.get("duration", 0.0)
    if not isinstance(duration, (int, float)) or isinstance(duration, bool) or duration < 0:
        raise TimelineError("'duration' must be a non-negative number")
    return Timeline(events=tuple(events), duration=float(duration))


def load_timeline(path: str | Path) -> Timeline:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise IOError(f"cannot read timeline {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise TimelineError(f"{path}: invalid JSON ({err})") from err
    return parse_timeline(doc)


@dataclass
class ReplayResult:
    engine: GuidanceEngine
    log: "ev.EventLog" = field(init=False)

    def __post_init__(self):
        self.log = self.engine.log

    def trace_lines(self) -> list[str]:
        return self.log.lines()

    def trace_text(self) -> str:
        return "\n".join(self.trace_lines()) + "\n" if self.log.events else ""


def _resolve_interaction_target(engine: GuidanceEngine, payload: Value) -> str:
    if not isinstance(payload, dict):
        raise UnknownSuggestion("interaction payload must be an object")
    sid = payload.get("suggestion_id")
    if isinstance(sid, str):
        return sid
    action_id = payload.get("action_id")
    ordinal = payload.get("ordinal")
    if isinstance(action_id, str) and isinstance(ordinal, float) and ordinal == int(ordinal):
        resolved = engine.resolve_ordinal(action_id, int(ordinal))
        if resolved is None:
            raise UnknownSuggestion(
                f"action '{action_id}' has not emitted {int(ordinal)} suggestion(s) yet"
            )
        return resolved
    raise UnknownSuggestion(
        "interaction payload needs suggestion_id or (action_id, ordinal)"
    )


def _apply_timeline_event(engine: GuidanceEngine, event: TimelineEvent) -> None:
    if event.kind == "set_properties":
        engine.apply_properties(event.payload)
    elif event.kind == "invoke_callback":
        if not isinstance(event.payload, dict) or not isinstance(event.payload.get("name"), str):
            raise UnknownCallback("invoke_callback payload needs a 'name'")
        args = event.payload.get("args", {})
        if not isinstance(args, dict):
            raise ArgumentMismatch("invoke_callback 'args' must be an object")
        engine.apply_callback(event.payload["name"], args)
    else:
        target = _resolve_interaction_target(engine, event.payload)
        engine.apply_interaction(target, event.kind)


def run_replay(
    bundle: Bundle,
    timeline: Timeline,
    config: Optional[EngineConfig] = None,
    loader=None,
) -> ReplayResult:
    clock = VirtualClock(0.0)
    engine = GuidanceEngine(
        bundle, config=config, clock=clock, ids=IdGenerator(), loader=loader,
    )
    engine.start()
    end = timeline.end_time
    index = 0
    events = timeline.events
    while True:
        next_event_at = events[index].at if index < len(events) else math.inf
        next_tick_at = engine.next_due()
        now = min(next_event_at, next_tick_at)
        if now > end:
            break
        clock.advance_to(now)
        while index < len(events) and events[index].at == now:
            event = events[index]
            index += 1
            try:
                _apply_timeline_event(engine, event)
            except (
                UnknownSuggestion, InvalidTransition, UnknownCallback,
                ArgumentMismatch, ScriptError, ValueError,
            ) as err:
                engine.log.emit(ev.diagnostic(
                    now, "replay", f"{event.kind} event failed: {err}",
                ))
        engine.tick_phase(now)
    return ReplayResult(engine=engine)
