"""The meta-strategy seat: filter and prioritize candidate suggestions.

With no meta-strategy configured every candidate goes out unchanged. A
spec-defined filter picks a subset (matched back by suggestion_id; its
output order becomes emission priority). The orchestrator fails open: a
crashing filter never silences the engine, it just stops filtering.
"""

from __future__ import annotations

from typing import Optional

from ..clock import Clock
from ..script import Env, evaluate
from ..script.errors import ScriptError
from ..specs.model import MetaStrategySpec
from ..state import StateSnapshot
from ..values import Value, deep_copy
from .suggestions import Suggestion, suggestion_to_value


def filter_candidates(
    meta: Optional[MetaStrategySpec],
    meta_store: dict[str, Value],
    candidates: list[Suggestion],
    pending: list[Suggestion],
    snapshot: StateSnapshot,
    clock: Clock,
    step_budget: int,
) -> tuple[list[Suggestion], list[str]]:
    """Returns (suggestions to emit, diagnostics). Emitted is always a
    subset of candidates, in the filter's order."""
    if meta is None or not candidates:
        return list(candidates), []

    by_id = {c.suggestion_id: c for c in candidates}
    bindings: dict[str, Value] = {
        "candidates": [suggestion_to_value(c) for c in candidates],
        "pending": [suggestion_to_value(p) for p in pending],
        "state": deep_copy(snapshot.values),
        "self": meta_store,
    }
    env = Env(bindings, clock=clock, step_budget=step_budget,
              read_only=frozenset({"state"}))
    try:
        result = evaluate(meta.filter_suggestions.script, env)
    except ScriptError as err:
        return list(candidates), [
            f"filter_suggestions failed ({err}); emitting all candidates"
        ]

    if not isinstance(result, list):
        return list(candidates), [
            "filter_suggestions returned a non-list; emitting all candidates"
        ]

    selected: list[Suggestion] = []
    seen: set[str] = set()
    diagnostics: list[str] = []
    for item in result:
        sid = item.get("suggestion_id") if isinstance(item, dict) else None
        if not isinstance(sid, str) or sid not in by_id:
            diagnostics.append(
                f"filter_suggestions returned unknown candidate {sid!r}; dropped"
            )
            continue
        if sid in seen:
            continue
        seen.add(sid)
        selected.append(by_id[sid])
    return selected, diagnostics
