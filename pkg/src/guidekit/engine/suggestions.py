"""Suggestions and their lifecycle: pending until accepted, rejected, or retracted."""

from __future__ import annotations

import uuid
from dataclasses import dataclass

from ..values import Value, deep_copy

PENDING = "pending"
TERMINAL_STATUSES = ("accepted", "rejected", "retracted")
INTERACTION_KINDS = ("accept", "reject", "preview_start", "preview_end")


@dataclass
class Suggestion:
    suggestion_id: str
    strategy: str  # effective strategy id
    action_id: str
    degree: str
    content: Value
    title: str
    description: str
    created_revision: int
    created_at: float
    status: str = PENDING


def suggestion_to_value(s: Suggestion) -> dict[str, Value]:
    """The wire/script-facing shape of a suggestion."""
    return {
        "suggestion_id": s.suggestion_id,
        "strategy": s.strategy,
        "action_id": s.action_id,
        "degree": s.degree,
        "content": deep_copy(s.content),
        "title": s.title,
        "description": s.description,
        "created_revision": float(s.created_revision),
        "created_at": s.created_at,
        "status": s.status,
    }


class IdGenerator:
    """Monotonic suggestion ids: bare ``s<n>`` in replay mode for trace
    stability, ``<run prefix>-s<n>`` in live mode."""

    def __init__(self, prefix: str = ""):
        self.prefix = prefix
        self._counter = 0

    def next(self) -> str:
        self._counter += 1
        bare = f"s{self._counter}"
        return f"{self.prefix}-{bare}" if self.prefix else bare

    @classmethod
    def for_live_run(cls) -> "IdGenerator":
        return cls(prefix=uuid.uuid4().hex[:8])
