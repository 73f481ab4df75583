"""The analysis state vector: a revisioned map of values.

Every commit bumps the revision by exactly one and notifies observers in
order. Update callbacks run against a working copy and either commit
wholesale or roll back wholesale; a failing script can never leave the
state half-mutated. Alongside user data the store keeps the per-key
last-changed revision under ``__last_changed``, the cheap delta record.
"""

from __future__ import annotations

import csv
import io
import json
import math
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .clock import Clock
from .script import Env, evaluate
from .script.errors import ScriptError
from .specs.model import StateSpec
from .values import Value, ValueError_, deep_copy, deep_equal, ensure_value

LAST_CHANGED_KEY = "__last_changed"


class UnknownCallback(Exception):
    pass


class ArgumentMismatch(Exception):
    pass


@dataclass(frozen=True)
class ChangeEvent:
    revision: int
    changed_keys: tuple[str, ...]


@dataclass(frozen=True)
class StateSnapshot:
    values: dict[str, Value]
    revision: int


Loader = Callable[[str, str], Value]  # (source, load kind) -> value


def make_loader(root: Path) -> Loader:
    """Default data-source reader: csv files become lists of row maps with
    numeric auto-detection; url sources are fetched (or read locally) and
    parsed as JSON."""

    def fetch(source: str) -> str:
        if source.startswith(("http://", "https://")):
            with urllib.request.urlopen(source, timeout=30) as response:
                return response.read().decode("utf-8")
        path = Path(source)
        if not path.is_absolute():
            path = root / path
        return path.read_text(encoding="utf-8")

    def load(source: str, kind: str) -> Value:
        text = fetch(source)
        if kind == "csv":
            rows: list[Value] = []
            for record in csv.DictReader(io.StringIO(text)):
                row: dict[str, Value] = {}
                for key, cell in record.items():
                    if key is None:
                        continue
                    cell = cell if cell is not None else ""
                    try:
                        number = float(cell)
                        row[key] = number if math.isfinite(number) else cell
                    except ValueError:
                        row[key] = cell
                rows.append(row)
            return rows
        if kind == "url":
            return ensure_value(json.loads(text), source)
        raise ValueError_(f"unsupported data source kind {kind!r}")

    return load


class AnalysisState:
    """Single-writer revisioned store. All mutation goes through commits."""

    def __init__(self, clock: Clock, step_budget: int = 1_000_000):
        self._clock = clock
        self._step_budget = step_budget
        self.values: dict[str, Value] = {LAST_CHANGED_KEY: {}}
        self.revision = 0
        self.updated_at = clock.now()
        self._observers: list[Callable[[ChangeEvent], None]] = []

    def on_change(self, observer: Callable[[ChangeEvent], None]) -> None:
        self._observers.append(observer)

    def snapshot(self) -> StateSnapshot:
        return StateSnapshot(values=deep_copy(self.values), revision=self.revision)

    def get(self, key: str) -> Value:
        return deep_copy(self.values.get(key))

    # -- commits --

    def _commit(self, new_values: dict[str, Value], changed: list[str]) -> ChangeEvent:
        self.revision += 1
        self.updated_at = self._clock.now()
        last_changed = new_values.setdefault(LAST_CHANGED_KEY, {})
        for key in changed:
            last_changed[key] = float(self.revision)
        self.values = new_values
        event = ChangeEvent(revision=self.revision, changed_keys=tuple(changed))
        for observer in self._observers:
            observer(event)
        return event

    def set_properties(self, patch: dict[str, Value]) -> ChangeEvent:
        """Assign every key in one atomic commit. New keys are created."""
        if not isinstance(patch, dict) or not patch:
            raise ValueError("patch must be a non-empty map")
        normalized = {
            key: ensure_value(value, key) for key, value in patch.items()
        }
        new_values = deep_copy(self.values)
        new_values.update(normalized)
        return self._commit(new_values, sorted(normalized))

    def invoke_update_callback(
        self, spec: StateSpec, name: str, args: dict[str, Value], clock: Clock,
    ) -> ChangeEvent:
        """Run a state-defined callback as one commit.

        The script sees the working copy under ``state``; on any script
        error the copy is discarded and no revision is consumed. A script
        that mutates nothing still commits an (empty) revision, so
        interaction-recording callbacks always wake the guidance loop.
        """
        callback = spec.update_callbacks.get(name)
        if callback is None:
            raise UnknownCallback(f"unknown state callback '{name}'")
        declared = set(callback.args)
        provided = set(args)
        if declared != provided:
            missing = sorted(declared - provided)
            extra = sorted(provided - declared)
            parts = []
            if missing:
                parts.append(f"missing: {', '.join(missing)}")
            if extra:
                parts.append(f"unexpected: {', '.join(extra)}")
            raise ArgumentMismatch(f"callback '{name}' arguments ({'; '.join(parts)})")

        working = deep_copy(self.values)
        bindings: dict[str, Value] = {"state": working}
        for arg_name in callback.args:
            bindings[arg_name] = ensure_value(args[arg_name], arg_name)
        env = Env(bindings, clock=clock, step_budget=self._step_budget)
        evaluate(callback.script, env)  # ScriptError propagates; state untouched
        changed = _diff_keys(self.values, working)
        return self._commit(working, changed)

    def apply_external_mutation(self, working: dict[str, Value]) -> Optional[ChangeEvent]:
        """Commit a working copy produced by an interaction hook, if it
        changed anything."""
        changed = _diff_keys(self.values, working)
        if not changed:
            return None
        return self._commit(working, changed)


def _diff_keys(old: dict[str, Value], new: dict[str, Value]) -> list[str]:
    changed = []
    for key in sorted(set(old) | set(new)):
        if key == LAST_CHANGED_KEY:
            continue
        if key not in old or key not in new or not deep_equal(old[key], new[key]):
            changed.append(key)
    return changed


def initialize_state(
    spec: StateSpec, loader: Loader, clock: Clock, step_budget: int = 1_000_000,
) -> AnalysisState:
    """Build the state vector: literal fields, then data sources, then the
    optional initialize callback. Revision is 0 afterwards."""
    state = AnalysisState(clock, step_budget=step_budget)
    for key, value in spec.fields.items():
        state.values[key] = deep_copy(value)
    for source in spec.data_sources:
        try:
            state.values[source.target_field] = ensure_value(
                loader(source.source, source.load), source.target_field
            )
        except (OSError, json.JSONDecodeError, ValueError_) as err:
            raise IOError(
                f"data source '{source.target_field}' "
                f"({source.load}: {source.source}): {err}"
            ) from err
    if spec.initialize is not None:
        env = Env({"state": state.values}, clock=clock, step_budget=step_budget)
        try:
            evaluate(spec.initialize.script, env)
        except ScriptError as err:
            raise ScriptError(
                f"{spec.file}: initialize callback failed: {err}", err.line, err.col
            ) from err
    state.revision = 0
    state.updated_at = clock.now()
    return state
