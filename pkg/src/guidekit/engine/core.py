"""The two-loop guidance runtime.

The slow inference loop decides which strategies are active; the fast
guidance loop retracts stale suggestions and generates new ones from the
active strategies' actions. Any state commit schedules an immediate
guidance tick and resets the periodic timer.

One engine instance is owned by exactly one driver (replay loop or
service task); every mutation funnels through that owner, which is what
makes replays byte-identical. Errors inside one callback never abort a
tick: the offending strategy or action just sits the tick out with a
diagnostic in the log.
"""

from __future__ import annotations

from typing import Optional

from ..clock import Clock, VirtualClock
from ..script import Env, evaluate
from ..script.errors import ScriptError
from ..specs.model import ActionSpec, Bundle, StrategySpec
from ..state import AnalysisState, ChangeEvent, initialize_state, make_loader
from ..values import Value, deep_copy, deep_equal, truthy
from . import events as ev
from .config import EngineConfig
from .orchestrator import filter_candidates
from .suggestions import (
    INTERACTION_KINDS,
    IdGenerator,
    PENDING,
    Suggestion,
    suggestion_to_value,
)


class UnknownSuggestion(Exception):
    pass


class InvalidTransition(Exception):
    pass


class GuidanceEngine:
    def __init__(
        self,
        bundle: Bundle,
        config: Optional[EngineConfig] = None,
        clock: Optional[Clock] = None,
        ids: Optional[IdGenerator] = None,
        loader=None,
    ):
        self.bundle = bundle
        self.config = config or bundle.config
        self.clock = clock or VirtualClock()
        self.ids = ids or IdGenerator()
        self.log = ev.EventLog()

        self.state: AnalysisState = initialize_state(
            bundle.state,
            loader or make_loader(bundle.root),
            self.clock,
            step_budget=self.config.step_budget,
        )
        self.state.on_change(self._on_state_change)

        # Mutable per-entity `self` stores, seeded from the immutable specs.
        self.strategy_stores = {
            s.effective_id: deep_copy(s.extra_fields) for s in bundle.strategies
        }
        self.action_stores = {
            a.action_id: deep_copy(a.extra_fields) for _, a in bundle.all_actions
        }
        self.meta_store = deep_copy(bundle.meta.extra_fields) if bundle.meta else {}

        self.active: list[str] = []  # strategy ids, bundle order
        self.pending: list[Suggestion] = []  # emission order
        self.all_suggestions: dict[str, Suggestion] = {}
        self._emitted_by_action: dict[str, list[str]] = {}

        self.next_inference_due = 0.0
        self.next_guidance_due = self.config.guidance_interval_s
        self.immediate_pending = False

    # ------------------------------------------------------------------ setup

    def start(self) -> None:
        """Anchor the loop timers at the current clock; the first inference
        tick is due immediately."""
        t0 = self.clock.now()
        self.next_inference_due = t0
        self.next_guidance_due = t0 + self.config.guidance_interval_s
        self.immediate_pending = False

    def _on_state_change(self, _event: ChangeEvent) -> None:
        self.immediate_pending = True

    # ------------------------------------------------------- state operations

    def apply_properties(self, patch: dict[str, Value]) -> ChangeEvent:
        event = self.state.set_properties(patch)
        self._log_state_update(event, via="properties")
        return event

    def apply_callback(self, name: str, args: dict[str, Value]) -> ChangeEvent:
        event = self.state.invoke_update_callback(
            self.bundle.state, name, args, self.clock
        )
        self._log_state_update(event, via=f"callback:{name}")
        return event

    def _log_state_update(self, event: ChangeEvent, via: str) -> None:
        values = {key: deep_copy(self.state.values[key]) for key in event.changed_keys}
        self.log.emit(ev.state_update(
            self.clock.now(), event.revision, list(event.changed_keys), values, via,
        ))

    # ---------------------------------------------------------- interactions

    def apply_interaction(self, suggestion_id: str, kind: str) -> Suggestion:
        if kind not in INTERACTION_KINDS:
            raise ValueError(f"unknown interaction kind {kind!r}")
        suggestion = self.all_suggestions.get(suggestion_id)
        if suggestion is None:
            raise UnknownSuggestion(f"unknown suggestion '{suggestion_id}'")
        action = self.bundle.actions.get(suggestion.action_id)

        if kind in ("accept", "reject"):
            if suggestion.status != PENDING:
                raise InvalidTransition(
                    f"suggestion '{suggestion_id}' is already {suggestion.status}"
                )
            suggestion.status = "accepted" if kind == "accept" else "rejected"
            self.pending = [p for p in self.pending if p.suggestion_id != suggestion_id]

        now = self.clock.now()
        self.log.emit(ev.interaction(now, kind, suggestion_id, suggestion.status))

        hook = action.hooks.get(kind) if action else None
        if hook is not None:
            self._run_hook(suggestion, action, kind, hook)
        return suggestion

    def _run_hook(self, suggestion, action: ActionSpec, kind: str, hook) -> None:
        """Hooks run best-effort: state mutations commit as one revision,
        self mutations persist, errors only log. The status transition that
        triggered the hook is never rolled back."""
        working = deep_copy(self.state.values)
        env = Env(
            {
                "state": working,
                "self": self.action_stores[action.action_id],
                "suggestion": suggestion_to_value(suggestion),
            },
            clock=self.clock,
            step_budget=self.config.step_budget,
        )
        try:
            evaluate(hook.script, env)
        except ScriptError as err:
            self.log.emit(ev.diagnostic(
                self.clock.now(), f"action:{action.action_id}:{kind}",
                f"hook failed: {err}",
            ))
            return
        event = self.state.apply_external_mutation(working)
        if event is not None:
            self._log_state_update(event, via=f"hook:{kind}:{action.action_id}")

    def resolve_ordinal(self, action_id: str, ordinal: int) -> Optional[str]:
        """The id of the n-th (1-based) suggestion an action has emitted."""
        emitted = self._emitted_by_action.get(action_id, [])
        if 1 <= ordinal <= len(emitted):
            return emitted[ordinal - 1]
        return None

    # ------------------------------------------------------------- scheduling

    def next_due(self) -> float:
        return min(self.next_inference_due, self.next_guidance_due)

    def tick_phase(self, now: float) -> None:
        """Run the immediate tick (if an update is pending) and then every
        periodic tick that is due. Ticks never overlap by construction; the
        immediate trigger is a single coalesced flag."""
        if self.immediate_pending:
            self.immediate_pending = False
            self._guidance_tick(now, trigger="update")
            self.next_guidance_due = now + self.config.guidance_interval_s
        while self.next_inference_due <= now:
            self._inference_tick(now)
            self.next_inference_due = now + self.config.inference_interval_s
        while self.next_guidance_due <= now:
            self._guidance_tick(now, trigger="interval")
            self.next_guidance_due = now + self.config.guidance_interval_s

    # -------------------------------------------------------------- the loops

    def _callback_env(self, bindings: dict[str, Value]) -> Env:
        return Env(
            bindings,
            clock=self.clock,
            step_budget=self.config.step_budget,
            read_only=frozenset({"state"}),
        )

    def _inference_tick(self, t: float) -> None:
        snap = self.state.snapshot()
        active: list[str] = []
        for strategy in self.bundle.strategies:
            sid = strategy.effective_id
            env = self._callback_env({
                "state": deep_copy(snap.values),
                "self": self.strategy_stores[sid],
            })
            try:
                if truthy(evaluate(strategy.determine_applicability.script, env)):
                    active.append(sid)
            except ScriptError as err:
                self.log.emit(ev.diagnostic(
                    t, f"strategy:{sid}",
                    f"determine_applicability failed: {err}; strategy inactive this tick",
                ))
        deactivated = [sid for sid in self.active if sid not in active]
        self.active = active
        self.log.emit(ev.inference_tick(t, active))
        if self.config.retract_on_deactivate and deactivated:
            for suggestion in list(self.pending):
                if suggestion.strategy in deactivated:
                    self._retract(suggestion, t, reason="strategy_deactivated")

    def _guidance_tick(self, t: float, trigger: str) -> None:
        snap = self.state.snapshot()
        self.log.emit(ev.guidance_tick(t, trigger, snap.revision))

        # Pass 1: retract what has gone stale.
        for suggestion in list(self.pending):
            action = self.bundle.actions.get(suggestion.action_id)
            if action is None or action.should_retract is None:
                continue
            env = self._callback_env({
                "state": deep_copy(snap.values),
                "self": self.action_stores[action.action_id],
                "suggestion": suggestion_to_value(suggestion),
            })
            try:
                if truthy(evaluate(action.should_retract.script, env)):
                    self._retract(suggestion, t, reason="should_retract")
            except ScriptError as err:
                self.log.emit(ev.diagnostic(
                    t, f"action:{action.action_id}:should_retract", str(err),
                ))

        # Pass 2: collect candidates from active strategies.
        candidates: list[Suggestion] = []
        for strategy in self.bundle.strategies:
            if strategy.effective_id not in self.active:
                continue
            action = self.bundle.resolve_action(strategy)
            if action is None:
                continue
            candidate = self._generate_candidate(strategy, action, snap, t)
            if candidate is not None:
                candidates.append(candidate)

        # Pass 3: the meta-strategy picks; pass 4: emit.
        selected: list[Suggestion] = []
        if candidates:
            selected, diagnostics = filter_candidates(
                self.bundle.meta, self.meta_store, candidates, self.pending,
                snap, self.clock, self.config.step_budget,
            )
            self.log.emit(ev.meta_filter(
                t, candidates, [s.suggestion_id for s in selected]
            ))
            for message in diagnostics:
                self.log.emit(ev.diagnostic(t, "meta", message))
        for suggestion in selected:
            self.pending.append(suggestion)
            self.all_suggestions[suggestion.suggestion_id] = suggestion
            self._emitted_by_action.setdefault(suggestion.action_id, []).append(
                suggestion.suggestion_id
            )
            self.log.emit(ev.suggestion_emitted(t, suggestion))

    def _generate_candidate(
        self, strategy: StrategySpec, action: ActionSpec, snap, t: float,
    ) -> Optional[Suggestion]:
        store = self.action_stores[action.action_id]
        env = self._callback_env({
            "state": deep_copy(snap.values), "self": store,
        })
        try:
            if not truthy(evaluate(action.is_applicable.script, env)):
                return None
        except ScriptError as err:
            self.log.emit(ev.diagnostic(
                t, f"action:{action.action_id}:is_applicable", str(err),
            ))
            return None

        env = self._callback_env({
            "state": deep_copy(snap.values), "self": store,
        })
        try:
            produced = evaluate(action.generate_suggestion_content.script, env)
        except ScriptError as err:
            self.log.emit(ev.diagnostic(
                t, f"action:{action.action_id}:generate_suggestion_content", str(err),
            ))
            return None

        problem = None
        if not isinstance(produced, dict):
            problem = "did not return a map"
        else:
            missing = [k for k in ("content", "title", "description") if k not in produced]
            if missing:
                problem = f"missing key(s) {', '.join(missing)}"
            elif not isinstance(produced["title"], str) or not produced["title"]:
                problem = "title must be a non-empty string"
            elif not isinstance(produced["description"], str) or not produced["description"]:
                problem = "description must be a non-empty string"
        if problem:
            self.log.emit(ev.diagnostic(
                t, f"action:{action.action_id}:generate_suggestion_content",
                f"malformed suggestion content: {problem}; candidate dropped",
            ))
            return None

        content = produced["content"]
        if self.config.dedup == "per-action-content" and any(
            p.action_id == action.action_id and deep_equal(p.content, content)
            for p in self.pending
        ):
            return None

        return Suggestion(
            suggestion_id=self.ids.next(),
            strategy=strategy.effective_id,
            action_id=action.action_id,
            degree=strategy.degree,
            content=content,
            title=produced["title"],
            description=produced["description"],
            created_revision=snap.revision,
            created_at=t,
        )

    def _retract(self, suggestion: Suggestion, t: float, reason: str) -> None:
        suggestion.status = "retracted"
        self.pending = [
            p for p in self.pending if p.suggestion_id != suggestion.suggestion_id
        ]
        self.log.emit(ev.retraction(t, suggestion.suggestion_id, reason))

    # ------------------------------------------------------------------ reads

    def pending_payloads(self) -> list[Value]:
        return [suggestion_to_value(s) for s in self.pending]

    def health(self) -> dict[str, Value]:
        return {
            "status": "ok",
            "revision": float(self.state.revision),
            "active_strategies": list(self.active),
        }
