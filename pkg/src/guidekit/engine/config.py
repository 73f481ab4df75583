"""Engine tuning knobs, overridable via engine.yaml and CLI flags."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..script.interp import DEFAULT_STEP_BUDGET

DEDUP_MODES = ("per-action-content", "off")


@dataclass(frozen=True)
class EngineConfig:
    guidance_interval_s: float = 1.0
    inference_interval_s: float = 30.0
    step_budget: int = DEFAULT_STEP_BUDGET
    dedup: str = "per-action-content"
    retract_on_deactivate: bool = True

    def __post_init__(self):
        if self.guidance_interval_s <= 0 or self.inference_interval_s <= 0:
            raise ValueError("loop intervals must be positive")
        if self.guidance_interval_s > self.inference_interval_s:
            raise ValueError(
                "guidance interval must not exceed the inference interval"
            )
        if self.step_budget <= 0:
            raise ValueError("step_budget must be positive")
        if self.dedup not in DEDUP_MODES:
            raise ValueError(f"dedup must be one of {DEDUP_MODES}")

    def with_overrides(self, **kwargs) -> "EngineConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs) if kwargs else self
