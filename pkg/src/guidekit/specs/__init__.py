"""Bundle loading and validation for guidance spec directories."""

from .loader import FormatError, load_bundle
from .model import (
    ActionSpec,
    Bundle,
    CallbackDef,
    DEGREES,
    DataSource,
    HOOK_KINDS,
    MetaStrategySpec,
    StateSpec,
    StrategySpec,
)
from .validate import Finding, ValidationReport, validate_bundle

__all__ = [
    "ActionSpec",
    "Bundle",
    "CallbackDef",
    "DEGREES",
    "DataSource",
    "Finding",
    "FormatError",
    "HOOK_KINDS",
    "MetaStrategySpec",
    "StateSpec",
    "StrategySpec",
    "ValidationReport",
    "load_bundle",
    "validate_bundle",
]
