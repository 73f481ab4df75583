"""The sandboxed callback language: parse once, evaluate many times."""

from .errors import BudgetExceeded, ScriptError, ScriptRuntimeError, ScriptSyntaxError
from .format import format_script
from .interp import BUILTIN_NAMES, DEFAULT_STEP_BUDGET, Env, evaluate, free_identifiers
from .nodes import Script
from .parser import parse_script

__all__ = [
    "BUILTIN_NAMES",
    "BudgetExceeded",
    "DEFAULT_STEP_BUDGET",
    "Env",
    "Script",
    "ScriptError",
    "ScriptRuntimeError",
    "ScriptSyntaxError",
    "evaluate",
    "format_script",
    "free_identifiers",
    "parse_script",
]
