"""Evaluator for parsed callback scripts.

Evaluation is deterministic given the script, the env bindings, and the
clock value. Side effects are confined to the ``state`` and ``self``
bindings; everything else the script touches lives in a private local
frame that dies with the evaluation. There is no file, network, or
ambient-time access: ``now()`` reads the injected clock and nothing else.

Numbers are finite 64-bit floats. Any operation that would produce
infinity or NaN raises instead, so every value a script can build stays
wire-serializable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..clock import Clock, VirtualClock
from ..values import Value, canon_json, deep_copy, deep_equal, number_repr, truthy
from . import nodes as n
from .errors import BudgetExceeded, ScriptRuntimeError

DEFAULT_STEP_BUDGET = 1_000_000


@dataclass
class Env:
    """One evaluation's world: bindings, a clock, and a statement budget.

    Single-use by contract; the engine never lets two evaluations share one.
    Roots listed in ``read_only`` (snapshot state during ticks, the
    ``suggestion`` argument, ...) reject path assignments.
    """

    bindings: dict[str, Value]
    clock: Clock = field(default_factory=VirtualClock)
    step_budget: int = DEFAULT_STEP_BUDGET
    read_only: frozenset[str] = frozenset()


class _Return(Exception):
    def __init__(self, value: Value):
        self.value = value


def _type_name(value: Value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "list"
    return "map"


class _Interp:
    def __init__(self, env: Env):
        self.env = env
        # Only state and self may observe mutations; every other binding is
        # evaluated against a private copy so not even aliasing through a
        # local can leak a write back to the caller.
        self.bindings = {
            name: value if name in ("state", "self") else deep_copy(value)
            for name, value in env.bindings.items()
        }
        self.locals: dict[str, Value] = {}
        self.steps = 0

    # -- helpers --

    def err(self, node: n.Node, message: str) -> ScriptRuntimeError:
        return ScriptRuntimeError(message, node.line, node.col)

    def spend(self, node: n.Node) -> None:
        self.steps += 1
        if self.steps > self.env.step_budget:
            raise BudgetExceeded(
                f"statement budget of {self.env.step_budget} exceeded",
                node.line, node.col,
            )

    def number(self, node: n.Node, value: Value, what: str) -> float:
        # bool is not float in Python, so true/false are rejected here too.
        if isinstance(value, float):
            return value
        raise self.err(node, f"type mismatch: {what} must be a number, got {_type_name(value)}")

    def finite(self, node: n.Node, result: float) -> float:
        if not math.isfinite(result):
            raise self.err(node, "numeric overflow: result is not a finite number")
        return result

    def int_index(self, node: n.Node, value: Value, what: str) -> int:
        num = self.number(node, value, what)
        if num != int(num):
            raise self.err(node, f"{what} must be a whole number, got {number_repr(num)}")
        return int(num)

    # -- statements --

    def exec_body(self, body: tuple[n.Stmt, ...]) -> None:
        for stmt in body:
            self.exec_stmt(stmt)

    def exec_stmt(self, stmt: n.Stmt) -> None:
        self.spend(stmt)
        if isinstance(stmt, n.Return):
            raise _Return(self.eval(stmt.value))
        if isinstance(stmt, n.Assign):
            self.assign(stmt)
            return
        if isinstance(stmt, n.ExprStmt):
            self.eval(stmt.expr)
            return
        if isinstance(stmt, n.If):
            branch = stmt.then_body if truthy(self.eval(stmt.cond)) else stmt.else_body
            self.exec_body(branch)
            return
        if isinstance(stmt, n.For):
            if stmt.var in self.bindings:
                raise self.err(stmt, f"cannot rebind '{stmt.var}'")
            value = self.eval(stmt.iterable)
            if isinstance(value, list):
                items = list(value)
            elif isinstance(value, dict):
                items = sorted(value.keys())
            else:
                raise self.err(
                    stmt, f"type mismatch: cannot iterate over {_type_name(value)}"
                )
            for item in items:
                self.spend(stmt)
                self.locals[stmt.var] = item
                self.exec_body(stmt.body)
            return
        raise self.err(stmt, f"unsupported statement {type(stmt).__name__}")

    def assign(self, stmt: n.Assign) -> None:
        target = stmt.target
        value = self.eval(stmt.value)
        if isinstance(target, n.Name):
            if target.name in self.bindings:
                raise self.err(target, f"cannot rebind '{target.name}'")
            self.locals[target.name] = value
            return
        root = target
        while isinstance(root, (n.FieldAccess, n.IndexAccess)):
            root = root.obj
        if isinstance(root, n.Name) and root.name in self.bindings:
            # Side effects are confined to state.* and self.* by language rule.
            if root.name not in ("state", "self"):
                raise self.err(
                    root,
                    f"binding '{root.name}' cannot be mutated "
                    "(only state and self are writable)",
                )
            if root.name in self.env.read_only:
                raise self.err(root, f"binding '{root.name}' is read-only in this context")
        if isinstance(target, n.FieldAccess):
            base = self.eval(target.obj)
            if not isinstance(base, dict):
                raise self.err(
                    target, f"type mismatch: cannot set field on {_type_name(base)}"
                )
            base[target.field] = value
            return
        if isinstance(target, n.IndexAccess):
            base = self.eval(target.obj)
            key = self.eval(target.index)
            if isinstance(base, dict):
                if not isinstance(key, str):
                    raise self.err(target, f"map keys are strings, got {_type_name(key)}")
                base[key] = value
                return
            if isinstance(base, list):
                idx = self.int_index(target, key, "list index")
                if idx < -len(base) or idx >= len(base):
                    raise self.err(target, f"index {idx} out of range (len {len(base)})")
                base[idx] = value
                return
            raise self.err(target, f"type mismatch: cannot index {_type_name(base)}")
        raise self.err(stmt, "invalid assignment target")

    # -- expressions --

    def eval(self, expr: n.Expr) -> Value:
        if isinstance(expr, n.Literal):
            return expr.value
        if isinstance(expr, n.Name):
            if expr.name in self.locals:
                return self.locals[expr.name]
            if expr.name in self.bindings:
                return self.bindings[expr.name]
            raise self.err(expr, f"unknown identifier '{expr.name}'")
        if isinstance(expr, n.FieldAccess):
            base = self.eval(expr.obj)
            if isinstance(base, dict):
                if expr.field in base:
                    return base[expr.field]
                raise self.err(expr, f"unknown field '{expr.field}'")
            raise self.err(
                expr, f"type mismatch: cannot read field of {_type_name(base)}"
            )
        if isinstance(expr, n.IndexAccess):
            base = self.eval(expr.obj)
            key = self.eval(expr.index)
            if isinstance(base, dict):
                if not isinstance(key, str):
                    raise self.err(expr, f"map keys are strings, got {_type_name(key)}")
                if key in base:
                    return base[key]
                raise self.err(expr, f"unknown field '{key}'")
            if isinstance(base, list):
                idx = self.int_index(expr, key, "list index")
                if idx < -len(base) or idx >= len(base):
                    raise self.err(expr, f"index {idx} out of range (len {len(base)})")
                return base[idx]
            if isinstance(base, str):
                idx = self.int_index(expr, key, "string index")
                if idx < -len(base) or idx >= len(base):
                    raise self.err(expr, f"index {idx} out of range (len {len(base)})")
                return base[idx]
            raise self.err(expr, f"type mismatch: cannot index {_type_name(base)}")
        if isinstance(expr, n.ListLit):
            return [self.eval(item) for item in expr.items]
        if isinstance(expr, n.MapLit):
            return {key: self.eval(value) for key, value in expr.entries}
        if isinstance(expr, n.Unary):
            if expr.op == "not":
                return not truthy(self.eval(expr.operand))
            value = self.number(expr, self.eval(expr.operand), "operand of unary '-'")
            return -value
        if isinstance(expr, n.Binary):
            return self.binary(expr)
        if isinstance(expr, n.IfExpr):
            return self.eval(expr.then if truthy(self.eval(expr.cond)) else expr.other)
        if isinstance(expr, n.Call):
            return self.call(expr)
        raise self.err(expr, f"unsupported expression {type(expr).__name__}")

    def binary(self, expr: n.Binary) -> Value:
        op = expr.op
        if op == "and":
            left = self.eval(expr.left)
            return self.eval(expr.right) if truthy(left) else left
        if op == "or":
            left = self.eval(expr.left)
            return left if truthy(left) else self.eval(expr.right)

        left = self.eval(expr.left)
        right = self.eval(expr.right)
        if op == "==":
            return deep_equal(left, right)
        if op == "!=":
            return not deep_equal(left, right)
        if op in ("<", "<=", ">", ">="):
            both_numbers = (
                isinstance(left, float) and not isinstance(left, bool)
                and isinstance(right, float) and not isinstance(right, bool)
            )
            both_strings = isinstance(left, str) and isinstance(right, str)
            if not (both_numbers or both_strings):
                raise self.err(
                    expr,
                    f"type mismatch: cannot compare {_type_name(left)} "
                    f"{op} {_type_name(right)}",
                )
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        if op == "+" and isinstance(left, str) and isinstance(right, str):
            return left + right
        lnum = self.number(expr, left, f"left operand of '{op}'")
        rnum = self.number(expr, right, f"right operand of '{op}'")
        if op == "+":
            return self.finite(expr, lnum + rnum)
        if op == "-":
            return self.finite(expr, lnum - rnum)
        if op == "*":
            return self.finite(expr, lnum * rnum)
        if op == "/":
            if rnum == 0.0:
                raise self.err(expr, "division by zero")
            return self.finite(expr, lnum / rnum)
        if op == "%":
            if rnum == 0.0:
                raise self.err(expr, "modulo by zero")
            return self.finite(expr, lnum % rnum)
        raise self.err(expr, f"unknown operator '{op}'")

    # -- builtins --

    def call(self, expr: n.Call) -> Value:
        handler = _BUILTINS.get(expr.name)
        if handler is None:
            raise self.err(expr, f"unknown builtin '{expr.name}'")
        lo, hi, fn = handler
        if not (lo <= len(expr.args) <= hi):
            wanted = str(lo) if lo == hi else f"{lo} to {hi}"
            raise self.err(
                expr,
                f"builtin '{expr.name}' takes {wanted} argument(s), "
                f"got {len(expr.args)}",
            )
        args = [self.eval(arg) for arg in expr.args]
        return fn(self, expr, args)


# Builtin registry: name -> (min args, max args, implementation).


def _bi_len(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = args[0]
    if isinstance(value, (list, dict, str)):
        return float(len(value))
    raise ip.err(node, f"type mismatch: len() of {_type_name(value)}")


def _want_list(ip: _Interp, node: n.Call, value: Value, builtin: str) -> list:
    if not isinstance(value, list):
        raise ip.err(node, f"type mismatch: {builtin}() needs a list, got {_type_name(value)}")
    return value


def _bi_tail(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    items = _want_list(ip, node, args[0], "tail")
    count = ip.int_index(node, args[1], "tail count")
    if count < 0:
        raise ip.err(node, "tail count must not be negative")
    return list(items[len(items) - min(count, len(items)):])


def _bi_head(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    items = _want_list(ip, node, args[0], "head")
    count = ip.int_index(node, args[1], "head count")
    if count < 0:
        raise ip.err(node, "head count must not be negative")
    return list(items[:count])


def _bi_append(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    items = _want_list(ip, node, args[0], "append")
    return list(items) + [args[1]]


def _bi_contains(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    haystack, needle = args
    if isinstance(haystack, list):
        return any(deep_equal(item, needle) for item in haystack)
    if isinstance(haystack, str):
        if not isinstance(needle, str):
            raise ip.err(node, "contains() on a string needs a string needle")
        return needle in haystack
    raise ip.err(node, f"type mismatch: contains() of {_type_name(haystack)}")


def _bi_keys(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = args[0]
    if not isinstance(value, dict):
        raise ip.err(node, f"type mismatch: keys() of {_type_name(value)}")
    return sorted(value.keys())


def _bi_has(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value, key = args
    if not isinstance(value, dict):
        raise ip.err(node, f"type mismatch: has() of {_type_name(value)}")
    if not isinstance(key, str):
        raise ip.err(node, f"map keys are strings, got {_type_name(key)}")
    return key in value


def _bi_abs(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    return abs(ip.number(node, args[0], "abs() argument"))


def _minmax(ip: _Interp, node: n.Call, args: list[Value], pick) -> Value:
    if len(args) == 1 and isinstance(args[0], list):
        values = args[0]
        if not values:
            raise ip.err(node, "min()/max() of an empty list")
    else:
        values = args
    nums = [ip.number(node, v, "min()/max() argument") for v in values]
    return pick(nums)


def _bi_clamp(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = ip.number(node, args[0], "clamp() value")
    lo = ip.number(node, args[1], "clamp() lower bound")
    hi = ip.number(node, args[2], "clamp() upper bound")
    if lo > hi:
        raise ip.err(node, f"clamp() bounds out of order ({number_repr(lo)} > {number_repr(hi)})")
    return min(max(value, lo), hi)


def _bi_sqrt(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = ip.number(node, args[0], "sqrt() argument")
    if value < 0:
        raise ip.err(node, "sqrt() of a negative number")
    return math.sqrt(value)


def _bi_round(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    # Half away from zero, which is what script authors expect.
    value = ip.number(node, args[0], "round() argument")
    rounded = math.floor(value + 0.5) if value >= 0 else math.ceil(value - 0.5)
    return float(rounded)


def _bi_str(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = args[0]
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return number_repr(value)
    if isinstance(value, str):
        return value
    return canon_json(value)


def _bi_num(ip: _Interp, node: n.Call, args: list[Value]) -> Value:
    value = args[0]
    if isinstance(value, bool):
        return 1.0 if value else 0.0
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            parsed = float(value)
        except ValueError:
            raise ip.err(node, f"num() cannot parse {value!r}") from None
        return ip.finite(node, parsed)
    raise ip.err(node, f"type mismatch: num() of {_type_name(value)}")


_BUILTINS: dict[str, tuple[int, int, object]] = {
    "len": (1, 1, _bi_len),
    "tail": (2, 2, _bi_tail),
    "head": (2, 2, _bi_head),
    "append": (2, 2, _bi_append),
    "contains": (2, 2, _bi_contains),
    "keys": (1, 1, _bi_keys),
    "has": (2, 2, _bi_has),
    "abs": (1, 1, _bi_abs),
    "min": (1, 64, lambda ip, node, args: _minmax(ip, node, args, min)),
    "max": (1, 64, lambda ip, node, args: _minmax(ip, node, args, max)),
    "clamp": (3, 3, _bi_clamp),
    "sqrt": (1, 1, _bi_sqrt),
    "floor": (1, 1, lambda ip, node, args: float(math.floor(ip.number(node, args[0], "floor() argument")))),
    "round": (1, 1, _bi_round),
    "now": (0, 0, lambda ip, node, args: float(ip.env.clock.now())),
    "str": (1, 1, _bi_str),
    "num": (1, 1, _bi_num),
}

BUILTIN_NAMES = frozenset(_BUILTINS)


def evaluate(script: n.Script, env: Env) -> Value:
    """Run a script to completion and return its value.

    A script that never executes ``return`` yields null. The result is a
    deep copy, so callers can keep it without aliasing env internals.
    """
    for arg in script.declared_args:
        if arg not in env.bindings:
            raise ScriptRuntimeError(f"missing argument binding '{arg}'")
    interp = _Interp(env)
    try:
        interp.exec_body(script.body)
    except _Return as ret:
        return deep_copy(ret.value)
    return None


def free_identifiers(script: n.Script) -> list[str]:
    """Root names a script reads or mutates that it does not bind itself.

    Locals introduced by bare assignment or loop variables are excluded,
    builtins are excluded, and names called like builtins but unknown are
    included so validators can flag them before runtime does.
    """
    free: set[str] = set()
    bound: set[str] = set()

    def walk_expr(expr: n.Expr) -> None:
        if isinstance(expr, n.Name):
            if expr.name not in bound:
                free.add(expr.name)
        elif isinstance(expr, (n.FieldAccess,)):
            walk_expr(expr.obj)
        elif isinstance(expr, n.IndexAccess):
            walk_expr(expr.obj)
            walk_expr(expr.index)
        elif isinstance(expr, n.ListLit):
            for item in expr.items:
                walk_expr(item)
        elif isinstance(expr, n.MapLit):
            for _, value in expr.entries:
                walk_expr(value)
        elif isinstance(expr, n.Unary):
            walk_expr(expr.operand)
        elif isinstance(expr, n.Binary):
            walk_expr(expr.left)
            walk_expr(expr.right)
        elif isinstance(expr, n.IfExpr):
            walk_expr(expr.cond)
            walk_expr(expr.then)
            walk_expr(expr.other)
        elif isinstance(expr, n.Call):
            if expr.name not in BUILTIN_NAMES:
                free.add(expr.name)
            for arg in expr.args:
                walk_expr(arg)

    def walk_body(body: tuple[n.Stmt, ...]) -> None:
        for stmt in body:
            if isinstance(stmt, n.Assign):
                walk_expr(stmt.value)
                if isinstance(stmt.target, n.Name):
                    bound.add(stmt.target.name)
                else:
                    walk_expr(stmt.target)
            elif isinstance(stmt, n.ExprStmt):
                walk_expr(stmt.expr)
            elif isinstance(stmt, n.Return):
                walk_expr(stmt.value)
            elif isinstance(stmt, n.If):
                walk_expr(stmt.cond)
                walk_body(stmt.then_body)
                walk_body(stmt.else_body)
            elif isinstance(stmt, n.For):
                walk_expr(stmt.iterable)
                # Locals are function-scoped, so the loop variable stays
                # bound after the loop, exactly like at runtime.
                bound.add(stmt.var)
                walk_body(stmt.body)

    walk_body(script.body)
    return sorted(free)
