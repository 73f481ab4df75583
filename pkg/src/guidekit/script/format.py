"""Pretty-printer for parsed scripts.

Printing a script and re-parsing the output yields an equal AST; the
printer inserts parentheses exactly where precedence requires them.
"""

from __future__ import annotations

from ..values import number_repr
from . import nodes as n
from .lexer import KEYWORDS

# Mirror of the parser's precedence ladder.
_LEVEL_IF = 1
_LEVEL_OR = 2
_LEVEL_AND = 3
_LEVEL_NOT = 4
_LEVEL_CMP = 5
_LEVEL_ADD = 6
_LEVEL_MUL = 7
_LEVEL_UNARY = 8
_LEVEL_POSTFIX = 9
_LEVEL_ATOM = 10

_BINARY_LEVEL = {
    "or": _LEVEL_OR,
    "and": _LEVEL_AND,
    "==": _LEVEL_CMP, "!=": _LEVEL_CMP, "<": _LEVEL_CMP,
    "<=": _LEVEL_CMP, ">": _LEVEL_CMP, ">=": _LEVEL_CMP,
    "+": _LEVEL_ADD, "-": _LEVEL_ADD,
    "*": _LEVEL_MUL, "/": _LEVEL_MUL, "%": _LEVEL_MUL,
}

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _quote(text: str) -> str:
    return '"' + "".join(_STRING_ESCAPES.get(ch, ch) for ch in text) + '"'


def _fmt(expr: n.Expr, parent_level: int) -> str:
    if isinstance(expr, n.Literal):
        value = expr.value
        if value is None:
            return "null"
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return number_repr(value)
        return _quote(value)
    if isinstance(expr, n.Name):
        return expr.name
    if isinstance(expr, n.FieldAccess):
        return f"{_fmt(expr.obj, _LEVEL_POSTFIX)}.{expr.field}"
    if isinstance(expr, n.IndexAccess):
        return f"{_fmt(expr.obj, _LEVEL_POSTFIX)}[{_fmt(expr.index, _LEVEL_IF)}]"
    if isinstance(expr, n.ListLit):
        return "[" + ", ".join(_fmt(item, _LEVEL_IF) for item in expr.items) + "]"
    if isinstance(expr, n.MapLit):
        parts = []
        for key, value in expr.entries:
            shown = key if key.isidentifier() and key not in KEYWORDS else _quote(key)
            parts.append(f"{shown}: {_fmt(value, _LEVEL_IF)}")
        return "{" + ", ".join(parts) + "}"
    if isinstance(expr, n.Unary):
        if expr.op == "not":
            text = f"not {_fmt(expr.operand, _LEVEL_NOT)}"
            return _wrap(text, _LEVEL_NOT, parent_level)
        text = f"-{_fmt(expr.operand, _LEVEL_UNARY)}"
        return _wrap(text, _LEVEL_UNARY, parent_level)
    if isinstance(expr, n.Binary):
        level = _BINARY_LEVEL[expr.op]
        # Comparisons are non-associative, so a comparison child on either
        # side must be parenthesized; other operators are left-associative.
        left_level = level + 1 if level == _LEVEL_CMP else level
        text = f"{_fmt(expr.left, left_level)} {expr.op} {_fmt(expr.right, level + 1)}"
        return _wrap(text, level, parent_level)
    if isinstance(expr, n.IfExpr):
        text = (
            f"if {_fmt(expr.cond, _LEVEL_IF)} then {_fmt(expr.then, _LEVEL_IF)} "
            f"else {_fmt(expr.other, _LEVEL_IF)}"
        )
        return _wrap(text, _LEVEL_IF, parent_level)
    if isinstance(expr, n.Call):
        return f"{expr.name}(" + ", ".join(_fmt(a, _LEVEL_IF) for a in expr.args) + ")"
    raise TypeError(f"cannot format {type(expr).__name__}")


def _wrap(text: str, level: int, parent_level: int) -> str:
    return f"({text})" if level < parent_level else text


def _fmt_body(body: tuple[n.Stmt, ...], indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for stmt in body:
        if isinstance(stmt, n.Assign):
            out.append(f"{pad}{_fmt(stmt.target, _LEVEL_POSTFIX)} = {_fmt(stmt.value, _LEVEL_IF)}")
        elif isinstance(stmt, n.ExprStmt):
            out.append(f"{pad}{_fmt(stmt.expr, _LEVEL_IF)}")
        elif isinstance(stmt, n.Return):
            out.append(f"{pad}return {_fmt(stmt.value, _LEVEL_IF)}")
        elif isinstance(stmt, n.If):
            out.append(f"{pad}if {_fmt(stmt.cond, _LEVEL_IF)} then")
            _fmt_body(stmt.then_body, indent + 1, out)
            if stmt.else_body:
                out.append(f"{pad}else")
                _fmt_body(stmt.else_body, indent + 1, out)
            out.append(f"{pad}end")
        elif isinstance(stmt, n.For):
            out.append(f"{pad}for {stmt.var} in {_fmt(stmt.iterable, _LEVEL_IF)} do")
            _fmt_body(stmt.body, indent + 1, out)
            out.append(f"{pad}end")
        else:
            raise TypeError(f"cannot format {type(stmt).__name__}")


def format_script(script: n.Script) -> str:
    out: list[str] = []
    _fmt_body(script.body, 0, out)
    return "\n".join(out)
