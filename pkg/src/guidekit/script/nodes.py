"""AST for the callback language. Nodes are frozen; scripts never change after parse."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..values import Value


@dataclass(frozen=True)
class Node:
    line: int
    col: int


# --- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class Literal(Node):
    value: Value  # None, bool, float or str


@dataclass(frozen=True)
class Name(Node):
    name: str


@dataclass(frozen=True)
class FieldAccess(Node):
    obj: "Expr"
    field: str


@dataclass(frozen=True)
class IndexAccess(Node):
    obj: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class ListLit(Node):
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class MapLit(Node):
    entries: tuple[tuple[str, "Expr"], ...]


@dataclass(frozen=True)
class Unary(Node):
    op: str  # "-" or "not"
    operand: "Expr"


@dataclass(frozen=True)
class Binary(Node):
    op: str  # + - * / % == != < <= > >= and or
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class IfExpr(Node):
    cond: "Expr"
    then: "Expr"
    other: "Expr"


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple["Expr", ...]


Expr = Union[
    Literal, Name, FieldAccess, IndexAccess, ListLit, MapLit,
    Unary, Binary, IfExpr, Call,
]


# --- statements -------------------------------------------------------------


@dataclass(frozen=True)
class Assign(Node):
    target: Expr  # Name, FieldAccess or IndexAccess
    value: Expr


@dataclass(frozen=True)
class ExprStmt(Node):
    expr: Expr


@dataclass(frozen=True)
class If(Node):
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...]


@dataclass(frozen=True)
class For(Node):
    var: str
    iterable: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class Return(Node):
    value: Expr


Stmt = Union[Assign, ExprStmt, If, For, Return]


@dataclass(frozen=True)
class Script:
    """A parsed callback: immutable AST plus the argument names it expects."""

    source: str
    body: tuple[Stmt, ...] = field(repr=False)
    declared_args: tuple[str, ...] = ()


def ast_equal(a, b) -> bool:
    """Structural equality over nodes, ignoring source positions."""
    if isinstance(a, Script) and isinstance(b, Script):
        return a.declared_args == b.declared_args and ast_equal(a.body, b.body)
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(ast_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, Node) and isinstance(b, Node):
        if type(a) is not type(b):
            return False
        for name in a.__dataclass_fields__:
            if name in ("line", "col"):
                continue
            if not ast_equal(getattr(a, name), getattr(b, name)):
                return False
        return True
    return a == b
