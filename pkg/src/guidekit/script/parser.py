"""Recursive-descent parser for the callback language.

Statements are self-delimiting, so authors may put several on one line:

    state.relevance = state.relevance - 0.2 return state.relevance

Statement forms:

    <path> = <expr>
    if <expr> then <stmts> [else <stmts>] end
    for <name> in <expr> do <stmts> end
    return <expr>
    <expr>                      (usually a builtin call)

``if c then a else b`` is also an expression when it appears inside one.
"""

from __future__ import annotations

from .errors import ScriptSyntaxError
from .lexer import Token, tokenize
from . import nodes as n


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token plumbing --

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None, expected: str) -> Token:
        if not self.at(kind, text):
            raise self.fail(expected)
        return self.advance()

    def fail(self, expected: str, message: str = "unexpected token") -> ScriptSyntaxError:
        tok = self.peek()
        return ScriptSyntaxError(message, tok.line, tok.col, tok.text, expected)

    # -- statements --

    def parse_body(self) -> tuple[n.Stmt, ...]:
        stmts: list[n.Stmt] = []
        while not self.at("EOF") and not self.at("KEYWORD", "end") and not self.at("KEYWORD", "else"):
            stmts.append(self.parse_stmt())
        return tuple(stmts)

    def parse_stmt(self) -> n.Stmt:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text == "return":
            self.advance()
            value = self.parse_expr()
            return n.Return(tok.line, tok.col, value)
        if tok.kind == "KEYWORD" and tok.text == "if":
            self.advance()
            cond = self.parse_expr()
            self.expect("KEYWORD", "then", "'then'")
            then_body = self.parse_body()
            else_body: tuple[n.Stmt, ...] = ()
            if self.at("KEYWORD", "else"):
                self.advance()
                else_body = self.parse_body()
            self.expect("KEYWORD", "end", "'end'")
            return n.If(tok.line, tok.col, cond, then_body, else_body)
        if tok.kind == "KEYWORD" and tok.text == "for":
            self.advance()
            var = self.expect("IDENT", None, "a loop variable name").text
            self.expect("KEYWORD", "in", "'in'")
            iterable = self.parse_expr()
            self.expect("KEYWORD", "do", "'do'")
            body = self.parse_body()
            self.expect("KEYWORD", "end", "'end'")
            return n.For(tok.line, tok.col, var, iterable, body)
        if tok.kind == "IDENT":
            # Could be an assignment target; backtrack if no '=' follows.
            mark = self.pos
            target = self.try_parse_path()
            if target is not None and self.at("PUNCT", "="):
                self.advance()
                value = self.parse_expr()
                return n.Assign(tok.line, tok.col, target, value)
            self.pos = mark
        expr = self.parse_expr()
        return n.ExprStmt(tok.line, tok.col, expr)

    def try_parse_path(self) -> n.Expr | None:
        """Name followed by .field / [index] selectors, or None if it isn't one."""
        if not self.at("IDENT"):
            return None
        tok = self.advance()
        node: n.Expr = n.Name(tok.line, tok.col, tok.text)
        if self.at("PUNCT", "("):
            return None  # call, not a path
        while True:
            if self.at("PUNCT", "."):
                dot = self.advance()
                if not self.at("IDENT"):
                    raise self.fail("a field name after '.'")
                fld = self.advance()
                node = n.FieldAccess(dot.line, dot.col, node, fld.text)
            elif self.at("PUNCT", "["):
                br = self.advance()
                index = self.parse_expr()
                self.expect("PUNCT", "]", "']'")
                node = n.IndexAccess(br.line, br.col, node, index)
            else:
                return node

    # -- expressions, lowest precedence first --

    def parse_expr(self) -> n.Expr:
        if self.at("KEYWORD", "if"):
            tok = self.advance()
            cond = self.parse_expr()
            self.expect("KEYWORD", "then", "'then'")
            then = self.parse_expr()
            self.expect("KEYWORD", "else", "'else' (conditional expressions need both arms)")
            other = self.parse_expr()
            return n.IfExpr(tok.line, tok.col, cond, then, other)
        return self.parse_or()

    def parse_or(self) -> n.Expr:
        node = self.parse_and()
        while self.at("KEYWORD", "or"):
            tok = self.advance()
            node = n.Binary(tok.line, tok.col, "or", node, self.parse_and())
        return node

    def parse_and(self) -> n.Expr:
        node = self.parse_not()
        while self.at("KEYWORD", "and"):
            tok = self.advance()
            node = n.Binary(tok.line, tok.col, "and", node, self.parse_not())
        return node

    def parse_not(self) -> n.Expr:
        if self.at("KEYWORD", "not"):
            tok = self.advance()
            return n.Unary(tok.line, tok.col, "not", self.parse_not())
        return self.parse_comparison()

    def parse_comparison(self) -> n.Expr:
        node = self.parse_additive()
        if self.peek().kind == "PUNCT" and self.peek().text in ("==", "!=", "<", "<=", ">", ">="):
            tok = self.advance()
            right = self.parse_additive()
            node = n.Binary(tok.line, tok.col, tok.text, node, right)
            # Comparisons do not chain; a second operator is a mistake.
            if self.peek().kind == "PUNCT" and self.peek().text in ("==", "!=", "<", "<=", ">", ">="):
                raise self.fail("no second comparison (comparisons do not chain)")
        return node

    def parse_additive(self) -> n.Expr:
        node = self.parse_multiplicative()
        while self.peek().kind == "PUNCT" and self.peek().text in ("+", "-"):
            tok = self.advance()
            node = n.Binary(tok.line, tok.col, tok.text, node, self.parse_multiplicative())
        return node

    def parse_multiplicative(self) -> n.Expr:
        node = self.parse_unary()
        while self.peek().kind == "PUNCT" and self.peek().text in ("*", "/", "%"):
            tok = self.advance()
            node = n.Binary(tok.line, tok.col, tok.text, node, self.parse_unary())
        return node

    def parse_unary(self) -> n.Expr:
        if self.at("PUNCT", "-"):
            tok = self.advance()
            return n.Unary(tok.line, tok.col, "-", self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> n.Expr:
        node = self.parse_primary()
        while True:
            if self.at("PUNCT", "."):
                dot = self.advance()
                if not self.at("IDENT"):
                    raise self.fail("a field name after '.'")
                fld = self.advance()
                node = n.FieldAccess(dot.line, dot.col, node, fld.text)
            elif self.at("PUNCT", "["):
                br = self.advance()
                index = self.parse_expr()
                self.expect("PUNCT", "]", "']'")
                node = n.IndexAccess(br.line, br.col, node, index)
            else:
                return node

    def parse_primary(self) -> n.Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return n.Literal(tok.line, tok.col, float(tok.text))
        if tok.kind == "STRING":
            self.advance()
            return n.Literal(tok.line, tok.col, tok.text)
        if tok.kind == "KEYWORD" and tok.text in ("true", "false", "null"):
            self.advance()
            value = None if tok.text == "null" else (tok.text == "true")
            return n.Literal(tok.line, tok.col, value)
        if tok.kind == "IDENT":
            self.advance()
            if self.at("PUNCT", "("):
                self.advance()
                args: list[n.Expr] = []
                if not self.at("PUNCT", ")"):
                    args.append(self.parse_expr())
                    while self.at("PUNCT", ","):
                        self.advance()
                        args.append(self.parse_expr())
                self.expect("PUNCT", ")", "')' or ','")
                return n.Call(tok.line, tok.col, tok.text, tuple(args))
            return n.Name(tok.line, tok.col, tok.text)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect("PUNCT", ")", "')'")
            return inner
        if tok.kind == "PUNCT" and tok.text == "[":
            self.advance()
            items: list[n.Expr] = []
            if not self.at("PUNCT", "]"):
                items.append(self.parse_expr())
                while self.at("PUNCT", ","):
                    self.advance()
                    items.append(self.parse_expr())
            self.expect("PUNCT", "]", "']' or ','")
            return n.ListLit(tok.line, tok.col, tuple(items))
        if tok.kind == "PUNCT" and tok.text == "{":
            self.advance()
            entries: list[tuple[str, n.Expr]] = []
            if not self.at("PUNCT", "}"):
                entries.append(self.parse_map_entry())
                while self.at("PUNCT", ","):
                    self.advance()
                    entries.append(self.parse_map_entry())
            self.expect("PUNCT", "}", "'}' or ','")
            return n.MapLit(tok.line, tok.col, tuple(entries))
        raise self.fail("an expression")

    def parse_map_entry(self) -> tuple[str, n.Expr]:
        tok = self.peek()
        if tok.kind not in ("IDENT", "STRING"):
            raise self.fail("a map key (name or string)")
        self.advance()
        self.expect("PUNCT", ":", "':'")
        return tok.text, self.parse_expr()


def parse_script(source: str, declared_args: list[str] | tuple[str, ...] = ()) -> n.Script:
    """Parse callback source into an immutable Script.

    Raises ScriptSyntaxError with a 1-based position, the offending token,
    and a hint at what was expected.
    """
    args = tuple(declared_args)
    seen: set[str] = set()
    for name in args:
        if not isinstance(name, str) or not name.isidentifier():
            raise ValueError(f"invalid argument name {name!r}")
        if name in seen:
            raise ValueError(f"duplicate argument name {name!r}")
        seen.add(name)
    parser = _Parser(tokenize(source))
    body = parser.parse_body()
    if not parser.at("EOF"):
        raise parser.fail("a statement")
    return n.Script(source=source, body=body, declared_args=args)
