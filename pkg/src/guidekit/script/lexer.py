"""Tokenizer for the callback language.

Whitespace and newlines only separate tokens; statements are delimited by
the grammar itself. `#` starts a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ScriptSyntaxError

KEYWORDS = {
    "if", "then", "else", "end", "for", "in", "do", "return",
    "and", "or", "not", "true", "false", "null",
}

# Longest first so == wins over =.
_PUNCT = [
    "==", "!=", "<=", ">=",
    "+", "-", "*", "/", "%", "<", ">", "=",
    "(", ")", "[", "]", "{", "}", ",", ":", ".",
]


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER STRING IDENT KEYWORD PUNCT EOF
    text: str
    line: int
    col: int


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\"}


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def err(message: str, expected: str) -> ScriptSyntaxError:
        seen = source[i] if i < n else "<end of input>"
        return ScriptSyntaxError(message, line, col, seen, expected)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue

        start_line, start_col = line, col

        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            tokens.append(Token("NUMBER", text, start_line, start_col))
            col += j - i
            i = j
            continue

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "KEYWORD" if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, start_line, start_col))
            col += j - i
            i = j
            continue

        if ch in "\"'":
            quote = ch
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    raise ScriptSyntaxError(
                        "unterminated string", start_line, start_col, quote,
                        f"closing {quote}",
                    )
                c = source[j]
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in _ESCAPES:
                        raise ScriptSyntaxError(
                            "bad escape sequence", line, start_col + (j - i),
                            source[j : j + 2], "one of \\n \\t \\r \\\" \\' \\\\",
                        )
                    parts.append(_ESCAPES[source[j + 1]])
                    j += 2
                    continue
                if c == quote:
                    j += 1
                    break
                parts.append(c)
                j += 1
            tokens.append(Token("STRING", "".join(parts), start_line, start_col))
            col += j - i
            i = j
            continue

        for punct in _PUNCT:
            if source.startswith(punct, i):
                tokens.append(Token("PUNCT", punct, start_line, start_col))
                i += len(punct)
                col += len(punct)
                break
        else:
            raise err(f"unexpected character {ch!r}", "a token")

    tokens.append(Token("EOF", "<end of input>", line, col))
    return tokens
