"""Tokenizer for the SQL subset, lenient about C/Java spillover.

The lexer never raises: characters it cannot classify become ERROR tokens,
which the parser then reports.  Keeping the token stream total lets the
error classifier inspect unparseable submissions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

KEYWORDS = {
    "SELECT",
    "DISTINCT",
    "FROM",
    "WHERE",
    "ORDER",
    "BY",
    "ASC",
    "DESC",
    "AND",
    "OR",
    "AS",
}


class TokenType(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "ident"
    QUALIFIED = "qualified"  # dotted name such as t.col; rejected by the grammar
    INT = "int"
    STRING = "string"  # single-quoted
    DQSTRING = "dqstring"  # double-quoted (lenient)
    COMMA = "comma"
    STAR = "star"
    SEMI = "semi"
    OP = "op"  # =, !=, <>, <, <=, >, >=
    DOUBLE_EQ = "=="
    AMP_AMP = "&&"
    PIPE_PIPE = "||"
    ERROR = "error"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    offset: int
    index: int = -1

    @property
    def keyword(self) -> str | None:
        return self.text.upper() if self.type is TokenType.KEYWORD else None


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _read_quoted(text: str, i: int, quote: str) -> tuple[str, int] | None:
    """Read a quoted literal starting at text[i] == quote.

    Doubling the quote escapes it.  Returns (value, next_index) or None if
    the literal is unterminated.
    """
    out = []
    i += 1
    while i < len(text):
        ch = text[i]
        if ch == quote:
            if i + 1 < len(text) and text[i + 1] == quote:
                out.append(quote)
                i += 2
                continue
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    return None


def tokenize(text: str) -> list[Token]:
    raw: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _is_ident_start(ch):
            while i < n and _is_ident_char(text[i]):
                i += 1
            word = text[start:i]
            # t.col lexes as one qualified token only when written without spaces
            if i < n and text[i] == "." and i + 1 < n and _is_ident_start(text[i + 1]):
                i += 1
                while i < n and _is_ident_char(text[i]):
                    i += 1
                raw.append(Token(TokenType.QUALIFIED, text[start:i], start))
            elif word.upper() in KEYWORDS:
                raw.append(Token(TokenType.KEYWORD, word, start))
            else:
                raw.append(Token(TokenType.IDENT, word, start))
            continue
        if ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            raw.append(Token(TokenType.INT, text[start:i], start))
            continue
        if ch == "-" and i + 1 < n and text[i + 1].isdigit():
            i += 1
            while i < n and text[i].isdigit():
                i += 1
            raw.append(Token(TokenType.INT, text[start:i], start))
            continue
        if ch == "'":
            read = _read_quoted(text, i, "'")
            if read is None:
                raw.append(Token(TokenType.ERROR, text[i:], start))
                break
            value, i = read
            raw.append(Token(TokenType.STRING, value, start))
            continue
        if ch == '"':
            read = _read_quoted(text, i, '"')
            if read is None:
                raw.append(Token(TokenType.ERROR, text[i:], start))
                break
            value, i = read
            raw.append(Token(TokenType.DQSTRING, value, start))
            continue
        two = text[i : i + 2]
        if two == "==":
            raw.append(Token(TokenType.DOUBLE_EQ, two, start))
            i += 2
            continue
        if two == "&&":
            raw.append(Token(TokenType.AMP_AMP, two, start))
            i += 2
            continue
        if two == "||":
            raw.append(Token(TokenType.PIPE_PIPE, two, start))
            i += 2
            continue
        if two in ("!=", "<>", "<=", ">="):
            op = "!=" if two == "<>" else two
            raw.append(Token(TokenType.OP, op, start))
            i += 2
            continue
        if ch in "=<>":
            raw.append(Token(TokenType.OP, ch, start))
            i += 1
            continue
        if ch == ",":
            raw.append(Token(TokenType.COMMA, ch, start))
            i += 1
            continue
        if ch == "*":
            raw.append(Token(TokenType.STAR, ch, start))
            i += 1
            continue
        if ch == ";":
            raw.append(Token(TokenType.SEMI, ch, start))
            i += 1
            continue
        raw.append(Token(TokenType.ERROR, ch, start))
        i += 1
    raw.append(Token(TokenType.EOF, "", n))
    return [Token(t.type, t.text, t.offset, idx) for idx, t in enumerate(raw)]
