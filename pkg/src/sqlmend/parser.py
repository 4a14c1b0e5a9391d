"""Lenient recursive-descent parser for the SQL subset.

Accepts strictly well-formed queries plus five kinds of C/Java spillover,
each recorded as a lenient flag on the resulting query: `==`, `&&`, `||`,
double-quoted strings, and bare words in right-hand operand position.
Anything else (misspelled keywords, wrong clause order, stray commas,
multi-table FROM, qualified names) is a ParseError.
"""

from __future__ import annotations

from .ast_nodes import (
    BareToken,
    Bop,
    CmpOp,
    ColumnRef,
    Comparison,
    IntLit,
    LenientKind,
    LenientToken,
    Operand,
    OrderBy,
    Predicate,
    Query,
    SelectItem,
    Star,
    StrLit,
)
from .lexer import Token, TokenType, tokenize


class ParseError(Exception):
    """Raised when a query is not in the (lenient) grammar."""

    def __init__(self, message: str, token: Token):
        super().__init__(f"{message} (at {token.text!r}, offset {token.offset})")
        self.token = token


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.flags: set[LenientToken] = set()

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        return self.peek().keyword in words

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.keyword != word:
            raise ParseError(f"expected {word}", tok)
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.type is not TokenType.IDENT:
            raise ParseError(f"expected {what}", tok)
        return self.advance()

    def flag(self, kind: LenientKind, tok: Token) -> None:
        self.flags.add(LenientToken(kind, tok.index))

    # --- grammar ---

    def parse_query(self) -> Query:
        self.expect_keyword("SELECT")
        distinct = False
        if self.at_keyword("DISTINCT"):
            self.advance()
            distinct = True
        select = self.parse_select_list()
        self.expect_keyword("FROM")
        table = self.expect_ident("table name").text
        where = None
        if self.at_keyword("WHERE"):
            self.advance()
            where = self.parse_predicate()
        order_by = None
        if self.at_keyword("ORDER"):
            self.advance()
            self.expect_keyword("BY")
            column = self.expect_ident("ORDER BY column").text
            descending = False
            if self.at_keyword("ASC"):
                self.advance()
            elif self.at_keyword("DESC"):
                self.advance()
                descending = True
            order_by = OrderBy(column, descending)
        if self.peek().type is TokenType.SEMI:
            self.advance()
        if self.peek().type is not TokenType.EOF:
            raise ParseError("unexpected trailing input", self.peek())
        return Query(
            table=table,
            select=select,
            distinct=distinct,
            where=where,
            order_by=order_by,
            lenient_flags=frozenset(self.flags),
        )

    def parse_select_list(self) -> Star | tuple[SelectItem, ...]:
        if self.peek().type is TokenType.STAR:
            self.advance()
            return Star()
        items = [self.parse_select_item()]
        while self.peek().type is TokenType.COMMA:
            self.advance()
            items.append(self.parse_select_item())
        return tuple(items)

    def parse_select_item(self) -> SelectItem:
        column = self.expect_ident("column name").text
        alias = None
        if self.at_keyword("AS"):
            self.advance()
            alias = self.expect_ident("alias").text
        return SelectItem(column, alias)

    def parse_predicate(self) -> Predicate:
        leaves = [self.parse_comparison()]
        connectors: list[Bop] = []
        while True:
            tok = self.peek()
            if tok.keyword == "AND":
                self.advance()
                connectors.append(Bop.AND)
            elif tok.keyword == "OR":
                self.advance()
                connectors.append(Bop.OR)
            elif tok.type is TokenType.AMP_AMP:
                self.advance()
                self.flag(LenientKind.AMP_AMP, tok)
                connectors.append(Bop.AND)
            elif tok.type is TokenType.PIPE_PIPE:
                self.advance()
                self.flag(LenientKind.PIPE_PIPE, tok)
                connectors.append(Bop.OR)
            else:
                break
            leaves.append(self.parse_comparison())
        return Predicate(tuple(leaves), tuple(connectors))

    def parse_comparison(self) -> Comparison:
        lhs = self.parse_operand(rhs_position=False)
        tok = self.peek()
        if tok.type is TokenType.OP:
            self.advance()
            op = CmpOp(tok.text)
        elif tok.type is TokenType.DOUBLE_EQ:
            self.advance()
            self.flag(LenientKind.DOUBLE_EQ, tok)
            op = CmpOp.EQ
        else:
            raise ParseError("expected comparison operator", tok)
        rhs = self.parse_operand(rhs_position=True)
        return Comparison(lhs, op, rhs)

    def parse_operand(self, rhs_position: bool) -> Operand:
        tok = self.peek()
        if tok.type is TokenType.INT:
            self.advance()
            return IntLit(int(tok.text))
        if tok.type is TokenType.STRING:
            self.advance()
            return StrLit(tok.text)
        if tok.type is TokenType.DQSTRING:
            self.advance()
            self.flag(LenientKind.DOUBLE_QUOTED_STRING, tok)
            return StrLit(tok.text)
        if tok.type is TokenType.IDENT:
            self.advance()
            if rhs_position:
                # Without a schema, a right-hand word could be a column or an
                # unquoted string; flag it and let binding/repair decide.
                self.flag(LenientKind.BARE_TOKEN, tok)
                return BareToken(tok.text, tok.index)
            return ColumnRef(tok.text)
        raise ParseError("expected operand", tok)


def parse_lenient(text: str) -> Query:
    """Parse `text` into a Query, recording any lenient tokens accepted.

    Raises ParseError for input outside the lenient grammar.  Pure: the
    same text always yields a structurally identical query.
    """
    return _Parser(tokenize(text)).parse_query()
