"""Recursive-descent parser for plane expressions.

Grammar (whitespace-insensitive; pow binds tighter than mul/div binds
tighter than add/sub; pow is right-associative):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base (('^' | '**') factor)?
    base   := NUMBER | 'pi' | 'e' | 'x' | 'y'
            | FUNC '(' expr ')' | '(' expr ')' | '-' base

FUNC is one of sin cos tan sinh cosh tanh exp ln log10 sqrt abs.
Implicit multiplication ("2x", "y sin(x)") is rejected with a hint to
write an explicit '*'.  'log' is rejected by name: use ln or log10.
All failures raise ParseError carrying a byte offset into the source.

Trees nesting deeper than _MAX_DEPTH levels are rejected.  Every
consumer of an Expr (evaluation, differentiation, printing) walks the
tree recursively, so the parser is where unbounded input is stopped.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..errors import ParseError
from .nodes import Expr, FUNCTIONS, add, const, div, fn, mul, neg, pow_, sub, var

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
)

_CONSTANTS = {"pi": math.pi, "e": math.e}

_MAX_DEPTH = 200


@dataclass
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    pos: int  # character position in source


def _byte_offset(source: str, charpos: int) -> int:
    return len(source[:charpos].encode("utf-8"))


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {source[pos]!r}",
                _byte_offset(source, pos),
                source[pos],
            )
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.depth = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Token):
        raise ParseError(message, _byte_offset(self.source, tok.pos), tok.text)

    def expect_op(self, text: str):
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.take()
        if tok.kind == "end":
            self.fail(f"expected {text!r} before end of input", tok)
        self.fail(f"expected {text!r}", tok)

    # --- grammar rules ---

    def expr(self) -> Expr:
        left = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            right = self.term()
            left = add(left, right) if op == "+" else sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.take()
                right = self.factor()
                left = mul(left, right) if tok.text == "*" else div(left, right)
            elif tok.kind in ("num", "ident") or (tok.kind == "op" and tok.text == "("):
                self.fail(
                    f"missing operator before {tok.text!r} "
                    "(implicit multiplication is not supported; write an explicit *)",
                    tok,
                )
            else:
                return left

    def factor(self) -> Expr:
        self._descend()
        try:
            base = self.base()
            tok = self.peek()
            if tok.kind == "op" and tok.text in ("^", "**"):
                self.take()
                return pow_(base, self.factor())
            return base
        finally:
            self.depth -= 1

    def _descend(self):
        # factor and base are the two self-recursive rules; bounding
        # them bounds the parser's own stack use
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            self.fail(
                f"expression nests too deeply (limit {_MAX_DEPTH})",
                self.peek(),
            )

    def base(self) -> Expr:
        self._descend()
        try:
            return self._base()
        finally:
            self.depth -= 1

    def _base(self) -> Expr:
        tok = self.take()
        if tok.kind == "num":
            return const(float(tok.text))
        if tok.kind == "ident":
            name = tok.text
            if name in ("x", "y"):
                return var(name)
            if name in _CONSTANTS:
                return const(_CONSTANTS[name])
            if name in FUNCTIONS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return fn(name, inner)
            if name == "log":
                self.fail("unknown function 'log'; use ln for base e or log10 for base 10", tok)
            self.fail(f"unknown identifier {name!r}", tok)
        if tok.kind == "op":
            if tok.text == "-":
                return neg(self.base())
            if tok.text == "(":
                inner = self.expr()
                self.expect_op(")")
                return inner
            self.fail(f"unexpected token {tok.text!r}", tok)
        self.fail("unexpected end of input", tok)


def _tree_depth(e: Expr) -> int:
    # iterative on purpose: the tree may be deeper than the interpreter
    # stack, which is exactly what this is here to detect
    deepest = 0
    stack = [(e, 1)]
    while stack:
        node, d = stack.pop()
        if d > deepest:
            deepest = d
        stack.extend((a, d + 1) for a in node.args)
    return deepest


def parse(source: str) -> Expr:
    """Parse source into an Expr tree, or raise ParseError."""
    p = _Parser(source)
    if p.peek().kind == "end":
        raise ParseError("empty expression", 0)
    result = p.expr()
    trailing = p.peek()
    if trailing.kind != "end":
        p.fail(f"unexpected trailing input {trailing.text!r}", trailing)
    # long operator runs ("x+x+x+...") nest one level per term without
    # ever recursing in the parser itself
    if _tree_depth(result) > _MAX_DEPTH:
        raise ParseError(f"expression nests too deeply (limit {_MAX_DEPTH})", 0)
    return result
