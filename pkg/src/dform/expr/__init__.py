"""Expression engine: parse, evaluate, differentiate, simplify, print."""

from .derivative import differentiate
from .nodes import (
    BINARY_KINDS,
    Expr,
    FUNCTIONS,
    UNARY_KINDS,
    VARIABLES,
    add,
    const,
    div,
    evaluate,
    fn,
    mul,
    neg,
    pow_,
    sub,
    to_string,
    var,
)
from .parser import parse
from .simplify import simplify
from ..errors import ParseError

__all__ = [
    "BINARY_KINDS",
    "Expr",
    "FUNCTIONS",
    "ParseError",
    "UNARY_KINDS",
    "VARIABLES",
    "add",
    "const",
    "differentiate",
    "div",
    "evaluate",
    "fn",
    "mul",
    "neg",
    "parse",
    "pow_",
    "simplify",
    "sub",
    "to_string",
    "var",
]
