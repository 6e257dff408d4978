"""Expression trees over the plane variables x and y.

A tree is built from immutable Expr nodes.  Evaluation is numpy-based
and follows IEEE conventions: 1/0 gives infinity, 0/0 and the logarithm
of a negative number give not-a-number, nothing raises.  The same tree
evaluated at the same point always produces the same bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VARIABLES = ("x", "y")

# Unary functions accepted by the grammar, in grammar order.
FUNCTIONS = (
    "sin", "cos", "tan",
    "sinh", "cosh", "tanh",
    "exp", "ln", "log10", "sqrt", "abs",
)

UNARY_KINDS = FUNCTIONS + ("neg",)
BINARY_KINDS = ("add", "sub", "mul", "div", "pow")


@dataclass(frozen=True)
class Expr:
    """One node: a constant, a variable, a unary function or a binary op.

    kind is 'const', 'var', one of UNARY_KINDS or one of BINARY_KINDS.
    Constants carry value, variables carry name, everything else carries
    its children in args.  Nodes are immutable; rewrites build new trees.
    """

    kind: str
    value: float = 0.0
    name: str = ""
    args: tuple["Expr", ...] = ()

    def __repr__(self):  # compact, debugging only
        if self.kind == "const":
            return f"const({self.value!r})"
        if self.kind == "var":
            return f"var({self.name})"
        return f"{self.kind}({', '.join(repr(a) for a in self.args)})"


def const(value: float) -> Expr:
    return Expr("const", value=float(value))


def var(name: str) -> Expr:
    if name not in VARIABLES:
        raise ValueError(f"unknown variable {name!r}")
    return Expr("var", name=name)


def fn(name: str, arg: Expr) -> Expr:
    if name not in UNARY_KINDS:
        raise ValueError(f"unknown function {name!r}")
    return Expr(name, args=(arg,))


def neg(a: Expr) -> Expr:
    return Expr("neg", args=(a,))


def add(a: Expr, b: Expr) -> Expr:
    return Expr("add", args=(a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return Expr("sub", args=(a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return Expr("mul", args=(a, b))


def div(a: Expr, b: Expr) -> Expr:
    return Expr("div", args=(a, b))


def pow_(a: Expr, b: Expr) -> Expr:
    return Expr("pow", args=(a, b))


_NUMPY_UNARY = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "ln": np.log,
    "log10": np.log10,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "neg": np.negative,
}


def evaluate(expr: Expr, x, y):
    """Evaluate expr at x, y (scalars or broadcastable numpy arrays).

    Returns a float64 scalar or array.  Singular points come back as
    inf/nan rather than raising; overflow saturates to inf silently.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    with np.errstate(all="ignore"):
        return _eval(expr, x, y)


def _eval(e: Expr, x, y):
    k = e.kind
    if k == "const":
        return np.float64(e.value)
    if k == "var":
        return x if e.name == "x" else y
    f = _NUMPY_UNARY.get(k)
    if f is not None:
        return f(_eval(e.args[0], x, y))
    a = _eval(e.args[0], x, y)
    b = _eval(e.args[1], x, y)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        return a / b
    if k == "pow":
        return np.power(a, b)
    raise ValueError(f"unknown node kind {k!r}")


# Grammar levels used by the printer: 0 sum, 1 term, 2 factor, 3 base.
_NODE_LEVEL = {"add": 0, "sub": 0, "mul": 1, "div": 1, "pow": 2}


def to_string(expr: Expr) -> str:
    """Print a tree in grammar-conformant syntax.

    The output reparses to the same tree up to simplify normal form:
    simplify(parse(to_string(e))) == e whenever e is already simplified.
    """
    return _pr(expr, 0)


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _pr(e: Expr, need: int) -> str:
    k = e.kind
    if k == "const":
        s, level = _fmt_const(e.value), 3
    elif k == "var":
        s, level = e.name, 3
    elif k == "neg":
        s, level = "-" + _pr(e.args[0], 3), 3
    elif k in _NODE_LEVEL:
        a, b = e.args
        level = _NODE_LEVEL[k]
        if k == "pow":
            s = _pr(a, 3) + "^" + _pr(b, 2)
        else:
            op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
            s = _pr(a, level) + op + _pr(b, level + 1)
    else:  # unary function call, always parenthesized
        s, level = f"{k}({_pr(e.args[0], 0)})", 3
    if level < need:
        return "(" + s + ")"
    return s
