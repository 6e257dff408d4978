"""Symbolic partial differentiation.

Standard product, quotient and chain rules.  A power with constant
exponent uses the power rule; a general power f^g differentiates
through the exp(g*ln(f)) identity.  abs differentiates to the
sign-style expression u/abs(u) * u', which evaluates to not-a-number
at u = 0.  Results are passed through simplify before returning.
"""

from __future__ import annotations

import math

from ..errors import DFormError
from .nodes import (
    Expr,
    VARIABLES,
    add,
    const,
    div,
    fn,
    mul,
    neg,
    pow_,
    sub,
)
from .simplify import simplify

_LN10 = math.log(10.0)


def differentiate(e: Expr, variable: str) -> Expr:
    """Return the simplified partial derivative of e with respect to variable."""
    if variable not in VARIABLES:
        raise DFormError(f"cannot differentiate with respect to {variable!r}")
    return simplify(_d(e, variable))


def _d(e: Expr, v: str) -> Expr:
    k = e.kind
    if k == "const":
        return const(0.0)
    if k == "var":
        return const(1.0 if e.name == v else 0.0)
    if k == "neg":
        return neg(_d(e.args[0], v))
    if k == "add":
        return add(_d(e.args[0], v), _d(e.args[1], v))
    if k == "sub":
        return sub(_d(e.args[0], v), _d(e.args[1], v))
    if k == "mul":
        a, b = e.args
        return add(mul(_d(a, v), b), mul(a, _d(b, v)))
    if k == "div":
        a, b = e.args
        return div(sub(mul(b, _d(a, v)), mul(a, _d(b, v))), pow_(b, const(2.0)))
    if k == "pow":
        base, exp = e.args
        if exp.kind == "const":
            c = exp.value
            return mul(mul(const(c), pow_(base, const(c - 1.0))), _d(base, v))
        # f^g = exp(g*ln f):  (f^g)' = f^g * (g'*ln f + g*f'/f)
        return mul(
            e,
            add(
                mul(_d(exp, v), fn("ln", base)),
                mul(exp, div(_d(base, v), base)),
            ),
        )

    u = e.args[0]
    du = _d(u, v)
    if k == "sin":
        return mul(fn("cos", u), du)
    if k == "cos":
        return neg(mul(fn("sin", u), du))
    if k == "tan":
        return div(du, pow_(fn("cos", u), const(2.0)))
    if k == "sinh":
        return mul(fn("cosh", u), du)
    if k == "cosh":
        return mul(fn("sinh", u), du)
    if k == "tanh":
        return div(du, pow_(fn("cosh", u), const(2.0)))
    if k == "exp":
        return mul(e, du)
    if k == "ln":
        return div(du, u)
    if k == "log10":
        return div(du, mul(u, const(_LN10)))
    if k == "sqrt":
        return div(du, mul(const(2.0), fn("sqrt", u)))
    if k == "abs":
        return mul(div(u, fn("abs", u)), du)
    raise ValueError(f"unknown node kind {k!r}")
