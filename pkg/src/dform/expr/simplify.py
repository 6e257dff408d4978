"""Expression simplification.

Two layers.  Local rewrites do constant folding and identity
elimination (x+0, x*1, x*0, x/1, x^1, x^0 and friends); they never
reassociate live arithmetic, so evaluating a simplified tree gives the
same bits as evaluating the original at every finite point.

On top of that, sums that are identically zero as real functions are
collapsed to the constant 0.  Detection works on an internal
sum-of-products normal form: products are flattened and distributed
over sums, factors sorted, like terms combined.  Coefficients are
carried as exact rationals (every float is one), so their products and
sums never round and two trees produced by mirrored rule applications
(for example the two orders of a mixed partial derivative) cancel
exactly no matter how their constants were grouped.  The normal form
is only ever used as a yes/no zero test; emitted trees are never
rebuilt from it.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .nodes import Expr, add, const, div, evaluate, mul, neg, sub

_MAX_TERMS = 400


class _Budget(Exception):
    pass


def simplify(e: Expr) -> Expr:
    """Return the normal form of e.  Idempotent and deterministic."""
    if e.args:
        e = Expr(e.kind, e.value, e.name, tuple(simplify(a) for a in e.args))
    return _rewrite(e)


def _rewrite(e: Expr) -> Expr:
    while True:
        out = _step(e)
        if out == e:
            return e
        e = out


def _is_const(e: Expr, v=None) -> bool:
    if e.kind != "const":
        return False
    return v is None or e.value == v


def _fold(e: Expr) -> Expr | None:
    """Fold a node whose children are all constants, if the result is finite."""
    val = float(evaluate(e, 0.0, 0.0))
    if math.isfinite(val):
        return const(val)
    return None


def _step(e: Expr) -> Expr:
    k = e.kind
    if k in ("const", "var"):
        return e
    a = e.args[0]
    b = e.args[1] if len(e.args) == 2 else None

    if k == "neg":
        if a.kind == "neg":
            return a.args[0]
        if a.kind == "const":
            return const(-a.value)
        return e

    if b is None:  # unary function of a constant
        if a.kind == "const":
            folded = _fold(e)
            if folded is not None:
                return folded
        return e

    if a.kind == "const" and b.kind == "const":
        folded = _fold(e)
        if folded is not None:
            return folded

    if k == "add":
        if _is_const(b, 0.0):
            return a
        if _is_const(a, 0.0):
            return b
        if b.kind == "neg":
            return sub(a, b.args[0])
        if _zero_sum(e):
            return const(0.0)
    elif k == "sub":
        if _is_const(b, 0.0):
            return a
        if _is_const(a, 0.0):
            return neg(b)
        if b.kind == "neg":
            return add(a, b.args[0])
        if a == b or _zero_sum(e):
            return const(0.0)
    elif k == "mul":
        if _is_const(b, 1.0):
            return a
        if _is_const(a, 1.0):
            return b
        if _is_const(a, 0.0) or _is_const(b, 0.0):
            return const(0.0)
        # multiplying by -1 is exact negation, bit for bit
        if _is_const(b, -1.0):
            return neg(a)
        if _is_const(a, -1.0):
            return neg(b)
        # negation commutes with * and / exactly (sign bit only), so it
        # can always be hoisted outward, where neg(neg(..)) cancels;
        # the freshly built child needs its own rewrite pass
        if a.kind == "neg":
            return neg(_rewrite(mul(a.args[0], b)))
        if b.kind == "neg":
            return neg(_rewrite(mul(a, b.args[0])))
    elif k == "div":
        if _is_const(b, 1.0):
            return a
        if _is_const(a, 0.0):
            return const(0.0)
        if a.kind == "neg":
            return neg(_rewrite(div(a.args[0], b)))
        if b.kind == "neg":
            return neg(_rewrite(div(a, b.args[0])))
    elif k == "pow":
        if _is_const(b, 1.0):
            return a
        if _is_const(b, 0.0):
            return const(1.0)
    return e


# --- zero detection on a sum-of-products key ---
#
# A key is a tuple of terms sorted by factor string; a term is
# (coeffs, factors) where coeffs is a tuple of constants (floats or
# already-reduced Fractions; their exact rational product is the
# coefficient) and factors is a repr-sorted tuple of atoms:
#   ('v', name)       variable
#   ('f', name, key)  function application
#   ('p', key, key)   power, base then exponent
#   ('i', key)        reciprocal of a whole subexpression


def _zero_sum(e: Expr) -> bool:
    try:
        return not _sop(e, [0])
    except _Budget:
        return False


def _coeff_value(coeffs) -> Fraction:
    v = Fraction(1)
    for c in coeffs:
        if isinstance(c, float) and not math.isfinite(c):
            # inf/nan has no rational value; bail out and report "not zero"
            raise _Budget
        v *= Fraction(c)
    return v


def _combine(terms):
    groups: dict[tuple, Fraction] = {}
    for coeffs, factors in terms:
        groups[factors] = groups.get(factors, Fraction(0)) + _coeff_value(coeffs)
    out = []
    for factors in sorted(groups, key=repr):
        total = groups[factors]
        if total != 0:
            out.append(((total,), factors))
    return tuple(out)


def _charge(counter, n):
    counter[0] += n
    if counter[0] > _MAX_TERMS:
        raise _Budget


def _sop(e: Expr, counter) -> tuple:
    k = e.kind
    if k == "const":
        return (((e.value,), ()),)
    if k == "var":
        return (((1.0,), (("v", e.name),)),)
    if k == "neg":
        inner = _sop(e.args[0], counter)
        return tuple((coeffs + (-1.0,), factors) for coeffs, factors in inner)
    if k == "add" or k == "sub":
        left = _sop(e.args[0], counter)
        right = _sop(e.args[1], counter)
        if k == "sub":
            right = tuple((coeffs + (-1.0,), factors) for coeffs, factors in right)
        _charge(counter, len(left) + len(right))
        return _combine(left + right)
    if k == "mul":
        left = _sop(e.args[0], counter)
        right = _sop(e.args[1], counter)
        return _mul_sop(left, right, counter)
    if k == "div":
        num = _sop(e.args[0], counter)
        den = _sop(e.args[1], counter)
        atom = ("i", den)
        return _combine(
            tuple((coeffs, tuple(sorted(factors + (atom,), key=repr))) for coeffs, factors in num)
        )
    if k == "pow":
        exp_node = e.args[1]
        # small integer exponents expand multiplicatively so that f^2 and
        # f*f (as produced by different derivative orders) share one key
        if exp_node.kind == "const" and exp_node.value == int(exp_node.value) and abs(exp_node.value) <= 12:
            n = int(exp_node.value)
            if n == 0:
                return (((1.0,), ()),)
            body = _sop(e.args[0], counter)
            for _ in range(abs(n) - 1):
                body = _mul_sop(body, _sop(e.args[0], counter), counter)
            if n > 0:
                return body
            return (((1.0,), (("i", body),)),)
        base = _sop(e.args[0], counter)
        exp = _sop(exp_node, counter)
        return (((1.0,), (("p", base, exp),)),)
    # unary function
    inner = _sop(e.args[0], counter)
    return (((1.0,), (("f", k, inner),)),)


def _mul_sop(left, right, counter):
    _charge(counter, len(left) * len(right))
    out = []
    for c1, f1 in left:
        for c2, f2 in right:
            out.append((c1 + c2, tuple(sorted(f1 + f2, key=repr))))
    return _combine(out)
