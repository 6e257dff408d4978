"""Shared test utilities: random expression trees and the
finite-difference derivative oracle."""

import numpy as np

from dform.expr import Expr, add, const, div, evaluate, fn, mul, neg, pow_, sub, var

_CONST_POOL = (0.0, 1.0, 2.0, 0.5, -1.0, 3.0, 0.25)
_SAFE_FUNCS = ("sin", "cos", "tanh", "exp", "sqrt", "ln", "abs", "cosh")


def random_tree(rng: np.random.Generator, depth: int = 4) -> Expr:
    """A random expression tree; leaves are variables or small constants."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.55:
            return var("x" if rng.random() < 0.5 else "y")
        return const(_CONST_POOL[rng.integers(len(_CONST_POOL))])
    roll = rng.random()
    if roll < 0.18:
        return neg(random_tree(rng, depth - 1))
    if roll < 0.38:
        return fn(_SAFE_FUNCS[rng.integers(len(_SAFE_FUNCS))], random_tree(rng, depth - 1))
    a = random_tree(rng, depth - 1)
    b = random_tree(rng, depth - 1)
    if roll < 0.58:
        return add(a, b)
    if roll < 0.74:
        return sub(a, b)
    if roll < 0.90:
        return mul(a, b)
    if roll < 0.97:
        return div(a, b)
    # keep exponents tame so values stay representable more often
    return pow_(a, const(float(rng.integers(1, 4))))


def central_difference(tree: Expr, variable: str, x, y, h: float = 1e-5):
    """Second-order central finite difference of tree at (x, y)."""
    if variable == "x":
        return (evaluate(tree, x + h, y) - evaluate(tree, x - h, y)) / (2.0 * h)
    return (evaluate(tree, x, y + h) - evaluate(tree, x, y - h)) / (2.0 * h)
