"""Parser tests.

Structural expectations are hand-parsed from the grammar before the
implementation was written and frozen here as literal trees.
"""

import numpy as np
import pytest

from dform.expr import (
    Expr,
    ParseError,
    add,
    const,
    div,
    evaluate,
    fn,
    mul,
    neg,
    parse,
    pow_,
    sub,
    var,
)

X, Y = var("x"), var("y")


def test_single_variable():
    assert parse("x") == X
    assert parse(" y ") == Y


def test_number_literals():
    assert parse("0") == const(0.0)
    assert parse("2.5") == const(2.5)
    assert parse("1e-3") == const(0.001)
    assert parse("2.5E+2") == const(250.0)
    assert parse(".5") == const(0.5)


def test_named_constants():
    assert parse("pi") == const(np.pi)
    assert parse("e") == const(np.e)


def test_fig1_component():
    assert parse("y*sin(x)") == mul(Y, fn("sin", X))


def test_hand_parsed_mixed_tree():
    # x^2*y - e^(-x), hand-derived:
    #   sub( mul( pow(x,2), y ), pow(e, neg(x)) )
    expected = sub(
        mul(pow_(X, const(2.0)), Y),
        pow_(const(np.e), neg(X)),
    )
    assert parse("x^2*y - e^(-x)") == expected
    # value at (1,1) computed by hand: 1 - exp(-1)
    got = float(evaluate(parse("x^2*y - e^(-x)"), 1.0, 1.0))
    assert got == pytest.approx(0.6321205588285577, abs=0, rel=1e-15)


def test_pow_right_associative():
    assert parse("x^y^2") == pow_(X, pow_(Y, const(2.0)))
    assert parse("2**3**2") == pow_(const(2.0), pow_(const(3.0), const(2.0)))


def test_double_star_same_as_caret():
    assert parse("x**2") == parse("x^2")


def test_left_associative_sub_and_div():
    assert parse("x-y-1") == sub(sub(X, Y), const(1.0))
    assert parse("x/y/2") == div(div(X, Y), const(2.0))


def test_unary_minus_binds_inside_base():
    # '-' lives in the base rule, so -x^2 is (-x)^2 under this grammar
    assert parse("-x^2") == pow_(neg(X), const(2.0))
    assert parse("-x+y") == add(neg(X), Y)
    assert parse("--x") == neg(neg(X))


def test_function_calls():
    for name in ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "ln", "log10", "sqrt", "abs"):
        tree = parse(f"{name}(x+1)")
        assert tree == fn(name, add(X, const(1.0)))


def test_whitespace_insensitive():
    assert parse("y * sin( x )") == parse("y*sin(x)")
    assert parse("  x + y ") == parse("x+y")


def _offset_of(source: str) -> int:
    with pytest.raises(ParseError) as err:
        parse(source)
    assert 0 <= err.value.offset <= len(source.encode("utf-8"))
    return err.value.offset


def test_unknown_identifier_offset():
    assert _offset_of("z+1") == 0
    assert _offset_of("x+z") == 2


def test_unbalanced_paren_reports_end():
    src = "y*sin(x"
    assert _offset_of(src) == len(src)


def test_trailing_input_rejected():
    assert _offset_of("x+2 3") == 4
    assert _offset_of("x)") == 1


def test_empty_input_rejected():
    assert _offset_of("") == 0
    assert _offset_of("   ") == 0


def test_implicit_multiplication_rejected_with_hint():
    with pytest.raises(ParseError) as err:
        parse("2x")
    assert err.value.offset == 1
    assert "implicit multiplication" in str(err.value)
    assert "*" in str(err.value)

    with pytest.raises(ParseError) as err:
        parse("y sin(x)")
    assert err.value.offset == 2
    assert "implicit multiplication" in str(err.value)


def test_log_rejected_by_name():
    with pytest.raises(ParseError) as err:
        parse("log(x)")
    msg = str(err.value)
    assert "ln" in msg and "log10" in msg
    assert err.value.offset == 0


def test_function_requires_parenthesized_argument():
    with pytest.raises(ParseError) as err:
        parse("sin x")
    assert err.value.offset == 4


def test_unexpected_character():
    with pytest.raises(ParseError) as err:
        parse("x + $")
    assert err.value.offset == 4


def test_number_then_e_is_implicit_multiplication():
    # "2e" cannot lex as an exponent (no digits), so it is 2 then e
    with pytest.raises(ParseError) as err:
        parse("2e")
    assert err.value.offset == 1


def test_parse_error_is_value_error():
    assert issubclass(ParseError, ValueError)


def test_offsets_are_bytes_for_non_ascii_source():
    # the micro sign is two bytes in UTF-8; the bad token follows it
    src = "µ"
    with pytest.raises(ParseError) as err:
        parse(src)
    assert err.value.offset == 0
    src2 = "x+µ"
    with pytest.raises(ParseError) as err:
        parse(src2)
    assert err.value.offset == 2


def test_deep_nesting_parses():
    src = "(" * 40 + "x" + ")" * 40
    assert parse(src) == X


def test_nesting_beyond_limit_is_rejected():
    src = "(" * 300 + "x" + ")" * 300
    with pytest.raises(ParseError, match="nests too deeply"):
        parse(src)


@pytest.mark.parametrize("src", [
    "x+" * 5000 + "x",     # left-deep sum, never recurses while parsing
    "-" * 5000 + "x",      # unary chain
    "x" + "^2" * 5000,     # right-deep power chain
])
def test_pathological_chains_fail_cleanly_not_with_a_stack_fault(src):
    with pytest.raises(ParseError, match="nests too deeply"):
        parse(src)


def test_flat_sums_under_the_limit_still_parse():
    n = 199
    e = parse("x+" * n + "x")
    total = evaluate(e, np.float64(1.0), np.float64(0.0))
    assert total == n + 1
