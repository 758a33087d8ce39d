import pytest
from hypothesis import given, strategies as st

from helixlab import expressions as ex
from helixlab.errors import ParseError


def test_parse_example_product_of_cos():
    ast = ex.parse_expr("2*cos(s/5)")
    assert ast == ex.Mul(ex.Num(2.0), ex.Call("cos", ex.Div(ex.Var(), ex.Num(5.0))))


def test_parse_example_power_minus_sinh():
    ast = ex.parse_expr("s^2 - sinh(s)")
    assert ast == ex.Sub(ex.Pow(ex.Var(), 2), ex.Call("sinh", ex.Var()))


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        ex.parse_expr("sin(")
    assert err.value.offset == 4
    assert err.value.expected


def test_parse_error_trailing_garbage():
    with pytest.raises(ParseError) as err:
        ex.parse_expr("1 + 2 )")
    assert err.value.offset == 6


def test_parse_error_unknown_identifier():
    with pytest.raises(ParseError):
        ex.parse_expr("tan(s)")


def test_whitespace_insensitive():
    assert ex.parse_expr(" 1+ 2 * s ") == ex.parse_expr("1+2*s")


def test_precedence():
    assert ex.parse_expr("1+2*s") == ex.Add(
        ex.Num(1.0), ex.Mul(ex.Num(2.0), ex.Var())
    )
    # left associativity of subtraction
    assert ex.parse_expr("3-2-1") == ex.Sub(
        ex.Sub(ex.Num(3.0), ex.Num(2.0)), ex.Num(1.0)
    )


def test_unary_minus_binds_to_base():
    # per the grammar the exponent applies to the parsed base, so -s^2 = (-s)^2
    assert ex.parse_expr("-s^2") == ex.Pow(ex.Neg(ex.Var()), 2)


def test_negative_exponent():
    assert ex.parse_expr("s^-2") == ex.Pow(ex.Var(), -2)


def test_scientific_notation():
    assert ex.parse_expr("1e-3") == ex.Num(1e-3)
    assert ex.parse_expr("2.5E2*s") == ex.Mul(ex.Num(250.0), ex.Var())


def _exprs(max_leaves: int = 12):
    number = st.floats(min_value=0.0, max_value=1e3, allow_nan=False).map(ex.Num)
    leaf = st.one_of(number, st.just(ex.Var()))

    def extend(children):
        binop = st.sampled_from([ex.Add, ex.Sub, ex.Mul, ex.Div])
        return st.one_of(
            st.tuples(binop, children, children).map(lambda t: t[0](t[1], t[2])),
            children.map(ex.Neg),
            st.tuples(children, st.integers(min_value=0, max_value=4)).map(
                lambda t: ex.Pow(t[0], t[1])
            ),
            st.tuples(st.sampled_from(ex.FUNCTIONS), children).map(
                lambda t: ex.Call(t[0], t[1])
            ),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


@given(_exprs())
def test_pretty_print_round_trip(ast):
    assert ex.parse_expr(ex.pretty(ast)) == ast


@given(_exprs())
def test_tape_compiles_with_positive_depth(ast):
    tape = ex.compile_tape(ast)
    assert tape.max_depth >= 1
    assert tape.ops.shape == tape.fargs.shape == tape.iargs.shape
