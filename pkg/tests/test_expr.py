import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logharm.errors import DivisionNearZero, ExpressionSyntaxError, SingularAtOrigin, UnknownIdentifier
from logharm.expr import BinOp, Const, Exp, Neg, Pow, Var, compile_series, parse, pointwise_eval, to_text
from logharm.fixtures import EXAMPLE1, EXAMPLE2, EXPRESSION_CORPUS
from logharm.grid import disk_grid

SMALL_GRID = disk_grid((0.1, 0.2, 0.3, 0.4, 0.5), 32)
# exp(4z/(1-z)) has coefficients near 1e11 at n = 64; see test_truncation_limit
SLOW_DECAY = {EXAMPLE2["phi"], "exp(4*z/(1-z))"}


def test_parse_atoms():
    assert parse("z").ast == Var()
    assert parse("i").ast == Const(1j)
    assert parse("2.5i").ast == Const(2.5j)
    assert parse("  3 ").ast == Const(3)


def test_parse_example1_product():
    ast = parse("z*(1+ (i/3)*z)").ast
    assert ast == BinOp("*", Var(), BinOp("+", Const(1), BinOp("*", BinOp("/", Const(1j), Const(3)), Var())))
    assert pointwise_eval(parse("z*(1+ (i/3)*z)"), 0.6) == pytest.approx(0.6 * (1 + 0.2j))


def test_parse_exp_node():
    ast = parse("exp(4*z/(1-z))").ast
    assert isinstance(ast, Exp)
    assert ast.arg == BinOp("/", BinOp("*", Const(4), Var()), BinOp("-", Const(1), Var()))


def test_precedence():
    assert parse("1+2*z").ast == BinOp("+", Const(1), BinOp("*", Const(2), Var()))
    assert parse("-z^2").ast == Neg(Pow(Var(), 2))
    assert parse("1-z-z").ast == BinOp("-", BinOp("-", Const(1), Var()), Var())
    assert parse("z**3").ast == parse("z^3").ast


def test_negative_power_is_division():
    assert parse("z^-2").ast == BinOp("/", Const(1), Pow(Var(), 2))


def test_unicode_operators():
    assert parse("−i·z×3").ast == parse("-i*z*3").ast


@pytest.mark.parametrize(
    "source, offset",
    [("z+", 2), ("(z", 2), ("z $ 1", 2), ("1 + * z", 4), ("exp z", 4)],
)
def test_syntax_errors_report_offset(source, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse(source)
    assert info.value.offset == offset


def test_offset_counts_bytes():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("−z $")
    assert info.value.offset == len("−z ".encode())


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as info:
        parse("1 + sin(z)")
    assert info.value.offset == 4
    with pytest.raises(UnknownIdentifier):
        parse("log(1+z)")


def test_pointwise_examples():
    assert pointwise_eval(parse("z/(1-z)^2"), 0.5) == pytest.approx(2.0, abs=1e-15)
    assert pointwise_eval(parse("z"), 1j) == 1j
    val = pointwise_eval(parse(EXAMPLE1["a"]), 0.9)
    z = 0.9
    assert val == pytest.approx(-1j * z * (3 + 1j * z) / ((3 - 1j * z) * (3 + 2j * z)), abs=1e-15)
    assert abs(val) < 1


def test_pointwise_division_near_zero():
    with pytest.raises(DivisionNearZero):
        pointwise_eval(parse("1/(1-z)"), 1.0)
    with pytest.raises(DivisionNearZero):
        pointwise_eval(parse("1/z"), np.array([0.5, 0.0]))


def test_compile_examples():
    s = compile_series(parse("1/(1-z)"), 64)
    assert np.max(np.abs(s.coeffs - 1)) <= 1e-15
    s = compile_series(parse("z/(1-z^2)"), 64)
    expected = np.array([n % 2 for n in range(65)], dtype=float)
    assert np.max(np.abs(s.coeffs - expected)) <= 1e-15


def test_compile_example2_g_matches_closed_form():
    s = compile_series(parse("exp(2*z/(1-z))*(1-z)"), 64)
    assert s[0] == pytest.approx(1)
    # exp(2z + 2z^2 + ...) = 1 + 2z + 4z^2 + ..., times (1 - z)
    assert complex(s[1]) == pytest.approx(1.0)
    assert complex(s[2]) == pytest.approx(2.0)
    pts = disk_grid((0.3, 0.5), 32)
    ref = np.exp(2 * pts / (1 - pts)) * (1 - pts)
    assert np.max(np.abs(s(pts) - ref)) <= 1e-9


def test_compile_singular_at_origin():
    with pytest.raises(SingularAtOrigin):
        compile_series(parse("z^-1"), 32)
    with pytest.raises(SingularAtOrigin):
        compile_series(parse("1/(z*(1+z))"), 32)


@pytest.mark.parametrize("source", [s for s in EXPRESSION_CORPUS if s not in SLOW_DECAY])
def test_compile_matches_pointwise(source):
    spec = parse(source)
    err = np.max(np.abs(compile_series(spec, 64)(SMALL_GRID) - pointwise_eval(spec, SMALL_GRID)))
    assert err <= 1e-9


@pytest.mark.parametrize("source", sorted(SLOW_DECAY))
def test_truncation_limit(source):
    spec = parse(source)
    exact = pointwise_eval(spec, SMALL_GRID)
    err64 = np.max(np.abs(compile_series(spec, 64)(SMALL_GRID) - exact))
    err96 = np.max(np.abs(compile_series(spec, 96)(SMALL_GRID) - exact))
    # the error is truncation, not arithmetic: it collapses as the order grows
    assert err64 > 1e-9
    assert err96 <= 1e-12


@pytest.mark.parametrize("source", EXPRESSION_CORPUS)
def test_print_fixpoint_on_corpus(source):
    ast = parse(source).ast
    text = to_text(ast)
    assert parse(text).ast == ast
    assert to_text(parse(text).ast) == text


# random ASTs

consts = st.one_of(
    st.integers(-5, 9).map(lambda k: Const(complex(k))),
    st.sampled_from([Const(1j), Const(2.5j), Const(0.25), Const(-1.5j), Const(1 + 2j)]),
)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Exp, children),
        st.builds(Pow, children, st.integers(0, 4)),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
    )


asts = st.recursive(st.one_of(st.just(Var()), consts), _extend, max_leaves=8)


def _same_value(a, b):
    return a == b or (cmath.isnan(a) and cmath.isnan(b))


@settings(max_examples=300, deadline=None)
@given(asts)
def test_print_parse_round_trip(ast):
    text = to_text(ast)
    again = parse(text).ast
    assert to_text(again) == text
    # Neg of a literal may print as a negative literal; values must agree anyway
    if again != ast:
        with np.errstate(all="ignore"):
            try:
                v1 = complex(pointwise_eval(ast, 0.3 + 0.1j))
                v2 = complex(pointwise_eval(again, 0.3 + 0.1j))
            except (DivisionNearZero, OverflowError):
                return
        assert _same_value(v1, v2) or abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1))


analytic = st.sampled_from([s for s in EXPRESSION_CORPUS if s not in SLOW_DECAY])


@settings(max_examples=40, deadline=None)
@given(analytic, analytic)
def test_compile_is_linear(f, g):
    both = compile_series(parse(f"({f}) + ({g})"), 64)
    separate = compile_series(parse(f), 64) + compile_series(parse(g), 64)
    scale = max(1.0, float(np.max(np.abs(both.coeffs))))
    assert np.max(np.abs(both.coeffs - separate.coeffs)) <= 1e-13 * scale
