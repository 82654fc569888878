import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabound.errors import ExprDomainError, ExprSyntaxError
from stabound.expr import BinOp, Call, Const, Neg, Var, evaluate, parse, to_string


class TestParseEval:
    @pytest.mark.parametrize(
        "src,t,expected",
        [
            ("1+2*3", 0.0, 7.0),
            ("1+2*3", 5.0, 7.0),
            ("exp(-t)", 0.0, 1.0),
            ("sqrt(10)", 0.0, math.sqrt(10.0)),
            ("-3", 17.0, -3.0),
            ("exp(-2*t)", 1.0, math.exp(-2.0)),
            ("2^3^2", 0.0, 512.0),
            ("(1+2)*3", 0.0, 9.0),
            ("2^-3", 0.0, 0.125),
            ("-t^2", 3.0, -9.0),
            ("10-4-3", 0.0, 3.0),
            ("24/4/2", 0.0, 3.0),
            ("abs(-t)", 2.5, 2.5),
            ("ln(exp(t))", 1.5, 1.5),
            ("cos(0)*sin(0)", 0.0, 0.0),
            ("1e2+1.5E-1", 0.0, 100.15),
            (".5*t", 4.0, 2.0),
        ],
    )
    def test_evaluates(self, src, t, expected):
        assert evaluate(parse(src), t) == pytest.approx(expected, rel=1e-15, abs=1e-15)

    def test_whitespace_insensitive(self):
        assert evaluate(parse("  1 +  2 * 3 "), 0.0) == 7.0

    def test_variable(self):
        assert evaluate(parse("t"), 3.75) == 3.75

    def test_deterministic(self):
        e = parse("sqrt(10)*sin(3*t)+exp(-t)")
        assert evaluate(e, 1.2345) == evaluate(parse("sqrt(10)*sin(3*t)+exp(-t)"), 1.2345)


class TestSyntaxErrors:
    @pytest.mark.parametrize(
        "src,offset",
        [
            ("", 0),
            ("   ", 0),
            ("2t", 1),  # implicit multiplication rejected
            ("1+", 2),
            ("(1+2", 4),
            ("1+*2", 2),
            ("exp 3", 4),
            ("foo(3)", 0),
            ("x", 0),
            ("1 2", 2),
            ("@", 0),
        ],
    )
    def test_offset_reported(self, src, offset):
        with pytest.raises(ExprSyntaxError) as err:
            parse(src)
        assert err.value.offset == offset

    def test_unknown_identifier_message(self):
        with pytest.raises(ExprSyntaxError, match="unknown identifier 'tau'"):
            parse("exp(-tau)")


class TestDomainErrors:
    @pytest.mark.parametrize(
        "src,t",
        [
            ("sqrt(-1)", 0.0),
            ("sqrt(t)", -4.0),
            ("ln(0)", 0.0),
            ("ln(t-5)", 1.0),
            ("1/t", 0.0),
            ("0^-1", 0.0),
            ("(-2)^0.5", 0.0),
            ("exp(t)", 1e6),
        ],
    )
    def test_raises(self, src, t):
        with pytest.raises(ExprDomainError):
            evaluate(parse(src), t)

    def test_error_names_the_node(self):
        with pytest.raises(ExprDomainError, match=r"sqrt\(t-5\.0\)"):
            evaluate(parse("1 + sqrt(t - 5)"), 0.0)


# strategies for random ASTs: leaves are t or safe constants; functions whose
# domains are all of R keep random evaluation total
_leaf = st.one_of(
    st.builds(Const, st.floats(min_value=0.001, max_value=9.9, allow_nan=False)),
    st.builds(Var),
)


def _node(children):
    safe_call = st.builds(Call, st.sampled_from(["exp", "sin", "cos", "abs"]), children)
    binop = st.builds(BinOp, st.sampled_from(["+", "-", "*"]), children, children)
    return st.one_of(st.builds(Neg, children), safe_call, binop)


_ast = st.recursive(_leaf, _node, max_leaves=25)


@settings(max_examples=200, deadline=None)
@given(_ast)
def test_print_parse_round_trip(e):
    text = to_string(e)
    reparsed = parse(text)
    for t in np.linspace(-3.0, 3.0, 7):
        try:
            expected = evaluate(e, float(t))
        except ExprDomainError:
            continue
        assert evaluate(reparsed, float(t)) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_round_trip_on_100_random_times():
    rng = np.random.default_rng(7)
    for src in ["exp(-t)*sqrt(10)", "1+t*(2-t)/4", "2^t-t^2", "-t^3+cos(3*t)"]:
        e = parse(src)
        again = parse(to_string(e))
        for t in rng.uniform(0.1, 5.0, 100):
            assert evaluate(again, t) == pytest.approx(evaluate(e, t), rel=1e-13)


def test_extra_parens_are_identity():
    rng = np.random.default_rng(9)
    for src in ["1+2*3", "exp(-t)", "2^3^2", "-t^2+1"]:
        wrapped = parse("(" + src + ")")
        plain = parse(src)
        for t in rng.uniform(-2.0, 2.0, 20):
            assert evaluate(wrapped, t) == evaluate(plain, t)
