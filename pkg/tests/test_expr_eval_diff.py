"""Symbolic derivatives, vectorised evaluation, and axis rescalings."""
import math

import numpy as np
import pytest

from isomean.expr import (
    ScaleShift,
    as_scalar_fn,
    as_vector_fn,
    compile_numpy,
    depends_on_var,
    differentiate,
    evaluate,
    h_scaleshift,
    h_scaleshift_interval,
    hv_scaleshift,
    substitute,
    v_scaleshift,
)
from isomean._errors import PreconditionError
from isomean.intervals import Interval
from isomean.parse import parse

CORPUS = [
    "x^2",
    "x^3 - 2*x",
    "sin(x)*cos(x)",
    "exp(x/2)",
    "ln(1+x^2)",
    "sqrt(1+x^2)",
    "tan(x/4)",
    "1/(2+x)",
    "x^1.5",
    "sinh(x)/cosh(x)",
]


def central_difference(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2.0 * h)


@pytest.mark.parametrize("source", CORPUS)
def test_derivative_matches_finite_difference(source):
    e = parse(source)
    d = differentiate(e)
    f = as_scalar_fn(e)
    for x in (0.2, 0.9, 1.7, 2.4):
        want = central_difference(f, x)
        got = evaluate(d, x)
        assert got == pytest.approx(want, rel=5e-8, abs=5e-8)


@pytest.mark.parametrize("source", CORPUS)
def test_vector_and_scalar_evaluation_agree(source):
    e = parse(source)
    xs = np.linspace(0.1, 2.5, 37)
    vec = as_vector_fn(e)(xs)
    scal = np.array([as_scalar_fn(e)(float(x)) for x in xs])
    np.testing.assert_allclose(vec, scal, rtol=1e-15, atol=0.0)


def test_compile_numpy_returns_arrays():
    fn = compile_numpy(parse("x^2 + sin(x)"))
    xs = np.array([0.0, 1.0, 2.0])
    out = fn(xs)
    assert isinstance(out, np.ndarray)
    np.testing.assert_allclose(out, xs**2 + np.sin(xs), rtol=1e-15)


def test_depends_on_var():
    assert depends_on_var(parse("x+1"))
    assert not depends_on_var(parse("2*pi"))
    assert not depends_on_var(parse("exp(1)"))


def test_substitute_composes():
    outer = parse("x^2 + 1")
    inner = parse("sin(x)")
    comp = substitute(outer, inner)
    for x in (0.3, 1.2):
        assert evaluate(comp, x) == pytest.approx(math.sin(x) ** 2 + 1.0, rel=1e-15)


class TestScaleShift:
    def test_zero_scale_rejected(self):
        with pytest.raises(PreconditionError, match="nonzero"):
            ScaleShift(0.0)

    def test_value_rescale(self):
        # v-rescale replaces f by k*f + C
        s = ScaleShift(3.0, -1.0)
        e = v_scaleshift(parse("x^2"), s)
        assert evaluate(e, 2.0) == pytest.approx(3.0 * 4.0 - 1.0)

    def test_argument_rescale(self):
        # h-rescale precomposes with the inverse affine map u -> (u-C)/k
        s = ScaleShift(2.0, 5.0)
        e = h_scaleshift(parse("x^2"), s)
        assert evaluate(e, 9.0) == pytest.approx(((9.0 - 5.0) / 2.0) ** 2)

    def test_both_rescales_commute_into_one_expression(self):
        sv = ScaleShift(2.0, 1.0)
        sh = ScaleShift(-3.0, 0.5)
        e = hv_scaleshift(parse("exp(x)"), sv, sh)
        u = 2.0
        want = 2.0 * math.exp((u - 0.5) / -3.0) + 1.0
        assert evaluate(e, u) == pytest.approx(want, rel=1e-15)

    def test_interval_transport(self):
        d = Interval(1.0, 2.0, lo_open=True)
        out = h_scaleshift_interval(d, ScaleShift(-2.0, 1.0))
        # negative scale flips orientation and carries the open side along
        assert out.lo == -3.0 and out.hi == -1.0
        assert out.hi_open and not out.lo_open

        plain = h_scaleshift_interval(Interval(0.0, 1.0), ScaleShift(3.0, 2.0))
        assert (plain.lo, plain.hi) == (2.0, 5.0)
