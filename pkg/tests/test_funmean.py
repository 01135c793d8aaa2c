"""Integral means of functions: named constructors, the general engine,
degeneracies, improper windows, and structural invariants."""
import math

import pytest
from hypothesis import given, strategies as st

from isomean._errors import NotBondedError
from isomean.expr import evaluate
from isomean.frame import generator_map, make_frame
from isomean.funmean import (
    class_I_mean,
    class_II_mean,
    class_III_mean,
    class_IV_mean,
    class_V_mean,
    class_VI_mean,
    class_VII_mean,
    conjugation_classII,
    dvi_mean,
    dvi_mean_riemann_oracle,
    elastic_mean,
    geometric_mean,
    harmonic_mean,
    mean_problem,
    plain_mean,
    power_integral_mean,
)
from isomean.intervals import Interval
from isomean.parse import parse

HALF_PI = math.pi / 2.0


class TestNamedMeans:
    def test_plain_average_of_square(self):
        r = plain_mean("x^2", Interval(0.0, 2.0))
        assert r.value == pytest.approx(4.0 / 3.0, rel=1e-12)
        assert r.method == "quadrature"

    def test_geometric_mean_of_sine_arch(self):
        r = geometric_mean("sin(x)", Interval(0.0, math.pi, lo_open=True, hi_open=True))
        assert r.value == pytest.approx(0.5, abs=1e-8)

    def test_geometric_mean_of_tangent_quarter_period(self):
        r = geometric_mean("tan(x)", Interval(0.0, HALF_PI, lo_open=True, hi_open=True))
        assert r.value == pytest.approx(1.0, abs=1e-6)

    def test_geometric_mean_of_circle_chords(self):
        r = geometric_mean("2*sqrt(1-x^2)", Interval(-1.0, 1.0, lo_open=True, hi_open=True))
        assert r.value == pytest.approx(4.0 / math.e, abs=1e-7)

    def test_geometric_mean_of_identity_near_zero(self):
        r = geometric_mean("x", Interval(0.0, 1.0, lo_open=True))
        assert r.value == pytest.approx(1.0 / math.e, abs=1e-9)

    def test_harmonic_mean_of_identity(self):
        r = harmonic_mean("x", Interval(1.0, 2.0))
        assert r.value == pytest.approx(1.0 / math.log(2.0), rel=1e-10)

    def test_elastic_mean_of_identity_is_the_log_mean(self):
        r = elastic_mean("x", Interval(1.0, 2.0))
        assert r.value == pytest.approx(1.0 / math.log(2.0), rel=1e-10)
        for a, b in ((0.5, 3.0), (2.0, 9.0)):
            got = elastic_mean("x", Interval(a, b)).value
            assert got == pytest.approx((b - a) / math.log(b / a), rel=1e-10)

    def test_elastic_mean_of_tangent_quarter_period(self):
        r = elastic_mean("tan(x)", Interval(0.0, HALF_PI, lo_open=True, hi_open=True))
        assert r.value == pytest.approx(2.0 / math.pi, abs=1e-5)
        assert "endpoint-limit" in r.method

    def test_power_integral_mean(self):
        r = power_integral_mean("x", Interval(1.0, 2.0), 3.0)
        assert r.value == pytest.approx((15.0 / 4.0) ** (1.0 / 3.0), rel=1e-12)
        quad = power_integral_mean("sin(x)", Interval(0.0, math.pi), 2.0)
        assert quad.value == pytest.approx(math.sqrt(0.5), rel=1e-10)


class TestClassConstructors:
    def test_identity_maps_reduce_to_the_plain_average(self):
        d = Interval(0.5, 2.0)
        want = plain_mean("exp(x)", d).value
        assert class_I_mean("exp(x)", d, "y").value == pytest.approx(want, rel=1e-12)
        assert class_II_mean("exp(x)", d, "x").value == pytest.approx(want, rel=1e-12)
        assert class_VI_mean("exp(x)", d).value == pytest.approx(want, rel=1e-12)

    def test_value_map_only(self):
        # cube-root mean of sin via a cubic value map
        d = Interval(0.2, 2.8)
        r = class_I_mean("sin(x)", d, "y^3")
        want = power_integral_mean("sin(x)", d, 3.0).value
        assert r.value == pytest.approx(want, rel=1e-10)

    def test_base_map_only_matches_weighted_average(self):
        # a base map g reweights the average by g'
        from isomean.compare import first_mvt_mean

        d = Interval(1.0, 2.0)
        r = class_II_mean("exp(x)", d, "x^2")
        want = first_mvt_mean("exp(x)", "2*x", d)
        assert r.value == pytest.approx(want.value, rel=1e-10)

    def test_same_map_on_both_axes(self):
        d = Interval(1.0, 2.0)
        r = class_III_mean("x", d, "x^2")
        # g = h = x^2 with f = id: sqrt of (integral of 2x^3) / (b^2 - a^2)
        want = math.sqrt(2.5)
        assert r.value == pytest.approx(want, rel=1e-10)

    def test_general_frame_with_closed_form(self):
        r = class_IV_mean("exp(x)", Interval(0.0, 1.0), "x^2", "ln(y)")
        assert r.value == pytest.approx(math.exp(2.0 / 3.0), rel=1e-10)

    def test_bivariate_log_value_map_is_the_identric_mean(self):
        r = class_V_mean("x", "ln(y)", 2.0, 8.0)
        want = math.exp((8.0 * math.log(8.0) - 2.0 * math.log(2.0)) / 6.0 - 1.0)
        assert r.value == pytest.approx(want, rel=1e-10)

    def test_bivariate_log_base_map_is_the_log_mean(self):
        r = class_V_mean("ln(x)", "y", 2.0, 5.0)
        assert r.value == pytest.approx(3.0 / math.log(2.5), rel=1e-10)

    def test_self_paired_map(self):
        r = class_VII_mean("x^2", Interval(0.0, 1.0))
        assert r.value == pytest.approx(4.0 / 9.0, rel=1e-8)
        r2 = class_VII_mean("x^3", Interval(0.0, 2.0))
        assert r2.value == pytest.approx(3.375, rel=1e-8)


class TestDegenerateWindows:
    POINT = Interval(1.5, 1.5)

    @pytest.mark.parametrize(
        "make",
        [
            lambda d: plain_mean("x^2", d),
            lambda d: geometric_mean("x^2", d),
            lambda d: harmonic_mean("x^2", d),
            lambda d: elastic_mean("x^2", d),
            lambda d: power_integral_mean("x^2", d, 3.0),
            lambda d: class_I_mean("x^2", d, "y^2"),
            lambda d: class_II_mean("x^2", d, "x^3"),
            lambda d: class_III_mean("x^2", d, "x^2"),
            lambda d: class_IV_mean("x^2", d, "x^3", "ln(y)"),
            lambda d: class_VI_mean("x^2", d),
            lambda d: class_VII_mean("x^2", d),
        ],
    )
    def test_point_window_returns_the_point_value(self, make):
        r = make(self.POINT)
        assert r.value == pytest.approx(2.25, rel=1e-14)
        assert r.method == "closed-form"
        assert r.abs_error_estimate == 0.0

    def test_degenerate_bivariate_window(self):
        r = class_V_mean("x", "ln(y)", 3.0, 3.0)
        assert r.value == pytest.approx(3.0, rel=1e-14)


class TestEngine:
    def frame(self):
        return make_frame((("x", Interval(-0.5, 4.0)), ("ln(y)", Interval(0.05, 9.0))))

    def test_endpoint_order_is_irrelevant(self):
        fwd = dvi_mean(mean_problem("2+sin(x)", 0.0, 3.0, self.frame()))
        rev = dvi_mean(mean_problem("2+sin(x)", 3.0, 0.0, self.frame()))
        assert rev.value == fwd.value  # bit-for-bit: the window is sorted once

    def test_riemann_refinement_agrees(self):
        p = mean_problem("2+sin(x)", 0.0, 3.0, self.frame())
        fine = dvi_mean_riemann_oracle(p, 65536)
        assert dvi_mean(p).value == pytest.approx(fine, abs=1e-4)

    def test_unbonded_problem_is_rejected(self):
        # 2+sin dips to 1.0 on [0, 3]; a value map living on [2.5, 9] misses it
        tight = make_frame((("x", Interval(-0.5, 4.0)), ("ln(y)", Interval(2.5, 9.0))))
        with pytest.raises(NotBondedError, match="escapes"):
            mean_problem("2+sin(x)", 0.0, 3.0, tight)

    def test_value_map_rescaling_is_invisible(self):
        d = Interval(0.5, 2.0)
        base = class_I_mean("exp(x)", d, "y^2").value
        # k*h + C generates the same mean
        hull = Interval(1.0, 8.0)
        fr = make_frame((("x", Interval(0.0, 3.0)), ("3*y^2+1", hull)))
        r = dvi_mean(mean_problem("exp(x)", 0.5, 2.0, fr))
        assert r.value == pytest.approx(base, rel=1e-11)

    def test_base_map_rescaling_is_invisible(self):
        d = Interval(1.0, 2.0)
        base = class_II_mean("exp(x)", d, "x^2").value
        fr = make_frame((("-2*x^2+5", Interval(0.5, 2.5)), ("y", Interval(1.0, 9.0))))
        r = dvi_mean(mean_problem("exp(x)", 1.0, 2.0, fr))
        assert r.value == pytest.approx(base, rel=1e-11)


class TestConjugation:
    def test_swapping_the_roles_of_two_increasing_maps(self):
        rep = conjugation_classII("x^2", "x^3", Interval(1.0, 2.0))
        assert rep.mean_f_by_g == pytest.approx(93.0 / 35.0, rel=1e-10)
        assert rep.mean_g_by_f == pytest.approx(62.0 / 15.0, rel=1e-10)
        assert abs(rep.product_residual) < 1e-9
        assert abs(rep.slope_residual) < 1e-9

    def test_residuals_vanish_for_exp_and_log_scale_pair(self):
        rep = conjugation_classII("exp(x)", "x^2", Interval(0.5, 1.5))
        assert abs(rep.product_residual) < 1e-9
        assert abs(rep.slope_residual) < 1e-9


# ---------------------------------------------------------------------------
# structural properties over a randomised pool
# ---------------------------------------------------------------------------

FUNCTIONS = ["2+sin(x)", "exp(x/2)", "1+x^2", "3/(1+x)"]
VALUE_MAPS = ["y", "y^2", "ln(y)", "sqrt(y)", "1/y"]


@given(
    st.sampled_from(FUNCTIONS),
    st.sampled_from(VALUE_MAPS),
    st.floats(0.1, 1.4),
    st.floats(0.2, 1.8),
)
def test_mean_lies_in_the_value_hull(fsrc, hsrc, lo, width):
    d = Interval(lo, lo + width)
    fr = make_frame((("x", Interval(0.0, 4.0)), (hsrc, Interval(0.05, 30.0))))
    r = dvi_mean(mean_problem(fsrc, d.lo, d.hi, fr))
    f = parse(fsrc)
    samples = [evaluate(f, d.lo + t * (d.hi - d.lo) / 16.0) for t in range(17)]
    assert min(samples) - 1e-6 <= r.value <= max(samples) + 1e-6


@given(st.sampled_from(FUNCTIONS), st.floats(0.1, 2.0))
def test_mean_of_constant_window_is_reached_in_the_limit(fsrc, lo):
    # shrinking windows converge to the function value at the centre
    eps = 1e-5
    r = dvi_mean(
        mean_problem(
            fsrc,
            lo,
            lo + eps,
            make_frame((("x", Interval(0.0, 4.0)), ("y", Interval(0.0, 30.0)))),
        )
    )
    f = parse(fsrc)
    assert r.value == pytest.approx(evaluate(f, lo + eps / 2.0), rel=1e-4)
