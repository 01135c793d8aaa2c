"""Generator maps: inversion strategies, framing, bondedness checks."""
import math

import pytest

from isomean._errors import NonMonotoneError, InversionError
from isomean.frame import (
    check_bonded,
    estimate_range_hull,
    generator_map,
    invert_eval,
    invert_frame,
    make_frame,
)
from isomean.intervals import Interval
from isomean.parse import parse


def test_closed_form_inverse_for_library_shapes():
    g = generator_map("exp(x)", Interval(0.0, 1.0))
    assert g.inverse_strategy == "closed-form"
    assert invert_eval(g, math.e) == pytest.approx(1.0, abs=1e-14)
    assert invert_eval(g, 1.0) == pytest.approx(0.0, abs=1e-14)

    h = generator_map("ln(y)", Interval(0.5, 4.0))
    assert invert_eval(h, math.log(2.0)) == pytest.approx(2.0, rel=1e-14)


def test_bracketed_inverse_for_composite_shapes():
    g = generator_map("x+exp(x)", Interval(0.0, 1.0))
    assert g.inverse_strategy == "bracketed-numeric"
    for x in (0.1, 0.5, 0.9):
        u = x + math.exp(x)
        assert invert_eval(g, u) == pytest.approx(x, abs=1e-10)


def test_image_matches_endpoint_values():
    g = generator_map("exp(x)", Interval(0.0, 1.0))
    assert g.image.lo == pytest.approx(1.0)
    assert g.image.hi == pytest.approx(math.e)

    dec = generator_map("3-x", Interval(0.0, 2.0))
    # decreasing maps still report an ordered image
    assert dec.image.lo == pytest.approx(1.0)
    assert dec.image.hi == pytest.approx(3.0)


def test_non_monotone_source_is_rejected():
    with pytest.raises(NonMonotoneError):
        generator_map("sin(x)", Interval(0.0, 3.0))


def test_degenerate_domain_is_rejected():
    with pytest.raises(Exception, match="non-degenerate"):
        generator_map("x", Interval(1.0, 1.0))


def test_inversion_outside_image_fails():
    g = generator_map("x^2", Interval(1.0, 2.0))
    with pytest.raises(InversionError):
        invert_eval(g, 100.0)


def test_frame_inversion_is_an_involution():
    fr = make_frame((("x^2", Interval(0.5, 2.0)), ("ln(y)", Interval(0.5, 8.0))))
    back = invert_frame(invert_frame(fr))
    for x in (0.6, 1.0, 1.9):
        assert back.g(x) == pytest.approx(fr.g(x), rel=1e-10)
    for y in (0.7, 2.0, 7.5):
        assert back.h(y) == pytest.approx(fr.h(y), rel=1e-10)


def test_inverted_frame_swaps_evaluation_direction():
    fr = make_frame((("x", Interval(0.0, 2.0)), ("exp(y)", Interval(0.0, 1.0))))
    inv = invert_frame(fr)
    # the inverted value map undoes the original one
    for y in (0.1, 0.5, 0.9):
        assert inv.h(fr.h(y)) == pytest.approx(y, abs=1e-10)


def test_estimate_range_hull_brackets_the_range():
    hull = estimate_range_hull(parse("sin(x)"), Interval(0.0, math.pi))
    assert hull.lo == pytest.approx(0.0, abs=1e-4)
    assert hull.hi == pytest.approx(1.0, abs=1e-4)
    assert hull.lo <= math.sin(1.0) <= hull.hi


def test_check_bonded_accepts_and_rejects():
    fr = make_frame((("x", Interval(0.0, 4.0)), ("ln(y)", Interval(0.1, 3.0))))
    ok = check_bonded(parse("sqrt(x)"), Interval(1.0, 4.0), fr)
    assert ok.bonded and ok.base_ok and ok.hull_ok

    # sqrt climbs to 3.16 > 3.0 on [1, 10]: the value hull escapes
    bad_frame = make_frame((("x", Interval(0.0, 12.0)), ("ln(y)", Interval(0.1, 3.0))))
    bad = check_bonded(parse("sqrt(x)"), Interval(1.0, 10.0), bad_frame)
    assert not bad.bonded
    assert not bad.hull_ok
    assert bad.message


def test_make_frame_accepts_prebuilt_maps():
    g = generator_map("x", Interval(0.0, 1.0))
    h = generator_map("y^2", Interval(0.0, 2.0))
    fr = make_frame((g, h))
    assert fr.g is g and fr.h is h
