import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kleinian import Circle, Line, MobiusMap, apply, classify, fixed_points, image_circle, reflect
from kleinian import reflections_to_mobius, tangency_classify

from conftest import random_map

UNIT = Circle(0, 1)


def circumcircle(a, b, c):
    """Circle through three points, solved directly."""
    A = np.array([[2 * (b - a).real, 2 * (b - a).imag], [2 * (c - a).real, 2 * (c - a).imag]])
    rhs = np.array([abs(b) ** 2 - abs(a) ** 2, abs(c) ** 2 - abs(a) ** 2])
    x, y = np.linalg.solve(A, rhs)
    return complex(x, y), abs(complex(x, y) - a)


def test_reflect_examples():
    assert reflect(UNIT, 2) == pytest.approx(0.5)
    assert reflect(UNIT, 1) == pytest.approx(1)
    assert reflect(Circle(1, 2), 2) == pytest.approx(5)
    assert reflect(Line(0, 1), 1 + 2j) == pytest.approx(1 - 2j)


def test_reflections_to_mobius_examples():
    assert reflections_to_mobius(UNIT, UNIT).allclose(MobiusMap.identity())
    m = reflections_to_mobius(Circle(0, 2), UNIT)
    assert apply(m, 1) == pytest.approx(4)
    assert m.allclose(MobiusMap(2, 0, 0, 0.5))
    m = reflections_to_mobius(Circle(-1, 1), Circle(1, 1))
    assert classify(m) == "parabolic"
    assert fixed_points(m)[0] == pytest.approx(0, abs=1e-12)


def test_tangency_examples():
    assert tangency_classify(Circle(-1, 1), Circle(1, 1)) == "tangent"
    assert tangency_classify(UNIT, Circle(3, 1)) == "disjoint"
    assert tangency_classify(UNIT, Circle(0, 1)) == "equal"
    assert tangency_classify(UNIT, Circle(0.5, 1)) == "overlapping"
    assert tangency_classify(Circle(0, 3), Circle(0.5, 1)) == "nested_disjoint"
    assert tangency_classify(Circle(0, 2), Circle(1, 1)) == "tangent"
    assert tangency_classify(Line(1, 1j), UNIT) == "tangent"
    assert tangency_classify(Line(0, 1), Line(1j, 1)) == "tangent"


def test_image_circle_examples():
    c = image_circle(MobiusMap(1, 3, 0, 1), UNIT)
    assert c.centre == pytest.approx(3) and c.radius == pytest.approx(1)
    c = image_circle(MobiusMap(2, 0, 0, 0.5), UNIT)
    assert c.centre == pytest.approx(0) and c.radius == pytest.approx(4)


def test_image_circle_against_three_point_oracle():
    m, c = MobiusMap(0, -1, 1, 0), Circle(2, 1)
    pts = [apply(m, c.point(t)) for t in (0.1, 2.0, 4.0)]
    centre, radius = circumcircle(*pts)
    img = image_circle(m, c)
    assert img.centre == pytest.approx(centre) and img.radius == pytest.approx(radius)
    assert img.centre == pytest.approx(-2 / 3) and img.radius == pytest.approx(1 / 3)


def test_circle_through_pole_becomes_line():
    img = image_circle(MobiusMap(0, -1, 1, 0), Circle(1, 1))
    assert isinstance(img, Line)
    assert abs(img.direction.real) < 1e-12  # the vertical line Re z = -1/2
    assert img.point.real == pytest.approx(-0.5)


def test_circle_validation():
    with pytest.raises(ValueError):
        Circle(0, 0)
    with pytest.raises(ValueError):
        Line(0, 0)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_reflection_properties(seed):
    rng = np.random.default_rng(seed)
    c = Circle(complex(*rng.standard_normal(2)), rng.uniform(0.2, 3))
    z = complex(*3 * rng.standard_normal(2))
    assert abs(reflect(c, reflect(c, z)) - z) < 1e-9 * max(1, abs(z))
    for t in rng.uniform(0, 2 * math.pi, 100):
        p = c.point(t)
        assert abs(reflect(c, p) - p) < 1e-9


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_image_circle_contains_images(seed):
    rng = np.random.default_rng(seed)
    m = random_map(rng, 1.0)
    c = Circle(complex(*rng.standard_normal(2)), rng.uniform(0.2, 2))
    img = image_circle(m, c)
    if isinstance(img, Line):
        return
    for t in rng.uniform(0, 2 * math.pi, 10):
        w = apply(m, c.point(t))
        assert abs(abs(w - img.centre) - img.radius) < 1e-9 * max(1, img.radius, abs(img.centre))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_reflection_pair_inverse(seed):
    rng = np.random.default_rng(seed)
    c1 = Circle(complex(*rng.standard_normal(2)), rng.uniform(0.2, 2))
    c2 = Circle(complex(*rng.standard_normal(2)), rng.uniform(0.2, 2))
    prod = reflections_to_mobius(c1, c2) @ reflections_to_mobius(c2, c1)
    assert prod.allclose(MobiusMap.identity(), 1e-9)
