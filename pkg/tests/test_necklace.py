import math

import numpy as np
import pytest

from kleinian import Circle, classify, fixed_points, tangency_classify
from kleinian.errors import NumericalError
from kleinian.necklace import SpiralSpec, atom_circles, necklace_circles, necklace_generators, refine_polygon

from conftest import OCTAGON, RECTANGLE

R2 = math.sqrt(2)
FIGURE_EIGHT = [0, 1 + 1j, 1 + R2 + 1j, 2 + R2, 1 + R2 - 1j, 1 - 1j, 0,
                -1 + 1j, -1 - R2 + 1j, -2 - R2, -1 - R2 - 1j, -1 - 1j]


def chain_residuals(circles):
    n = len(circles)
    return [abs(abs(circles[i].centre - circles[(i + 1) % n].centre)
                - circles[i].radius - circles[(i + 1) % n].radius) for i in range(n)]


def test_refine_keeps_good_polygons():
    square = [0, 1, 1 + 1j, 1j]
    assert refine_polygon(square) == [complex(z) for z in square]
    assert np.allclose(refine_polygon(OCTAGON), OCTAGON)


def test_refine_inserts_midpoints_on_thin_polygons():
    thin = [0, 10, 10 + 3j, 5 + 0.5j, 3j]
    out = refine_polygon(thin)
    assert len(out) > 5
    necklace_circles(out)  # passes the nearest-neighbour check


def test_figure_eight_crossing_vertex_once():
    out = refine_polygon(FIGURE_EIGHT)
    near_zero = {z for z in out if abs(z) < 1e-9}
    assert near_zero == {0}
    assert sum(z == 0 for z in out) == 2  # visited twice, no extra crossing inserted
    gens = necklace_generators(necklace_circles(out))
    assert all(classify(g) == "parabolic" for g in gens)


def test_refine_rejects_degenerate_input():
    with pytest.raises(ValueError):
        refine_polygon([0, 1, 0])
    with pytest.raises(ValueError):
        refine_polygon([0, 1, 1, 2j])


def test_octagon_circles():
    circles = necklace_circles(OCTAGON)
    assert len(circles) == 8
    assert all(c.radius == pytest.approx(math.sin(math.pi / 8), abs=1e-12) for c in circles)
    assert max(chain_residuals(circles)) < 1e-12


def test_rectangle_circles():
    circles = necklace_circles(RECTANGLE)
    assert len(circles) == 6
    assert all(c.radius == pytest.approx(0.5) for c in circles)


def test_collinear_triangle_gap_circles():
    circles = necklace_circles([0, 1, 3])
    radii = sorted(c.radius for c in circles if c.centre in (0, 1, 3))
    assert radii == [0.5, 0.5, 1.0]
    gap = circles[2]
    assert gap.centre == pytest.approx(1.75) and gap.radius == pytest.approx(0.25)
    # the closing edge 3 -> 0 is also longer than its two radii and gets a gap circle
    assert circles[-1].centre == pytest.approx(1.25) and circles[-1].radius == pytest.approx(0.75)


def test_necklace_properties_octagon_and_rectangle():
    for pts in (OCTAGON, RECTANGLE, refine_polygon(FIGURE_EIGHT)):
        circles = necklace_circles(pts)
        n = len(circles)
        assert max(chain_residuals(circles)) < 1e-12
        for i in range(n):
            for j in range(i + 2, n):
                if (i, j) == (0, n - 1):
                    continue
                assert tangency_classify(circles[i], circles[j]) != "overlapping"


def test_unrefined_polygon_rejected():
    with pytest.raises(ValueError):
        necklace_circles([0, 10, 10 + 3j, 5 + 0.5j, 3j])


def test_generators():
    gens = necklace_generators(necklace_circles(OCTAGON))
    assert len(gens) == 8 and all(classify(g) == "parabolic" for g in gens)
    circles = necklace_circles(RECTANGLE)
    for i, g in enumerate(necklace_generators(circles)):
        c1, c2 = circles[i], circles[(i + 1) % 6]
        touch = c1.centre + c1.radius * (c2.centre - c1.centre) / abs(c2.centre - c1.centre)
        assert fixed_points(g)[0] == pytest.approx(touch, abs=1e-9)
    with pytest.raises(ValueError):
        necklace_generators([Circle(0, 1), Circle(0, 2)])


def test_atom_small():
    assert atom_circles(SpiralSpec(n=0)) == []
    circles = atom_circles(SpiralSpec(n=25))
    # seed circle plus n steps each way, per spiral
    assert len(circles) == 2 * (2 * 25 + 1)
    for i, a in enumerate(circles):
        for b in circles[i + 1:]:
            assert tangency_classify(a, b, 1e-6) in ("disjoint", "tangent")


def test_atom_arms_tangent_and_refining():
    spec = SpiralSpec(n=40)
    circles = atom_circles(spec)
    arm = 2 * spec.n + 1
    for k in range(2):
        chain = circles[k * arm:(k + 1) * arm]
        res = [abs(abs(a.centre - b.centre) - a.radius - b.radius) for a, b in zip(chain, chain[1:])]
        assert max(res) < 1e-6
    radii = [min(c.radius for c in atom_circles(SpiralSpec(n=n))) for n in (10, 20, 40)]
    assert radii[0] > radii[1] > radii[2]


def test_atom_nudge_failure_names_step():
    with pytest.raises(NumericalError, match="step"):
        atom_circles(SpiralSpec(n=3, max_nudges=0))
