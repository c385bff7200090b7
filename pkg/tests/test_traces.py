import math

import numpy as np
import pytest

from kleinian.errors import ConvergenceError
from kleinian.traces import (Slope, cone_path, farey_trace, farey_word, newton_solve_trace,
                             polish_system, real_trace_points, substitute, system_residual)
from kleinian.verify import KNOT85_EXACT, KNOT85_ROUNDED, KNOT85_WORDS
from kleinian.words import parse_word

XY = ("X", "Y")
PQM = ("P", "Q", "M")


def test_farey_word_examples():
    assert farey_word(Slope(3, 5)).format(XY) == "X Y⁻¹ X⁻¹ Y X Y X⁻¹ Y⁻¹ X Y"
    assert farey_word(Slope(1, 2)).format(XY) == "X Y X Y"
    with pytest.raises(ValueError):
        Slope(2, 4)
    assert Slope.parse(" 3/5 ") == Slope(3, 5)


def test_farey_word_shape():
    for q in range(1, 51):
        for p in range(0, q + 1):
            if math.gcd(p, q) != 1:
                continue
            w = farey_word(Slope(p, q))
            assert len(w) == 2 * q
            assert [g for g, _ in w.letters] == [0, 1] * q
            assert w.letters[-1][1] == 1


def test_farey_trace_examples():
    for z in (0.3, -4, 1 + 2j):
        assert farey_trace(Slope(1, 2), z) == pytest.approx((z + 2) ** 2 - 2)
    assert abs(abs(farey_trace(Slope(3, 5), -0.5 + 0.8660j)) - 2) < 1e-3
    assert abs(farey_trace(Slope(3, 5), -0.7733 + 1.4677j) + 2) < 1e-3


def test_farey_trace_is_degree_q_polynomial():
    s = Slope(3, 5)
    nodes = 0.3 + 0.1j + 0.25 * np.arange(s.q + 2)
    vals = np.asarray(farey_trace(s, nodes))
    diff = np.diff(vals, n=s.q + 1)
    assert abs(diff[0]) < 1e-6 * np.max(np.abs(vals))
    assert abs(np.diff(vals, n=s.q)[0]) > 1e-3


def test_newton_examples():
    f = lambda z: farey_trace(Slope(1, 2), z)
    assert newton_solve_trace(f, 2, -3.5) == pytest.approx(-4, abs=1e-12)
    assert newton_solve_trace(f, 2, 0.5) == pytest.approx(0, abs=1e-12)
    z0 = 0.7 + 0.2j
    z = newton_solve_trace(f, f(z0), z0)
    assert z == z0
    assert newton_solve_trace(f, 2, z) == newton_solve_trace(f, 2, newton_solve_trace(f, 2, z))
    with pytest.raises(ConvergenceError) as err:
        newton_solve_trace(lambda z: z * z + 1, 0, 0.0)
    assert err.value.trail


def test_real_trace_points_are_real():
    s = Slope(3, 5)
    pts = real_trace_points(s, 20.0)
    assert pts
    for z in pts:
        assert abs(abs(z) - 20) < 1e-9
        v = farey_trace(s, z)
        assert abs(v.imag) < 1e-9 * max(1, abs(v))


def test_cone_path_3_5():
    path = cone_path(Slope(3, 5), 20, 30, 30)
    hyp, ell = path.stage("hyperbolic"), path.stage("elliptic")
    assert len(hyp) == 30 and len(ell) == 30
    assert abs(hyp[-1].z - (-0.7733 + 1.4677j)) < 1e-2
    assert abs(path.endpoint - (-0.5 + 0.8660j)) < 1e-2
    assert max(s.residual for s in path.steps) < 1e-10
    assert all(s.z.imag > 0 for s in hyp)
    for anchor in (-0.7151 + 1.3233j, -0.5768 + 1.0117j):
        assert min(abs(s.z - anchor) for s in ell) < 1e-2
    header, *rows = path.to_csv().splitlines()
    assert header == "stage,theta_or_t,target_trace,re,im,residual" and len(rows) == 61


def test_polish_exact_solution():
    words = [parse_word(w, PQM) for w in KNOT85_WORDS]
    assert system_residual(words, "compression_body", [4] * 3, KNOT85_EXACT) < 1e-10
    sol = polish_system(words, "compression_body", [4] * 3, KNOT85_EXACT)
    assert max(abs(a - b) for a, b in zip(sol, KNOT85_EXACT)) < 1e-10


def test_polish_rounded_solution():
    words = [parse_word(w, PQM) for w in KNOT85_WORDS]
    sol = polish_system(words, "compression_body", [4] * 3, KNOT85_ROUNDED)
    assert system_residual(words, "compression_body", [4] * 3, sol) < 1e-10
    assert max(abs(a - b) for a, b in zip(sol, KNOT85_ROUNDED)) < 1e-3


def test_substitute_kills_generators():
    w = parse_word("M M M P⁻¹ P⁻¹ Q P⁻¹", PQM)
    assert substitute(w, {0: 0, 1: None, 2: 1}).format(XY) == "Y Y Y X⁻¹ X⁻¹ X⁻¹"


def test_polish_errors():
    words = [parse_word(w, PQM) for w in KNOT85_WORDS]
    with pytest.raises(ValueError):
        polish_system(words[:2], "compression_body", [4] * 3, KNOT85_EXACT)
    with pytest.raises(ConvergenceError):
        polish_system(words, "compression_body", [4] * 3, (0, 0, 0), max_iter=3)
