"""Necklace (bead) groups from polygons, and the spiral atom-group approximation."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .circles import Circle, reflections_to_mobius, tangency_classify
from .errors import NumericalError
from .mobius import MobiusMap

DISTINCT_TOL = 1e-12
MAX_REFINE_PASSES = 10_000


def _as_points(points) -> list[complex]:
    return [complex(p) for p in points]


def _segment_intersection(p1, p2, q1, q2, tol=DISTINCT_TOL):
    """Parameters (s, t) of the crossing of [p1,p2] and [q1,q2], or None."""
    r, s = p2 - p1, q2 - q1
    denom = (r.conjugate() * s).imag
    if abs(denom) <= tol * abs(r) * abs(s):
        return None  # parallel or collinear
    diff = q1 - p1
    t_p = (diff.conjugate() * s).imag / denom
    t_q = (diff.conjugate() * r).imag / denom
    if -tol <= t_p <= 1 + tol and -tol <= t_q <= 1 + tol:
        return min(max(t_p, 0.0), 1.0), min(max(t_q, 0.0), 1.0)
    return None


def _insert_crossings(pts: list[complex]) -> list[complex]:
    n = len(pts)
    inserts: list[list[tuple[float, complex]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            a0, a1 = pts[i], pts[(i + 1) % n]
            b0, b1 = pts[j], pts[(j + 1) % n]
            hit = _segment_intersection(a0, a1, b0, b1)
            if hit is None:
                continue
            x = a0 + hit[0] * (a1 - a0)
            if min(abs(x - v) for v in (a0, a1, b0, b1)) <= DISTINCT_TOL * max(1.0, abs(x)):
                continue  # crossing at an existing vertex
            inserts[i].append((hit[0], x))
            inserts[j].append((hit[1], b0 + hit[1] * (b1 - b0)))
    out = []
    for i in range(n):
        out.append(pts[i])
        seen: list[complex] = []
        for _, x in sorted(inserts[i], key=lambda e: e[0]):
            if any(abs(x - y) <= DISTINCT_TOL for y in seen):
                continue
            seen.append(x)
            out.append(x)
    return out


def _snap(pts: list[complex]) -> list[complex]:
    # vertices visited more than once must be bit-identical so they compare equal
    canon: list[complex] = []
    out = []
    for p in pts:
        for q in canon:
            if abs(p - q) <= DISTINCT_TOL * max(1.0, abs(p)):
                out.append(q)
                break
        else:
            canon.append(p)
            out.append(p)
    return out


def _neighbour_violation(pts: list[complex], tol: float):
    """First (i, k) such that edge i -> k must be split, or None.

    A vertex passes when no non-neighbour is strictly closer than its farthest
    edge-neighbour.  Repeated vertices pool the neighbours of every visit.
    """
    n = len(pts)
    nbrs: dict[complex, set[complex]] = {}
    for i, p in enumerate(pts):
        nbrs.setdefault(p, set()).update({pts[i - 1], pts[(i + 1) % n]})
    distinct = list(nbrs)
    for i, p in enumerate(pts):
        far = max(abs(p - q) for q in nbrs[p])
        for q in distinct:
            if q == p or q in nbrs[p]:
                continue
            if abs(p - q) < far - tol * far:
                # split the longer of the two edges at this visit
                before, after = pts[i - 1], pts[(i + 1) % n]
                if abs(p - before) >= abs(p - after):
                    return (i - 1) % n, i
                return i, (i + 1) % n
    return None


def refine_polygon(points) -> list[complex]:
    """Add crossing vertices, then edge midpoints until nearest vertices are edge-neighbours."""
    pts = _as_points(points)
    if len({(round(p.real, 12), round(p.imag, 12)) for p in pts}) < 3:
        raise ValueError("polygon needs at least 3 distinct points")
    n = len(pts)
    for i in range(n):
        if abs(pts[i] - pts[(i + 1) % n]) <= DISTINCT_TOL:
            raise ValueError(f"consecutive vertices {i} and {(i + 1) % n} coincide")
    pts = _snap(_insert_crossings(pts))
    for _ in range(MAX_REFINE_PASSES):
        bad = _neighbour_violation(pts, 1e-12)
        if bad is None:
            return pts
        i, k = bad
        mid = (pts[i] + pts[k]) / 2
        pts.insert(i + 1 if k == i + 1 else len(pts), mid)
    raise NumericalError("polygon refinement did not terminate")


def necklace_circles(points) -> list[Circle]:
    """Vertex circles of half the shorter incident edge, plus gap circles on loose edges.

    The output is a cyclic chain: each gap circle sits between the two
    vertex circles it joins.
    """
    pts = _as_points(points)
    if _neighbour_violation(pts, 1e-12) is not None:
        raise ValueError("polygon is not refined: a non-neighbour vertex is closer than a neighbour")
    n = len(pts)
    radii = [0.5 * min(abs(pts[i - 1] - pts[i]), abs(pts[i] - pts[(i + 1) % n])) for i in range(n)]
    out = []
    for i in range(n):
        j = (i + 1) % n
        out.append(Circle(pts[i], radii[i]))
        edge = pts[j] - pts[i]
        u = edge / abs(edge)
        x = pts[i] + radii[i] * u
        y = pts[j] - radii[j] * u
        if abs(x - y) > 1e-9 * abs(edge):
            out.append(Circle((x + y) / 2, abs(x - y) / 2))
    return out


def necklace_generators(circles) -> list[MobiusMap]:
    """Products of reflections in cyclically consecutive circles; all parabolic."""
    n = len(circles)
    gens = []
    for i in range(n):
        c1, c2 = circles[i], circles[(i + 1) % n]
        scale = max(c1.radius, c2.radius)
        if tangency_classify(c1, c2, 1e-9 * scale) != "tangent":
            raise ValueError(f"circles {i} and {(i + 1) % n} are not tangent")
        gens.append(reflections_to_mobius(c1, c2))
    return gens


@dataclass(frozen=True)
class SpiralSpec:
    n: int = 25
    growth: float = 0.8
    inner: float = 0.5
    amplitude: float = 3.0
    start_angles: tuple = (math.pi, 0.0)
    guess_factor: float = 2.2
    band: tuple = (0.8, 1.2)
    max_nudges: int = 64

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not self.guess_factor > 2:
            raise ValueError("guess factor must exceed 2")
        lo, hi = self.band
        if not 0 < lo < 1 < hi:
            raise ValueError("nudge band must bracket 1")

    def sigma(self, arm: int, theta: float) -> float:
        """Polar radius of spiral ``arm`` (0 or 1) at angle theta."""
        if arm == 1:
            theta = math.pi + theta
        return self.inner + self.amplitude / (2 + 2 * math.exp(-self.growth * theta))

    @property
    def annulus(self) -> tuple[float, float]:
        """Inner and outer limiting radii of the spirals."""
        return self.inner, self.inner + self.amplitude / 2


def _r_guess(spec: SpiralSpec, arm: int, theta: float) -> float:
    other = 1 - arm
    s = spec.sigma(arm, theta)
    return min(
        abs(spec.sigma(other, theta - 2 * math.pi) - s),
        abs(spec.sigma(other, theta + 2 * math.pi) - s),
        abs(spec.sigma(other, theta) - s),
    ) / spec.guess_factor


def _atom_arm(spec: SpiralSpec, arm: int) -> list[Circle]:
    theta0 = spec.start_angles[arm]
    c0 = spec.sigma(arm, theta0) * complex(math.cos(theta0), math.sin(theta0))
    queue = deque([(theta0, _r_guess(spec, arm, theta0), c0)])
    lo, hi = spec.band
    step = 0
    for delta in [1] * spec.n + [-1] * spec.n:
        step += 1
        t_prev, r_prev, c_prev = queue[0] if delta == -1 else queue[-1]
        r_target = _r_guess(spec, arm, t_prev)
        dtheta = -delta * math.atan(r_target / spec.sigma(arm, t_prev))
        r, passes = 0.0, 0
        while not lo <= abs(r / r_target) <= hi:
            if passes >= spec.max_nudges:
                raise NumericalError(f"atom spiral {arm + 1}: nudging failed at step {step}")
            dtheta *= hi if r < r_target else lo
            t = t_prev + 2 * dtheta
            c = spec.sigma(arm, t) * complex(math.cos(t), math.sin(t))
            r = abs(abs(c_prev - c) - r_prev)
            passes += 1
        entry = (t_prev + 2 * dtheta, r, c)
        if delta == -1:
            queue.appendleft(entry)
        else:
            queue.append(entry)
    return [Circle(c, r) for _, r, c in queue]


def atom_circles(spec: SpiralSpec) -> list[Circle]:
    """Circles along both spirals, spiral 1 first, each in queue order.

    Each spiral gets its seed circle plus n circles in each direction.
    """
    if spec.n == 0:
        return []
    return _atom_arm(spec, 0) + _atom_arm(spec, 1)
