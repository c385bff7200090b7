"""Circles and lines on the extended plane, inversion, and tangency tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .mobius import INF, MobiusMap, normalize_det

TANGENCY_TOL = 1e-9


@dataclass(frozen=True)
class Circle:
    centre: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")
        object.__setattr__(self, "centre", complex(self.centre))
        object.__setattr__(self, "radius", float(self.radius))

    def point(self, angle: float) -> complex:
        return self.centre + self.radius * complex(math.cos(angle), math.sin(angle))

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        """Whether z lies in the closed disc, within ``tol``."""
        return abs(z - self.centre) <= self.radius + tol


@dataclass(frozen=True)
class Line:
    """The line through ``point`` with unit ``direction``; a circle through infinity."""

    point: complex
    direction: complex

    def __post_init__(self):
        u = complex(self.direction)
        if abs(u) == 0:
            raise ValueError("line direction must be nonzero")
        object.__setattr__(self, "point", complex(self.point))
        object.__setattr__(self, "direction", u / abs(u))

    def point_at(self, s: float) -> complex:
        return self.point + s * self.direction


Curve = Union[Circle, Line]


def reflect(c: Curve, z):
    """Inversion z -> r^2 / (conj(z) - conj(w)) + w, or mirror reflection in a line."""
    if isinstance(c, Line):
        if z is INF:
            return INF
        u2 = c.direction * c.direction
        return c.point + u2 * (complex(z) - c.point).conjugate()
    if z is INF:
        return c.centre
    z = complex(z)
    if z == c.centre:
        return INF
    return c.radius**2 / (z - c.centre).conjugate() + c.centre


def _anti_matrix(c: Curve) -> np.ndarray:
    # reflect(c, z) = A(conj z) as a linear fractional map
    if isinstance(c, Line):
        u2 = c.direction * c.direction
        return np.array([[u2, c.point - u2 * c.point.conjugate()], [0, 1]], dtype=complex)
    w, r = c.centre, c.radius
    return np.array([[w, r * r - abs(w) ** 2], [1, -w.conjugate()]], dtype=complex)


def reflections_to_mobius(c1: Curve, c2: Curve) -> MobiusMap:
    """The holomorphic map reflect(c1, reflect(c2, z))."""
    return normalize_det(_anti_matrix(c1) @ np.conj(_anti_matrix(c2)))


def _hermitian(c: Curve) -> np.ndarray:
    # points z of c satisfy [conj z, 1] H [z, 1]^T = 0
    if isinstance(c, Line):
        n = 1j * c.direction
        return np.array([[0, n], [n.conjugate(), -2 * (n.conjugate() * c.point).real]], dtype=complex)
    w, r = c.centre, c.radius
    return np.array([[1, -w], [-w.conjugate(), abs(w) ** 2 - r * r]], dtype=complex)


def _from_hermitian(h: np.ndarray) -> Curve:
    scale = np.max(np.abs(h))
    h = h / scale
    if abs(h[0, 0]) < 1e-12:
        n = h[0, 1]
        return Line(-h[1, 1].real * n / (2 * abs(n) ** 2), 1j * n)
    h = h / h[0, 0].real
    w = -h[0, 1]
    r2 = abs(w) ** 2 - h[1, 1].real
    return Circle(w, math.sqrt(max(r2, 0.0)))


def image_circle(m: MobiusMap, c: Curve) -> Curve:
    """Image of a circle or line under m; may be a line."""
    if isinstance(c, Circle) and m.c == 0:
        # affine: z -> (a z + b) / d
        k = m.a / m.d
        return Circle(k * c.centre + m.b / m.d, abs(k) * c.radius)
    inv = np.array([[m.d, -m.b], [-m.c, m.a]], dtype=complex)
    h = inv.conj().T @ _hermitian(c) @ inv
    return _from_hermitian(h)


def tangency_classify(c1: Curve, c2: Curve, tol: float = TANGENCY_TOL) -> str:
    """One of ``equal``, ``tangent``, ``disjoint``, ``nested_disjoint``, ``overlapping``.

    ``tangent`` covers internal and external tangency; parallel lines are
    tangent at infinity.
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    if isinstance(c1, Line) and isinstance(c2, Line):
        cross = (c1.direction.conjugate() * c2.direction).imag
        if abs(cross) > tol:
            return "overlapping"
        offset = (c1.direction.conjugate() * (c2.point - c1.point)).imag
        return "equal" if abs(offset) <= tol else "tangent"
    if isinstance(c1, Line) or isinstance(c2, Line):
        line, circ = (c1, c2) if isinstance(c1, Line) else (c2, c1)
        dist = abs((line.direction.conjugate() * (circ.centre - line.point)).imag)
        if abs(dist - circ.radius) <= tol:
            return "tangent"
        return "disjoint" if dist > circ.radius else "overlapping"
    d = abs(c1.centre - c2.centre)
    rs, rd = c1.radius + c2.radius, abs(c1.radius - c2.radius)
    if d <= tol and rd <= tol:
        return "equal"
    if abs(d - rs) <= tol or abs(d - rd) <= tol:
        return "tangent"
    if d > rs:
        return "disjoint"
    if d < rd:
        return "nested_disjoint"
    return "overlapping"
