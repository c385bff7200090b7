"""Möbius transformations as determinant-one complex 2x2 matrices.

Points of the extended plane are plain ``complex`` values or the singleton
:data:`INF`.  Matrices ``M`` and ``-M`` represent the same map; everything
that classifies or measures a map is invariant under that sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NumericalError

CLASSIFY_TOL = 1e-9
SINGULAR_TOL = 1e-14
TAU_CLAMP = 1e6


class Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

ExtendedComplex = Union[complex, Infinity]


def is_inf(z) -> bool:
    return z is INF


def principal_sqrt(w: complex) -> complex:
    """Square root with the cut on the negative reals; on the cut, Im >= 0."""
    w = complex(w)
    # -0.0 + 0.0 == +0.0, which puts the cut on the upper side
    return cmath.sqrt(complex(w.real, w.imag + 0.0))


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        """Build from any 2x2 array-like, normalising the determinant to 1."""
        return normalize_det(m)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def __neg__(self) -> "MobiusMap":
        return MobiusMap(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "MobiusMap":
        return inverse(self)

    def allclose(self, other: "MobiusMap", tol: float = 1e-9) -> bool:
        """Equality in PSL(2,C): entrywise agreement up to a global sign."""
        x, y = self.matrix, other.matrix
        return bool(np.max(np.abs(x - y)) < tol or np.max(np.abs(x + y)) < tol)


def normalize_det(m) -> MobiusMap:
    """Divide a 2x2 complex matrix by the principal square root of its determinant."""
    if isinstance(m, MobiusMap):
        a, b, c, d = m.a, m.b, m.c, m.d
    else:
        arr = np.asarray(m, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
        a, b, c, d = (complex(v) for v in arr.ravel())
    det = a * d - b * c
    if abs(det) < SINGULAR_TOL:
        raise NumericalError("singular matrix")
    s = principal_sqrt(det)
    return MobiusMap(a / s, b / s, c / s, d / s)


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """The map z -> m1(m2(z)), i.e. the matrix product m1 @ m2."""
    prod = MobiusMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )
    return normalize_det(prod)


def inverse(m: MobiusMap) -> MobiusMap:
    # adjugate; exact inverse when det = 1
    return MobiusMap(m.d, -m.b, -m.c, m.a)


def apply(m: MobiusMap, z: ExtendedComplex) -> ExtendedComplex:
    if z is INF:
        if m.c == 0:
            return INF
        return m.a / m.c
    z = complex(z)
    den = m.c * z + m.d
    num = m.a * z + m.b
    if den == 0:
        return INF
    return num / den


def translation_length(m: MobiusMap) -> float:
    """Real translation length |2 log(|tr + sqrt(tr^2 - 4)| / 2)|.

    Uses the larger of |tr +- sqrt(tr^2 - 4)|, which is the same quantity
    (the two factors multiply to 4) without the cancellation.
    """
    return float(trace_translation_length(m.trace))


def trace_translation_length(tr):
    """Vectorised translation length as a function of the trace."""
    tr = np.asarray(tr, dtype=complex)
    s = np.sqrt(tr * tr - 4)
    big = np.maximum(np.abs(tr + s), np.abs(tr - s))
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = 2.0 * np.log(big / 2.0)
    tau = np.where(np.isfinite(tau), tau, TAU_CLAMP)
    return np.clip(tau, 0.0, TAU_CLAMP)


def classify(m: MobiusMap, tol: float = CLASSIFY_TOL) -> str:
    """One of ``identity``, ``parabolic``, ``elliptic``, ``loxodromic``."""
    dev_plus = max(abs(m.a - 1), abs(m.b), abs(m.c), abs(m.d - 1))
    dev_minus = max(abs(m.a + 1), abs(m.b), abs(m.c), abs(m.d + 1))
    if min(dev_plus, dev_minus) < tol:
        return "identity"
    t2 = m.trace * m.trace
    if abs(t2 - 4) < tol:
        return "parabolic"
    if abs(t2.imag) < tol and -tol <= t2.real < 4:
        return "elliptic"
    return "loxodromic"


def fixed_points(m: MobiusMap, tol: float = CLASSIFY_TOL) -> tuple:
    """Roots of c z^2 + (d - a) z - b = 0 on the extended plane.

    One point for parabolics, two otherwise.
    """
    kind = classify(m, tol)
    if kind == "identity":
        raise ValueError("fixed points undefined")
    a, b, c, d = m.a, m.b, m.c, m.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-15 * scale:
        if kind == "parabolic":
            return (INF,)
        return (b / (d - a), INF)
    if kind == "parabolic":
        return ((a - d) / (2 * c),)
    s = principal_sqrt((a + d) ** 2 - 4)
    return ((a - d + s) / (2 * c), (a - d - s) / (2 * c))


def attracting_fixed_point(m: MobiusMap, tol: float = CLASSIFY_TOL) -> ExtendedComplex:
    """The attracting fixed point of a loxodromic, or the fixed point of a parabolic.

    For elliptics the first fixed point is returned.
    """
    pts = fixed_points(m, tol)
    if len(pts) == 1 or classify(m, tol) != "loxodromic":
        return pts[0]
    best, best_rate = pts[0], math.inf
    for p in pts:
        # multiplier at p: |m'(p)| = 1/|cp + d|^2, or |d/a|^2 at infinity
        if p is INF:
            rate = abs(m.d / m.a) ** 2 if m.a != 0 else math.inf
        else:
            rate = 1.0 / abs(m.c * p + m.d) ** 2
        if rate < best_rate:
            best, best_rate = p, rate
    return best


def isometric_circle(m: MobiusMap):
    """The circle |cz + d| = 1, centre -d/c and radius 1/|c|."""
    from .circles import Circle

    if m.c == 0:
        raise ValueError("isometric circle undefined (fixes ∞)")
    return Circle(-m.d / m.c, 1.0 / abs(m.c))


def as_array(maps) -> np.ndarray:
    """Stack MobiusMaps into an array of shape (n, 2, 2)."""
    return np.array([m.matrix for m in maps], dtype=complex).reshape(-1, 2, 2)


def adjugate(arr: np.ndarray) -> np.ndarray:
    """Batched inverse of determinant-one matrices of shape (..., 2, 2)."""
    out = np.empty_like(arr)
    out[..., 0, 0] = arr[..., 1, 1]
    out[..., 0, 1] = -arr[..., 0, 1]
    out[..., 1, 0] = -arr[..., 1, 0]
    out[..., 1, 1] = arr[..., 0, 0]
    return out
