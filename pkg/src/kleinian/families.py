"""Parameterised generator families and their trace identities."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .mobius import MobiusMap, normalize_det, principal_sqrt

GENERATOR_NAMES = {
    "compression_body": ("P", "Q", "M"),
    "grandma": ("X", "Y"),
    "riley": ("X", "Y"),
    "pendulum": ("M1", "M2", "M3"),
}

# number of complex parameters each template consumes
TEMPLATE_ARITY = {"compression_body": 3, "grandma": 3, "riley": 1, "pendulum": 2}


@dataclass(frozen=True)
class CompressionBodyParams:
    alpha: complex
    beta: complex
    lam: complex = 1


@dataclass(frozen=True)
class GrandmaParams:
    tx: complex
    ty: complex
    txy: complex

    @property
    def v(self) -> complex:
        return principal_sqrt(4 - complex(self.txy) ** 2)


def compression_body(alpha, beta=None, lam=1) -> list[MobiusMap]:
    """[P, Q, M] for G(alpha, beta, lambda).

    Accepts either three numbers or a single :class:`CompressionBodyParams`.
    """
    if isinstance(alpha, CompressionBodyParams):
        alpha, beta, lam = alpha.alpha, alpha.beta, alpha.lam
    alpha, beta, lam = complex(alpha), complex(beta), complex(lam)
    return [
        MobiusMap(1 + 0j, alpha, 0j, 1 + 0j),
        MobiusMap(1 + 0j, beta, 0j, 1 + 0j),
        MobiusMap(lam, lam * lam - 1, 1 + 0j, lam),
    ]


def delta_family(delta: float) -> CompressionBodyParams:
    """Lattice pattern with hexagon dihedral angle delta: alpha = 2 + 2 e^{i delta}, beta = conj(alpha)."""
    alpha = 2 + 2 * math.cos(delta) + 2j * math.sin(delta)
    return CompressionBodyParams(alpha, alpha.conjugate(), 1)


def grandma(tx, ty=None, txy=None) -> list[MobiusMap]:
    """Genus-2 Schottky normalisation with tr X = tx, tr Y = ty, tr XY = txy."""
    if isinstance(tx, GrandmaParams):
        tx, ty, txy = tx.tx, tx.ty, tx.txy
    tx, ty, txy = complex(tx), complex(ty), complex(txy)
    v = principal_sqrt(4 - txy * txy)
    x = MobiusMap((tx + 1j * txy) / 2, -(tx + v) / 2, -(tx - v) / 2, (tx - 1j * txy) / 2)
    y = MobiusMap(ty / 2 - 1j, ty / 2, ty / 2, ty / 2 + 1j)
    return [x, y]


def riley(z) -> list[MobiusMap]:
    """Two parabolics X = [[1,1],[0,1]], Y = [[1,0],[z,1]]; tr XY = 2 + z."""
    return [MobiusMap(1 + 0j, 1 + 0j, 0j, 1 + 0j), MobiusMap(1 + 0j, 0j, complex(z), 1 + 0j)]


def pendulum_raw(x: float, y: float) -> list[np.ndarray]:
    """Un-normalised reflection products for the double pendulum with angles pi x, pi y."""
    ex = cmath.exp(1j * math.pi * x)
    ey = cmath.exp(1j * math.pi * y)
    m1 = np.array([[-ex, 2 * ex * ex], [-2, 3 * ex]], dtype=complex)
    m2 = np.array(
        [[-4 * ex - ey, 8 * ex * ex + 8 * ex * ey + 2 * ey * ey], [-2, 4 * ex + 3 * ey]],
        dtype=complex,
    )
    m3 = np.array(
        [
            [-7 * ex * ey - 4 * ey * ey - 4 * ex * ex, 2 * ex * ex * ey + 2 * ex * ey * ey],
            [-2 * ex - 2 * ey, ex * ey],
        ],
        dtype=complex,
    )
    return [m1, m2, m3]


def pendulum(x: float, y: float) -> list[MobiusMap]:
    return [normalize_det(m) for m in pendulum_raw(x, y)]


def pendulum_centres(x: float, y: float) -> tuple[complex, complex, complex]:
    """Joint positions of the pendulum whose unit circles the generators pair."""
    ex = cmath.exp(1j * math.pi * x)
    ey = cmath.exp(1j * math.pi * y)
    return 0j, -2 * ex, -2 * ex - 2 * ey


def instantiate(template: str, params: Sequence[complex]) -> list[MobiusMap]:
    """Generators of ``template`` at a point of its parameter space."""
    if template not in TEMPLATE_ARITY:
        raise ValueError(f"unknown template {template!r}")
    arity = TEMPLATE_ARITY[template]
    if len(params) != arity:
        raise ValueError(f"template {template} takes {arity} parameters, got {len(params)}")
    if template == "compression_body":
        return compression_body(*params)
    if template == "grandma":
        return grandma(*params)
    if template == "riley":
        return riley(params[0])
    x, y = (complex(p) for p in params)
    if abs(x.imag) > 1e-12 or abs(y.imag) > 1e-12:
        raise ValueError("pendulum angles must be real")
    return pendulum(x.real, y.real)


@dataclass(frozen=True)
class FamilySpec:
    """A matrix template together with an affine parameter path t -> p0 + t (p1 - p0).

    For ``explicit`` families pass ``path``, a callable from t to a list of
    MobiusMaps, and ``generators`` naming them.  ``path`` also overrides the
    affine map for the named templates (a custom tabulated path).
    """

    template: str
    p0: tuple = ()
    p1: tuple | None = None
    path: Callable | None = field(default=None, compare=False)
    generators: tuple = ()

    def __post_init__(self):
        if self.template == "explicit":
            if self.path is None:
                raise ValueError("explicit family needs a path callable")
            return
        if self.template not in TEMPLATE_ARITY:
            raise ValueError(f"unknown template {self.template!r}")
        arity = TEMPLATE_ARITY[self.template]
        p0 = tuple(complex(p) for p in self.p0)
        p1 = p0 if self.p1 is None else tuple(complex(p) for p in self.p1)
        if len(p0) != arity or len(p1) != arity:
            raise ValueError(
                f"template {self.template} expects {arity} parameters per endpoint, "
                f"got {len(p0)} and {len(p1)}"
            )
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    @property
    def names(self) -> tuple:
        if self.generators:
            return tuple(self.generators)
        return GENERATOR_NAMES[self.template]

    @property
    def n_generators(self) -> int:
        return len(self.names)

    def params_at(self, t) -> tuple:
        return tuple(self.params_array(np.array([t]))[0])

    def params_array(self, ts: np.ndarray) -> np.ndarray:
        """Vectorised parameter evaluation, shape (len(ts), arity).

        The pendulum template reads t = x + i y: its angles are
        x = p0[0] + Re(t) (p1[0] - p0[0]) and y = p0[1] + Im(t) (p1[1] - p0[1]).
        """
        ts = np.asarray(ts, dtype=complex).reshape(-1, 1)
        p0 = np.array(self.p0, dtype=complex)
        p1 = np.array(self.p1, dtype=complex)
        if self.template == "pendulum":
            lin = np.concatenate([ts.real, ts.imag], axis=1)
            return (p0.real + lin * (p1.real - p0.real)).astype(complex)
        return p0 + ts * (p1 - p0)


def affine_path(spec: FamilySpec, t) -> list[MobiusMap]:
    """Generators of the family at parameter t."""
    t = complex(t)
    if not (math.isfinite(t.real) and math.isfinite(t.imag)):
        raise ValueError("path parameter must be finite")
    if spec.path is not None:
        return list(spec.path(t))
    return instantiate(spec.template, spec.params_at(t))


def batch_generators(spec: FamilySpec, ts) -> tuple[np.ndarray, np.ndarray]:
    """Generator matrices at many parameter values.

    Returns ``(mats, bad)`` where ``mats`` has shape (n_gens, len(ts), 2, 2)
    and ``bad`` flags points at which some generator is singular.
    """
    ts = np.asarray(ts, dtype=complex).ravel()
    n = ts.size
    if spec.path is not None:
        mats = np.empty((spec.n_generators, n, 2, 2), dtype=complex)
        bad = np.zeros(n, dtype=bool)
        for k, t in enumerate(ts):
            try:
                gens = spec.path(t)
            except ArithmeticError:
                bad[k] = True
                mats[:, k] = np.eye(2)
                continue
            for g, m in enumerate(gens):
                mats[g, k] = m.matrix
        return mats, bad
    params = spec.params_array(ts)
    one = np.ones(n, dtype=complex)
    zero = np.zeros(n, dtype=complex)
    if spec.template == "compression_body":
        a, b, lam = params.T
        raw = [
            [[one, a], [zero, one]],
            [[one, b], [zero, one]],
            [[lam, lam * lam - 1], [one, lam]],
        ]
    elif spec.template == "riley":
        z = params[:, 0]
        raw = [[[one, one], [zero, one]], [[one, zero], [z, one]]]
    elif spec.template == "grandma":
        tx, ty, txy = params.T
        v = np.sqrt(4 - txy * txy)
        raw = [
            [[(tx + 1j * txy) / 2, -(tx + v) / 2], [-(tx - v) / 2, (tx - 1j * txy) / 2]],
            [[ty / 2 - 1j, ty / 2], [ty / 2, ty / 2 + 1j]],
        ]
    elif spec.template == "pendulum":
        x, y = params.real.T
        ex = np.exp(1j * np.pi * x)
        ey = np.exp(1j * np.pi * y)
        raw = [
            [[-ex, 2 * ex * ex], [-2 * one, 3 * ex]],
            [[-4 * ex - ey, 8 * ex * ex + 8 * ex * ey + 2 * ey * ey], [-2 * one, 4 * ex + 3 * ey]],
            [[-7 * ex * ey - 4 * ey * ey - 4 * ex * ex, 2 * ex * ex * ey + 2 * ex * ey * ey],
             [-2 * ex - 2 * ey, ex * ey]],
        ]
    else:
        raise ValueError(f"unknown template {spec.template!r}")
    mats = np.moveaxis(np.array(raw, dtype=complex), (1, 2), (-2, -1))
    det = mats[..., 0, 0] * mats[..., 1, 1] - mats[..., 0, 1] * mats[..., 1, 0]
    bad = np.any(np.abs(det) < 1e-14, axis=0)
    det = np.where(np.abs(det) < 1e-14, 1.0, det)
    # principal root, upper side of the cut
    root = np.sqrt(det + 0.0j + 0.0)
    mats = mats / root[..., None, None]
    return mats, bad


@dataclass
class CPReport:
    """Residuals of the lattice circle-pattern conditions; a report, not a verdict."""

    cp1_residuals: tuple[float, float]
    cp2_violations: list[tuple[int, int, int, int, float]]
    cp3_residual: float
    star_residual: float

    @property
    def max_residual(self) -> float:
        return max(*self.cp1_residuals, self.cp3_residual, abs(self.star_residual))

    def ok(self, tol: float = 1e-9) -> bool:
        return self.max_residual < tol and not self.cp2_violations


def check_cp_conditions(p: CompressionBodyParams, bound: int = 3, tol: float = 1e-9) -> CPReport:
    """Check the paired-circle pattern of G(alpha, beta, 1) against its lattice.

    C1, C2 are the unit circles at -1 and +1.  CP2 violations are listed as
    (m, n, i, j, overlap depth) for translates m alpha + n beta + C_j that
    cross C_i without coinciding or touching.
    """
    if abs(complex(p.lam) - 1) > 1e-12:
        raise ValueError("pattern conditions are stated for lambda = 1")
    alpha, beta = complex(p.alpha), complex(p.beta)
    cp1 = (abs(abs(alpha - 2) - 2), abs(abs(beta - 2) - 2))
    centres = (-1 + 0j, 1 + 0j)
    violations = []
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            shift = m * alpha + n * beta
            for i, ci in enumerate(centres):
                for j, cj in enumerate(centres):
                    d = abs(ci - (cj + shift))
                    if d <= tol or abs(d - 2) <= tol or d > 2:
                        continue
                    violations.append((m, n, i + 1, j + 1, 2 - d))
    cp3 = min(abs(alpha - beta.conjugate()), abs(alpha + beta.conjugate()))
    star = abs(alpha) ** 2 - 4 * alpha.real
    return CPReport(cp1, violations, cp3, star)
