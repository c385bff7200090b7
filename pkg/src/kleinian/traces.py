"""Farey words in the Riley slice, Newton continuation of their traces,
and Newton polishing of parabolic-locus systems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, NumericalError
from .families import instantiate
from .mobius import MobiusMap
from .words import FREE, Word, evaluate, word_traces

NEWTON_TOL = 1e-12
PATH_TOL = 1e-10
SCAN_SAMPLES = 4096


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or not 0 <= self.p <= self.q:
            raise ValueError(f"slope {self.p}/{self.q} must satisfy 0 <= p <= q, q >= 1")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, text: str) -> "Slope":
        p, _, q = text.partition("/")
        return cls(int(p), int(q or 1))

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def farey_word(s: Slope) -> Word:
    """Alternating X/Y word of length 2q with signs (-1)^(floor(ip/q) - floor(i/q))."""
    if not isinstance(s, Slope):
        s = Slope(*s)
    letters = []
    for i in range(1, 2 * s.q + 1):
        sign = -1 if ((i * s.p) // s.q - i // s.q) % 2 else 1
        letters.append((0 if i % 2 else 1, sign))
    w = Word(tuple(letters), FREE)
    if len(w) != 2 * s.q:
        raise NumericalError(f"Farey word of {s} is not reduced")
    return w


def _riley_stack(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    one, zero = np.ones_like(z), np.zeros_like(z)
    raw = np.array([[[one, one], [zero, one]], [[one, zero], [z, one]]])
    return np.moveaxis(raw, (1, 2), (-2, -1))


def farey_trace(s: Slope, z):
    """tr W_{p/q}(z) in the Riley normalisation; vectorised over z."""
    if not isinstance(s, Slope):
        s = Slope(*s)
    w = farey_word(s)
    arr = np.asarray(z, dtype=complex)
    tr = word_traces([w], _riley_stack(arr))[0]
    if arr.ndim == 0:
        return complex(tr[0])
    return tr.reshape(arr.shape)


def newton_solve_trace(f: Callable[[complex], complex], target: complex, guess: complex,
                       tol: float = NEWTON_TOL, max_iter: int = 100) -> complex:
    """Solve f(z) = target by Newton's method with a central-difference derivative.

    Converges when |f(z) - target| < tol * max(1, |target|).
    """
    z = complex(guess)
    target = complex(target)
    gate = tol * max(1.0, abs(target))
    trail = []
    for _ in range(max_iter + 1):
        r = f(z) - target
        trail.append((z, abs(r)))
        if abs(r) < gate:
            return z
        h = 1e-7 * max(1.0, abs(z))
        deriv = (f(z + h) - f(z - h)) / (2 * h)
        if not abs(deriv) >= 1e-14:
            raise ConvergenceError(f"derivative vanished at z = {z}", trail)
        z = z - r / deriv
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ConvergenceError("Newton iterate diverged", trail)
    raise ConvergenceError(
        f"Newton did not reach |f - target| < {gate:.3g} in {max_iter} steps", trail
    )


@dataclass
class PathStep:
    stage: str
    param: float
    target: float
    z: complex
    residual: float


@dataclass
class PathTrace:
    slope: Slope
    steps: list = field(default_factory=list)

    def stage(self, name: str) -> list[PathStep]:
        return [s for s in self.steps if s.stage == name]

    @property
    def endpoint(self) -> complex:
        return self.steps[-1].z

    def to_csv(self) -> str:
        rows = ["stage,theta_or_t,target_trace,re,im,residual"]
        for s in self.steps:
            rows.append("%s,%.17g,%.17g,%.17g,%.17g,%.17g"
                        % (s.stage, s.param, s.target, s.z.real, s.z.imag, s.residual))
        return "\n".join(rows) + "\n"


def _residual(value: complex, target: float) -> float:
    # relative once |target| > 1: traces near the start circle reach 1e6 and beyond
    return abs(value - target) / max(1.0, abs(target))


def real_trace_points(s: Slope, R: float, samples: int = SCAN_SAMPLES) -> list[complex]:
    """Points of |z| = R where tr W_{p/q} is real, located by sign changes and bisection."""
    phis = 2 * math.pi * np.arange(samples) / samples
    circle = R * np.exp(1j * phis)
    tr = farey_trace(s, circle)
    if np.min(np.abs(tr)) <= 2:
        raise ValueError(f"|tr W| is not above 2 on the circle of radius {R}")
    im = tr.imag

    def g(phi):
        return farey_trace(s, R * complex(math.cos(phi), math.sin(phi))).imag

    roots = []
    for k in range(samples):
        a, b = phis[k], (phis[k + 1] if k + 1 < samples else 2 * math.pi)
        ya, yb = im[k], im[(k + 1) % samples]
        if ya == 0:
            roots.append(a)
        elif ya * yb < 0:
            roots.append(brentq(g, a, b, xtol=1e-12, rtol=4 * np.finfo(float).eps))
    return [R * complex(math.cos(phi), math.sin(phi)) for phi in roots]


def cone_path(s: Slope, R: float = 20.0, n_hyp: int = 30, n_ell: int = 30) -> PathTrace:
    """Follow the real-trace branch of W_{p/q} from |z| = R to the cusp, then to the knot group.

    Stage ``hyperbolic`` targets -2 exp(t) for t falling evenly from
    log(|x0|/2) to 0; stage ``elliptic`` targets -2 cos(theta/2) for theta
    rising evenly from 0 to 2 pi.
    """
    if not isinstance(s, Slope):
        s = Slope(*s)
    if n_hyp < 1 or n_ell < 1:
        raise ValueError("need at least one step in each stage")
    candidates = real_trace_points(s, R)
    if not candidates:
        raise NumericalError(f"no real-trace point on |z| = {R}")
    aim = R * complex(math.cos(math.pi * s.p / s.q), math.sin(math.pi * s.p / s.q))
    z = min(candidates, key=lambda c: abs(c - aim))
    x0 = farey_trace(s, z)
    path = PathTrace(s)
    path.steps.append(PathStep("start", 0.0, x0.real, z, _residual(x0, x0.real)))

    def f(w):
        return farey_trace(s, w)

    def step(stage, param, target):
        nonlocal z
        try:
            z = newton_solve_trace(f, target, z)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"{stage} step at {param:.6g} (target {target:.6g}) failed: {exc}",
                path.steps,
            ) from exc
        path.steps.append(PathStep(stage, float(param), float(target), z, _residual(f(z), target)))

    for t in np.linspace(math.log(abs(x0) / 2), 0.0, n_hyp + 1)[1:]:
        step("hyperbolic", t, -2 * math.exp(t))
    for theta in np.linspace(0.0, 2 * math.pi, n_ell + 1)[1:]:
        step("elliptic", theta, -2 * math.cos(theta / 2))
    return path


def substitute(w: Word, mapping: dict, mode=FREE) -> Word:
    """Rewrite a word letter by letter; generators mapped to None are killed."""
    letters = []
    for g, sgn in w.letters:
        new = mapping[g]
        if new is not None:
            letters.append((new, sgn))
    return Word(tuple(letters), mode)


def _system(words, make_gens, targets):
    targets = np.asarray(targets, dtype=complex)

    def F(params):
        gens = make_gens(params)
        vals = np.array([evaluate(w, gens).trace ** 2 for w in words])
        return vals - targets

    return F


def polish_system(words: Sequence[Word], template, targets: Sequence[complex], guess,
                  tol: float = PATH_TOL, max_iter: int = 50) -> tuple:
    """Newton's method for tr^2(w_i) = target_i in the template's parameters.

    ``template`` is a template name or a callable from a parameter tuple to
    generators.  Returns the polished parameters, with max residual < tol.
    """
    make_gens = (lambda p: instantiate(template, p)) if isinstance(template, str) else template
    x = np.array([complex(v) for v in guess])
    if len(words) != len(x) or len(targets) != len(x):
        raise ValueError("need as many equations as free parameters")
    F = _system(words, make_gens, targets)
    fx = F(x)
    history = [float(np.max(np.abs(fx)))]
    for _ in range(max_iter):
        if history[-1] < tol * 1e-2:
            break
        J = np.empty((len(x), len(x)), dtype=complex)
        for k in range(len(x)):
            h = 1e-7 * max(1.0, abs(x[k]))
            e = np.zeros_like(x)
            e[k] = h
            J[:, k] = (F(x + e) - F(x - e)) / (2 * h)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e14:
            raise ConvergenceError("singular Jacobian", history)
        x_new = x - np.linalg.solve(J, fx)
        f_new = F(x_new)
        r_new = float(np.max(np.abs(f_new)))
        if r_new >= history[-1] and history[-1] < tol:
            break  # already converged to rounding level
        x, fx = x_new, f_new
        history.append(r_new)
    if history[-1] >= tol:
        raise ConvergenceError(f"system residual {history[-1]:.3g} not below {tol:.3g}", history)
    return tuple(complex(v) for v in x)


def system_residual(words: Sequence[Word], template, targets, params) -> float:
    make_gens = (lambda p: instantiate(template, p)) if isinstance(template, str) else template
    return float(np.max(np.abs(_system(words, make_gens, targets)(np.array(params, dtype=complex)))))
