"""Built-in numerical verification suites, used by ``kleinian verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .families import compression_body, delta_family, grandma, instantiate
from .mobius import MobiusMap
from .traces import polish_system, substitute, system_residual
from .words import parse_word

CB_NAMES = ("P", "Q", "M")
KNOT85_WORDS = ("P⁻¹ M M", "M M M P⁻¹ P⁻¹ Q P⁻¹", "M P⁻¹ P⁻¹ Q")
KNOT85_EXACT = ((3 - 1j * math.sqrt(7)) / 2, (7 - 1j * math.sqrt(7)) / 2, (3 - 1j * math.sqrt(7)) / 4)
KNOT85_ROUNDED = (1.7581 - 2.7734j, 6.4537 - 4.8311j, -0.4688 - 0.3578j)
SLICE85_Z0 = (2 - 1j, -1j, 2 - 2j)
SLICE85_Z1 = (0.7607 + 0.8579j, -0.7610 - 0.8579j, 2.3146 - 2.6103j)


@dataclass
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.tol)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.value:.3e} (tol {self.tol:.0e})"


def _tr(maps, word: str, names=CB_NAMES) -> complex:
    m = np.eye(2, dtype=complex)
    for g, s in parse_word(word, names).letters:
        x = maps[g].matrix
        m = m @ (x if s > 0 else np.linalg.inv(x))
    return complex(np.trace(m))


def _random_complex(rng, n, scale=3.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def trace_identities(samples: int = 1000, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []

    # grandma round trip
    tx, ty, txy = (_random_complex(rng, samples) for _ in range(3))
    tr_res = det_res = 0.0
    for a, b, c in zip(tx, ty, txy):
        X, Y = grandma(a, b, c)
        xy = X.matrix @ Y.matrix
        tr_res = max(tr_res, abs(X.trace - a), abs(Y.trace - b), abs(np.trace(xy) - c))
        det_res = max(det_res, abs(X.det - 1), abs(Y.det - 1))
    checks.append(Check("grandma traces tr X, tr Y, tr XY", tr_res, 1e-10))
    checks.append(Check("grandma determinants", det_res, 1e-12))

    # tr^2(M P^-1 M Q^-1) = ((alpha-2)(beta-2)-2)^2 at lambda = 1
    alphas, betas = _random_complex(rng, samples, 2.0), _random_complex(rng, samples, 2.0)
    res = 0.0
    for a, b in zip(alphas, betas):
        P, Q, M = compression_body(a, b, 1)
        expected = ((a - 2) * (b - 2) - 2) ** 2
        res = max(res, abs(_tr([P, Q, M], "M P⁻¹ M Q⁻¹") ** 2 - expected) / max(1.0, abs(expected)))
    checks.append(Check("compression body tr^2(M P^-1 M Q^-1)", res, 1e-10))

    # delta family: |alpha|^2 - 4 Re(alpha) = 0 and tr(P^-1 M Q^-1) = -2 - 4 cos(delta)
    star = sq = 0.0
    for d in rng.uniform(0, math.pi, samples):
        p = delta_family(d)
        star = max(star, abs(abs(p.alpha) ** 2 - 4 * p.alpha.real))
        gens = compression_body(p)
        sq = max(sq, abs(_tr(gens, "P⁻¹ M Q⁻¹") ** 2 - (-2 - 4 * math.cos(d)) ** 2))
    checks.append(Check("delta family |alpha|^2 - 4 Re(alpha)", star, 1e-10))
    checks.append(Check("delta family tr^2(P^-1 M Q^-1)", sq, 1e-10))

    # horizontal slice: Phi^-1 Q M(lambda) Phi = M(lambda + beta/2)
    res = 0.0
    for b, lam in zip(_random_complex(rng, samples, 2.0), _random_complex(rng, samples, 2.0)):
        phi = np.array([[1, b / 2], [0, 1]], dtype=complex)
        phi_inv = np.array([[1, -b / 2], [0, 1]], dtype=complex)
        _, Q, M = compression_body(1, b, lam)
        lhs = phi_inv @ Q.matrix @ M.matrix @ phi
        rhs = compression_body(1, b, lam + b / 2)[2].matrix
        res = max(res, float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs)))))
    checks.append(Check("horizontal slice conjugation", res, 1e-12))
    return checks


def _frac_mul(x, y):
    return [[x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]]]


def solomon_exact() -> dict:
    """tr M, tr P^-1 M Q^-1 and M P^-1 M Q^-1 at G(2, 2, 1) in rational arithmetic."""
    F = Fraction
    P_inv = [[F(1), F(-2)], [F(0), F(1)]]
    Q_inv = [[F(1), F(-2)], [F(0), F(1)]]
    M = [[F(1), F(0)], [F(1), F(1)]]
    pmq = _frac_mul(_frac_mul(P_inv, M), Q_inv)
    prod = _frac_mul(M, pmq)
    return {"tr_M": M[0][0] + M[1][1], "tr_PinvMQinv": pmq[0][0] + pmq[1][1], "MPinvMQinv": prod}


def known_points() -> list[Check]:
    checks = []
    wh = compression_body(-2 - 2j, 1 - 1j, 1)
    for word in ("M P Q⁻¹ M Q⁻¹ M⁻¹ Q M⁻¹ Q⁻¹", "M", "Q⁻¹ M P Q⁻¹"):
        checks.append(Check(f"Whitehead tr^2({word}) = 4", abs(_tr(wh, word) ** 2 - 4), 1e-9))

    sol = solomon_exact()
    neg_id = [[-1, 0], [0, -1]]
    checks.append(Check("Solomon tr M = 2 (exact)", float(abs(sol["tr_M"] - 2)), 1e-300))
    checks.append(Check("Solomon tr P^-1 M Q^-1 = -2 (exact)", float(abs(sol["tr_PinvMQinv"] + 2)), 1e-300))
    dev = max(abs(sol["MPinvMQinv"][i][j] - neg_id[i][j]) for i in range(2) for j in range(2))
    checks.append(Check("Solomon M P^-1 M Q^-1 = -Id (exact)", float(dev), 1e-300))

    words = [parse_word(w, CB_NAMES) for w in KNOT85_WORDS]
    checks.append(Check("8_5 system at first solution",
                        system_residual(words, "compression_body", [4] * 3, KNOT85_EXACT), 1e-10))
    polished = polish_system(words, "compression_body", [4] * 3, KNOT85_ROUNDED)
    checks.append(Check("8_5 second solution polished residual",
                        system_residual(words, "compression_body", [4] * 3, polished), 1e-10))
    checks.append(Check("8_5 second solution distance to 4-decimal guess",
                        max(abs(a - b) for a, b in zip(polished, KNOT85_ROUNDED)), 1e-3))

    killed = [substitute(w, {0: 0, 1: None, 2: 1}) for w in words]
    checks.append(Check("8_5 slice point (2-i, -i, 2-2i)",
                        system_residual(killed, "grandma", [4] * 3, SLICE85_Z0), 1e-10))
    return checks


SUITES = {"trace-identities": trace_identities, "known-points": known_points}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()
