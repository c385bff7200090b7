"""Limit set sampling: random walks (chaos game) and breadth-first orbits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mobius import INF, MobiusMap, adjugate, as_array, attracting_fixed_point, classify, fixed_points
from .slices import Raster, Window
from .words import DEFAULT_WORD_CAP

FAR = 1e12


@dataclass
class PointCloud:
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.points.size

    def to_csv(self) -> str:
        return "".join("%.17g,%.17g\n" % (z.real, z.imag) for z in self.points)


def _projective(z) -> np.ndarray:
    if z is INF:
        return np.array([1.0 + 0j, 0j])
    return np.array([complex(z), 1.0 + 0j])


def _finite(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Affine coordinates of projective points, with a keep-flag for |z| <= 1e12."""
    with np.errstate(all="ignore"):
        z = u / v
    keep = np.isfinite(z) & (np.abs(v) > 0) & (np.abs(z) <= FAR)
    return z, keep


def _letters(gens) -> np.ndarray:
    arr = as_array(gens)
    # index k is generator k, index k + g its inverse
    return np.concatenate([arr, adjugate(arr)], axis=0)


def chaos_game(gens, iterations: int = 100_000, seed: int = 0, burn_in: int = 20,
               streams: int = 64) -> PointCloud:
    """Sample the limit set by random reduced words applied to a fixed point of gens[0].

    ``streams`` independent walks, each seeded from (seed, stream index),
    are run side by side; their samples are concatenated in stream order.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    if classify(gens[0]) == "identity":
        raise ValueError("first generator is the identity; no start point")
    start = attracting_fixed_point(gens[0])
    g = len(gens)
    letters = _letters(gens)
    inverse_of = np.concatenate([np.arange(g, 2 * g), np.arange(g)])
    streams = max(1, min(streams, iterations)) if iterations > 0 else 1
    per_stream = -(-iterations // streams) if iterations > 0 else 0
    steps = burn_in + per_stream

    choices = np.empty((streams, steps), dtype=np.intp)
    for s in range(streams):
        rng = np.random.default_rng([seed, s])
        raw = rng.integers(0, 2 * g - 1, size=steps)
        raw[0] = rng.integers(0, 2 * g) if steps else 0
        prev = -1
        for t in range(steps):
            c = int(raw[t])
            if prev >= 0 and c >= inverse_of[prev]:
                c += 1  # skip the inverse of the previous letter
            choices[s, t] = c
            prev = c

    p = _projective(start)
    u = np.full(streams, p[0])
    v = np.full(streams, p[1])
    samples = np.empty((streams, per_stream), dtype=complex)
    keep = np.zeros((streams, per_stream), dtype=bool)
    for t in range(steps):
        m = letters[choices[:, t]]
        u, v = m[:, 0, 0] * u + m[:, 0, 1] * v, m[:, 1, 0] * u + m[:, 1, 1] * v
        scale = np.maximum(np.abs(u), np.abs(v))
        u, v = u / scale, v / scale
        if t >= burn_in:
            z, ok = _finite(u, v)
            samples[:, t - burn_in] = z
            keep[:, t - burn_in] = ok
    flat, ok = samples.ravel()[:iterations], keep.ravel()[:iterations]
    meta = {"method": "chaos_game", "iterations": iterations, "seed": seed,
            "burn_in": burn_in, "streams": streams, "dropped": int((~ok).sum())}
    return PointCloud(flat[ok], meta)


def bfs_orbit(gens, depth: int, base_points=None, cap: int = DEFAULT_WORD_CAP,
              dedup_tol: float = 1e-9) -> PointCloud:
    """Images of base points under every reduced word of length <= depth.

    Base points default to the fixed points of all generators.  Points are
    deduplicated on a grid of size ``dedup_tol``.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    gens = list(gens)
    g = len(gens)
    total = sum(2 * g * (2 * g - 1) ** (L - 1) for L in range(1, depth + 1))
    if total > cap:
        raise ValueError(f"{total} words exceed the cap of {cap}; use chaos_game instead")
    if base_points is None:
        base_points = []
        for m in gens:
            if classify(m) != "identity":
                base_points.extend(fixed_points(m))
    base = np.array([_projective(p) for p in base_points], dtype=complex).reshape(-1, 2)
    letters = _letters(gens)
    inverse_of = np.concatenate([np.arange(g, 2 * g), np.arange(g)])

    # words grow on the left, so (letter . w)(p) = letter(w(p))
    u, v = base[:, 0], base[:, 1]
    first = np.full(u.shape, -1)
    chunks_u, chunks_v = [u], [v]
    for _ in range(depth):
        nu, nv, nf = [], [], []
        for c in range(2 * g):
            sel = first != inverse_of[c]
            m = letters[c]
            a, b = u[sel], v[sel]
            x, y = m[0, 0] * a + m[0, 1] * b, m[1, 0] * a + m[1, 1] * b
            s = np.maximum(np.abs(x), np.abs(y))
            nu.append(x / s)
            nv.append(y / s)
            nf.append(np.full(a.shape, c))
        u, v, first = np.concatenate(nu), np.concatenate(nv), np.concatenate(nf)
        chunks_u.append(u)
        chunks_v.append(v)
    z, ok = _finite(np.concatenate(chunks_u), np.concatenate(chunks_v))
    z = z[ok]
    keys = np.round(np.stack([z.real, z.imag], axis=1) / dedup_tol).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    idx.sort()
    meta = {"method": "bfs_orbit", "depth": depth, "dropped": int((~ok).sum())}
    return PointCloud(z[idx], meta)


def rasterize(cloud: PointCloud | np.ndarray, window: Window) -> Raster:
    """Per-pixel hit counts; points outside the window are ignored."""
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=complex)
    counts = np.zeros((window.H, window.W), dtype=float)
    if pts.size:
        j, k, inside = window.locate(pts)
        np.add.at(counts, (k[inside], j[inside]), 1.0)
    meta = dict(cloud.meta) if isinstance(cloud, PointCloud) else {}
    return Raster(counts, window, meta)


def apply_to_points(m: MobiusMap, pts: np.ndarray) -> np.ndarray:
    """Vectorised action on finite points; poles map to nan."""
    pts = np.asarray(pts, dtype=complex)
    with np.errstate(all="ignore"):
        out = (m.a * pts + m.b) / (m.c * pts + m.d)
    return np.where(np.isfinite(out), out, np.nan)
