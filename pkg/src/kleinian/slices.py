"""Character variety slice pictures: minimum translation length per pixel.

A fixed word list is evaluated at a test point; words with zero translation
length there (parabolic, elliptic or trivial throughout the family) are
masked, and each pixel gets the minimum translation length of the
remaining words.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .families import FamilySpec, batch_generators
from .words import CommutingPair, FREE, Word, enumerate_words, random_words, word_translation_lengths

MASK_TOL = 1e-9
CHUNK_BYTES = 256 * 2**20


@dataclass(frozen=True)
class Window:
    centre: complex
    width: float
    height: float
    W: int
    H: int

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("window width and height must be positive")
        if self.W < 1 or self.H < 1:
            raise ValueError("window resolution must be at least 1x1")
        object.__setattr__(self, "centre", complex(self.centre))

    def pixel(self, j: int, k: int) -> complex:
        """Centre of pixel (j, k), column j from the left, row k from the top."""
        x = ((j + 0.5) / self.W - 0.5) * self.width
        y = (0.5 - (k + 0.5) / self.H) * self.height
        return self.centre + complex(x, y)

    def grid(self) -> np.ndarray:
        """Pixel centres, shape (H, W)."""
        x = ((np.arange(self.W) + 0.5) / self.W - 0.5) * self.width
        y = (0.5 - (np.arange(self.H) + 0.5) / self.H) * self.height
        return self.centre + x[None, :] + 1j * y[:, None]

    def locate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Column, row and in-window flag of each point."""
        z = np.asarray(z, dtype=complex)
        left = self.centre.real - self.width / 2
        top = self.centre.imag + self.height / 2
        j = np.floor((z.real - left) / self.width * self.W)
        k = np.floor((top - z.imag) / self.height * self.H)
        inside = (j >= 0) & (j < self.W) & (k >= 0) & (k < self.H)
        return j.astype(np.int64, copy=False), k.astype(np.int64, copy=False), inside


@dataclass
class Raster:
    values: np.ndarray
    window: Window
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_csv(self) -> str:
        """Row-major values, one raster row per line, 17 significant digits."""
        lines = [",".join("%.17g" % v for v in row) for row in self.values]
        return "\n".join(lines) + "\n"


def default_mode(spec: FamilySpec):
    """P and Q commute in every compression-body group."""
    if spec.template == "compression_body":
        return CommutingPair(0, 1)
    return FREE


def baseline_mask(words, gens_at_test_point, tol: float = MASK_TOL) -> np.ndarray:
    """True where a word has translation length <= tol at the test point."""
    arr = np.array([m.matrix for m in gens_at_test_point], dtype=complex)[:, None]
    tau = word_translation_lengths(list(words), arr)[:, 0]
    return tau <= tol


def _pixel_minima(spec, words, points, workers):
    n = points.size
    # prefix-closure levels never exceed the word count
    per_point = 16 * 4 * 3 * max(1, len(words))
    chunk = max(1, min(n, CHUNK_BYTES // per_point))
    bounds = [(s, min(n, s + chunk)) for s in range(0, n, chunk)]

    def run(bound):
        lo, hi = bound
        mats, bad = batch_generators(spec, points[lo:hi])
        tau = word_translation_lengths(words, mats)
        best = np.min(tau, axis=0)
        best = np.where(np.isnan(best), 0.0, best)
        best[bad] = 0.0
        return best, bad

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    values = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    bad = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=bool)
    return values, bad


def slice_words(spec: FamilySpec, depth: int | None = None, sample: dict | None = None,
                seed: int = 0, mode=None) -> list[Word]:
    """The fixed word list: every word up to ``depth``, or a seeded random sample."""
    mode = default_mode(spec) if mode is None else mode
    if sample:
        return random_words(spec.n_generators, mode, int(sample.get("max_length", 10)),
                            int(sample.get("count", 100)), seed)
    if depth is None:
        raise ValueError("need a word depth or a sample spec")
    return enumerate_words(spec.n_generators, mode, depth)


def render_slice(spec: FamilySpec, test_point, window: Window, depth: int | None = None,
                 sample: dict | None = None, seed: int = 0, tol: float = MASK_TOL,
                 words: list[Word] | None = None, workers: int = 1) -> Raster:
    """Minimum unmasked translation length at every pixel of ``window``.

    Pixels where a generator is singular get the value 0 and are counted
    in ``meta["degenerate"]``.
    """
    if words is None:
        words = slice_words(spec, depth, sample, seed)
    mats0, bad0 = batch_generators(spec, np.array([test_point]))
    if bad0[0]:
        raise ValueError("test point gives a singular generator")
    tau0 = word_translation_lengths(words, mats0)[:, 0]
    mask = tau0 <= tol
    kept = [w for w, m in zip(words, mask) if not m]
    if not kept:
        raise ValueError("mask removed every word")
    values, bad = _pixel_minima(spec, kept, window.grid().ravel(), workers)
    meta = {
        "template": spec.template,
        "test_point": complex(test_point),
        "n_words": len(words),
        "masked": int(mask.sum()),
        "depth": depth,
        "sample": dict(sample) if sample else None,
        "seed": seed,
        "degenerate": int(bad.sum()),
    }
    return Raster(values.reshape(window.H, window.W), window, meta)


def slice_values(spec: FamilySpec, test_point, points, words, tol: float = MASK_TOL) -> np.ndarray:
    """Pixel values at arbitrary parameter points (same masking as render_slice)."""
    mats0, _ = batch_generators(spec, np.array([test_point]))
    mask = word_translation_lengths(words, mats0)[:, 0] <= tol
    kept = [w for w, m in zip(words, mask) if not m]
    if not kept:
        raise ValueError("mask removed every word")
    values, _ = _pixel_minima(spec, kept, np.asarray(points, dtype=complex).ravel(), 1)
    return values


def colormap(r: Raster | np.ndarray, tau_max: float) -> np.ndarray:
    """8-bit grayscale: 0 where some new word is parabolic/elliptic, 255 at or above tau_max."""
    if not tau_max > 0:
        raise ValueError("tau_max must be positive")
    vals = r.values if isinstance(r, Raster) else np.asarray(r, dtype=float)
    scaled = 255.0 * np.minimum(vals, tau_max) / tau_max
    return np.floor(scaled + 0.5).astype(np.uint8)
