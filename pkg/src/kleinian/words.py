"""Group words over a marked generating set: enumeration, reduction, evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .mobius import MobiusMap, adjugate, as_array, normalize_det, trace_translation_length

DEFAULT_WORD_CAP = 10**6

Letter = tuple  # (generator index, sign)


@dataclass(frozen=True)
class CommutingPair:
    """Generators i and j commute in every group of the family."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("commuting pair needs two distinct generators")

    def __contains__(self, gen: int) -> bool:
        return gen == self.i or gen == self.j


FREE = "free"


def _key(letter: Letter) -> tuple:
    return letter[0], 0 if letter[1] > 0 else 1


def _free_reduce(letters) -> list:
    out: list = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return out


def _normal_form(letters, mode) -> tuple:
    letters = _free_reduce(letters)
    if not isinstance(mode, CommutingPair):
        return tuple(letters)
    while True:
        out: list = []
        k = 0
        while k < len(letters):
            if letters[k][0] not in mode:
                out.append(letters[k])
                k += 1
                continue
            exps = {mode.i: 0, mode.j: 0}
            while k < len(letters) and letters[k][0] in mode:
                exps[letters[k][0]] += letters[k][1]
                k += 1
            for g in (mode.i, mode.j):
                e = exps[g]
                out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        reduced = _free_reduce(out)
        if reduced == letters:
            return tuple(reduced)
        letters = reduced


def _is_normal(letters, mode) -> bool:
    return tuple(letters) == _normal_form(letters, mode)


@dataclass(frozen=True)
class Word:
    letters: tuple
    mode: object = FREE

    def __post_init__(self):
        letters = tuple((int(g), 1 if s > 0 else -1) for g, s in self.letters)
        object.__setattr__(self, "letters", _normal_form(letters, self.mode))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)), self.mode)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, self.mode)

    def format(self, names: Sequence[str]) -> str:
        return " ".join(names[g] + ("⁻¹" if s < 0 else "") for g, s in self.letters)

    @property
    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)


def parse_word(text: str, names: Sequence[str], mode=FREE) -> Word:
    """Parse ``"P Q⁻¹ M"``, ``"PQ^-1M"``, or ``"P Q' M"`` given generator names."""
    order = sorted(range(len(names)), key=lambda k: -len(names[k]))
    s = text.replace(" ", "")
    letters = []
    pos = 0
    while pos < len(s):
        for k in order:
            if s.startswith(names[k], pos):
                pos += len(names[k])
                break
        else:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        sign = 1
        for suffix in ("⁻¹", "^-1", "'"):
            if s.startswith(suffix, pos):
                sign = -1
                pos += len(suffix)
                break
        letters.append((k, sign))
    return Word(tuple(letters), mode)


def _alphabet(g: int) -> list:
    return [(k, s) for k in range(g) for s in (1, -1)]


def enumerate_words(g: int, mode=FREE, N: int = 1, cap: int = DEFAULT_WORD_CAP,
                    trim_conjugates: bool = False) -> list[Word]:
    """All reduced words of length 1..N ordered by length, then lexicographically.

    Letters compare by generator index, then + before -.  In commuting-pair
    mode only normal forms are produced.  With ``trim_conjugates``, words
    that are cyclic rotations of an earlier word are dropped.
    """
    if g < 1 or N < 1:
        raise ValueError("need g >= 1 and N >= 1")
    alphabet = _alphabet(g)
    level = [()]
    out: list[Word] = []
    seen_rotations: set = set()
    for _ in range(N):
        nxt = []
        for w in level:
            for letter in alphabet:
                if w and w[-1][0] == letter[0] and w[-1][1] == -letter[1]:
                    continue
                cand = w + (letter,)
                if isinstance(mode, CommutingPair) and not _is_normal(cand, mode):
                    continue
                nxt.append(cand)
        if len(out) + len(nxt) > cap:
            raise ValueError(
                f"word enumeration exceeds the cap of {cap} words; use random_words instead"
            )
        for w in nxt:
            if trim_conjugates:
                key = min(w[k:] + w[:k] for k in range(len(w)))
                if key in seen_rotations:
                    continue
                seen_rotations.add(key)
            out.append(Word(w, mode))
        level = nxt
    return out


def random_words(g: int, mode=FREE, max_length: int = 10, count: int = 100,
                 seed: int = 0) -> list[Word]:
    """Distinct random reduced words, in generation order; deterministic per seed."""
    if count <= 0:
        return []
    rng = np.random.default_rng(seed)
    alphabet = _alphabet(g)
    seen: set = set()
    out: list[Word] = []
    attempts = 0
    while len(out) < count and attempts < 100 * count + 1000:
        attempts += 1
        length = int(rng.integers(1, max_length + 1))
        letters: list = []
        while len(letters) < length:
            letter = alphabet[int(rng.integers(len(alphabet)))]
            if letters and letters[-1][0] == letter[0] and letters[-1][1] == -letter[1]:
                continue
            letters.append(letter)
        w = Word(tuple(letters), mode)
        if not w.letters or w.letters in seen:
            continue
        seen.add(w.letters)
        out.append(w)
    return out


def evaluate(w: Word, gens: Sequence[MobiusMap]) -> MobiusMap:
    """Left-to-right product of generators and inverses."""
    if w.max_generator >= len(gens):
        raise IndexError(f"word uses generator {w.max_generator} but only {len(gens)} given")
    m = np.eye(2, dtype=complex)
    for g, s in w.letters:
        m = m @ (gens[g].matrix if s > 0 else gens[g].inverse().matrix)
    return normalize_det(m)


def tau_profile(words: Iterable[Word], gens: Sequence[MobiusMap]) -> list[float]:
    """Translation length of each word, in list order."""
    arr = as_array(gens)[:, None]
    return [float(v) for v in word_translation_lengths(list(words), arr)[:, 0]]


def _mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # batched 2x2 product over the last two axes
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=complex)
    out[..., 0, 0] = x[..., 0, 0] * y[..., 0, 0] + x[..., 0, 1] * y[..., 1, 0]
    out[..., 0, 1] = x[..., 0, 0] * y[..., 0, 1] + x[..., 0, 1] * y[..., 1, 1]
    out[..., 1, 0] = x[..., 1, 0] * y[..., 0, 0] + x[..., 1, 1] * y[..., 1, 0]
    out[..., 1, 1] = x[..., 1, 0] * y[..., 0, 1] + x[..., 1, 1] * y[..., 1, 1]
    return out


def word_traces(words: Sequence[Word], gens: np.ndarray) -> np.ndarray:
    """Traces of every word at every parameter point.

    ``gens`` has shape (g, n_points, 2, 2).  Words are evaluated level by
    level over their prefix closure, one batched product per level.
    """
    gens = np.asarray(gens, dtype=complex)
    g, n_points = gens.shape[0], gens.shape[1]
    if any(w.max_generator >= g for w in words):
        raise IndexError("word uses a generator index beyond the generator list")
    alphabet = [(k, 1) for k in range(g)] + [(k, -1) for k in range(g)]
    letter_index = {letter: n for n, letter in enumerate(alphabet)}
    letter_mats = np.concatenate([gens, adjugate(gens)], axis=0)

    longest = max((len(w) for w in words), default=0)
    levels: list[dict] = [dict() for _ in range(longest + 1)]
    levels[0][()] = 0
    for w in words:
        key = w.letters
        for L in range(1, len(key) + 1):
            levels[L].setdefault(key[:L], len(levels[L]))
    wanted: list[list] = [[] for _ in range(longest + 1)]
    for n, w in enumerate(words):
        wanted[len(w)].append((n, levels[len(w)][w.letters]))

    out = np.empty((len(words), n_points), dtype=complex)
    prev = np.broadcast_to(np.eye(2, dtype=complex), (1, n_points, 2, 2))
    with np.errstate(all="ignore"):
        for L in range(1, longest + 1):
            keys = list(levels[L])
            parent = np.array([levels[L - 1][k[:-1]] for k in keys], dtype=np.intp)
            letter = np.array([letter_index[k[-1]] for k in keys], dtype=np.intp)
            cur = _mul(prev[parent], letter_mats[letter])
            for n, idx in wanted[L]:
                out[n] = cur[idx, :, 0, 0] + cur[idx, :, 1, 1]
            prev = cur
    return out


def word_translation_lengths(words: Sequence[Word], gens: np.ndarray) -> np.ndarray:
    return trace_translation_length(word_traces(words, gens))
