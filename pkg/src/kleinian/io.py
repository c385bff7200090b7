"""Scene files and output writers (PPM, CSV, circle JSON).

A scene is a JSON object with a ``mode`` key and mode-specific keys.
Complex numbers are written ``[re, im]`` (a bare real number is also
accepted).  Angle keys are in radians; the same key with suffix ``_pi``
is read in units of pi.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circles import Circle, Line
from .errors import SceneError
from .families import TEMPLATE_ARITY

MODES = ("necklace", "atom", "limitset", "slice", "farey-path", "solve", "verify")
SUITES = ("trace-identities", "known-points", "all")
OUTPUT_EXT = {
    "necklace": (".json",),
    "atom": (".json",),
    "limitset": (".ppm", ".csv"),
    "slice": (".ppm", ".csv"),
    "farey-path": (".csv",),
    "solve": (".json",),
    "verify": (),
}

# key -> (kind, default); a default of REQUIRED makes the key mandatory
REQUIRED = object()
_COMMON = {"mode": ("str", REQUIRED), "out": ("str", None), "seed": ("int", 0), "workers": ("int", 1)}
_FAMILY = {"template": ("template", REQUIRED), "p0": ("complex_list", REQUIRED), "p1": ("complex_list", None)}
SCHEMA = {
    "necklace": {"points": ("complex_list", REQUIRED)},
    "atom": {
        "n": ("int", 25), "growth": ("float", 0.8), "inner": ("float", 0.5),
        "amplitude": ("float", 3.0), "start_angles": ("angle_list", [math.pi, 0.0]),
        "guess_factor": ("float", 2.2),
    },
    "limitset": {
        "template": ("template", None), "params": ("complex_list", None),
        "points": ("complex_list", None), "method": ("str", "chaos"),
        "iterations": ("int", 100_000), "burn_in": ("int", 20), "streams": ("int", 64),
        "depth": ("int", 6), "window": ("window", None),
    },
    "slice": {
        **_FAMILY, "test_point": ("complex", REQUIRED), "window": ("window", REQUIRED),
        "depth": ("int", None), "sample": ("sample", None), "tau_max": ("float", 2.0),
        "tol": ("float", 1e-9),
    },
    "farey-path": {"slope": ("str", REQUIRED), "R": ("float", 20.0), "steps": ("int_list", [30, 30])},
    "solve": {
        "template": ("template", REQUIRED), "words": ("str_list", REQUIRED),
        "targets": ("complex_list", None), "guess": ("complex_list", REQUIRED),
        "tol": ("float", 1e-10),
    },
    "verify": {"suite": ("str", "all")},
}


@dataclass
class Scene:
    mode: str
    params: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]

    def get(self, key, default=None):
        return self.params.get(key, default)

    def to_json(self) -> str:
        """Canonical JSON; angles come out in radians under their plain key.

        Unset optional keys (value None) are left out.
        """
        out = {"mode": self.mode}
        for key in sorted(self.params):
            if self.params[key] is not None:
                out[key] = _encode(self.params[key])
        return json.dumps(out, indent=2) + "\n"


def _encode(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    return v


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Ctx:
    def __init__(self, source: str, text: str):
        self.source, self.text = source, text

    def fail(self, key: str | None, msg: str):
        where = self.source
        if key is not None:
            line = _line_of(self.text, key)
            where += f":{line}" if line else ""
            msg = f"key {key!r}: {msg}"
        raise SceneError(f"{where}: {msg}")


def _complex(ctx, key, v):
    if isinstance(v, bool):
        ctx.fail(key, "expected a number or [re, im]")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        z = complex(v[0], v[1])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            ctx.fail(key, "complex value must be finite")
        return z
    ctx.fail(key, f"expected [re, im], got {v!r}")


def _number(ctx, key, v, integer=False):
    ok = isinstance(v, int) if integer else isinstance(v, (int, float))
    if not ok or isinstance(v, bool):
        ctx.fail(key, f"expected {'an integer' if integer else 'a number'}, got {v!r}")
    if not integer and not math.isfinite(v):
        ctx.fail(key, "must be finite")
    return int(v) if integer else float(v)


def _list(ctx, key, v):
    if not isinstance(v, list):
        ctx.fail(key, f"expected a list, got {type(v).__name__}")
    return v


def _window(ctx, key, v):
    if not isinstance(v, dict):
        ctx.fail(key, "expected an object")
    allowed = {"centre", "width", "height", "W", "H"}
    extra = set(v) - allowed
    if extra:
        ctx.fail(sorted(extra)[0], "unknown window key")
    missing = allowed - set(v)
    if missing:
        ctx.fail(key, f"missing window key {sorted(missing)[0]!r}")
    w = {"centre": _complex(ctx, "centre", v["centre"]),
         "width": _number(ctx, "width", v["width"]), "height": _number(ctx, "height", v["height"]),
         "W": _number(ctx, "W", v["W"], True), "H": _number(ctx, "H", v["H"], True)}
    if w["width"] <= 0 or w["height"] <= 0:
        ctx.fail(key, "width and height must be positive")
    if w["W"] < 1 or w["H"] < 1:
        ctx.fail(key, "W and H must be at least 1")
    return w


def _parse(ctx, key, kind, v):
    if kind == "str":
        if not isinstance(v, str):
            ctx.fail(key, f"expected a string, got {v!r}")
        return v
    if kind == "int":
        return _number(ctx, key, v, True)
    if kind == "float":
        return _number(ctx, key, v)
    if kind == "complex":
        return _complex(ctx, key, v)
    if kind == "complex_list":
        return [_complex(ctx, key, x) for x in _list(ctx, key, v)]
    if kind == "int_list":
        return [_number(ctx, key, x, True) for x in _list(ctx, key, v)]
    if kind == "angle_list":
        return [_number(ctx, key, x) for x in _list(ctx, key, v)]
    if kind == "str_list":
        out = _list(ctx, key, v)
        if not all(isinstance(x, str) for x in out):
            ctx.fail(key, "expected a list of strings")
        return list(out)
    if kind == "template":
        if v not in TEMPLATE_ARITY:
            ctx.fail(key, f"unknown template {v!r}; choose from {sorted(TEMPLATE_ARITY)}")
        return v
    if kind == "window":
        return _window(ctx, key, v)
    if kind == "sample":
        if not isinstance(v, dict) or set(v) - {"count", "max_length"}:
            ctx.fail(key, "expected {count, max_length}")
        return {k: _number(ctx, k, x, True) for k, x in v.items()}
    raise AssertionError(kind)


def _check(ctx: _Ctx, mode: str, p: dict):
    def need(cond, key, msg):
        if not cond:
            ctx.fail(key, msg)

    if p.get("out") is not None:
        exts = OUTPUT_EXT[mode]
        need(os.path.splitext(p["out"])[1].lower() in exts, "out",
             f"{mode} writes {', '.join(exts) or 'no files'}")
    need(p["seed"] >= 0, "seed", "must be non-negative")
    need(p["workers"] >= 1, "workers", "must be at least 1")
    if mode == "necklace":
        need(len(p["points"]) >= 3, "points", "need at least 3 polygon vertices")
    elif mode == "atom":
        need(p["n"] >= 0, "n", "must be non-negative")
        need(len(p["start_angles"]) == 2, "start_angles", "need one angle per spiral")
        need(p["guess_factor"] > 2, "guess_factor", "must exceed 2")
        need(p["amplitude"] > 0 and p["inner"] >= 0, "amplitude", "spiral radii must be positive")
    elif mode == "limitset":
        fam, poly = p.get("template") is not None, p.get("points") is not None
        need(fam != poly, "template", "give either template+params or necklace points")
        if fam:
            need(p.get("params") is not None, "params", "template needs params")
            need(len(p["params"]) == TEMPLATE_ARITY[p["template"]], "params",
                 f"template {p['template']} takes {TEMPLATE_ARITY[p['template']]} parameters")
        else:
            need(len(p["points"]) >= 3, "points", "need at least 3 polygon vertices")
        need(p["method"] in ("chaos", "bfs"), "method", "must be 'chaos' or 'bfs'")
        need(p["iterations"] >= 1, "iterations", "must be positive")
        need(p["burn_in"] >= 0 and p["streams"] >= 1, "streams", "must be positive")
        need(p["depth"] >= 1, "depth", "must be positive")
        if p.get("out", "") and p["out"].lower().endswith(".ppm"):
            need(p.get("window") is not None, "window", "image output needs a window")
    elif mode == "slice":
        arity = TEMPLATE_ARITY[p["template"]]
        need(len(p["p0"]) == arity, "p0", f"template {p['template']} takes {arity} parameters")
        need(p.get("p1") is None or len(p["p1"]) == arity, "p1",
             f"template {p['template']} takes {arity} parameters")
        need((p.get("depth") is None) != (p.get("sample") is None), "depth",
             "give exactly one of depth and sample")
        need(p.get("depth") is None or p["depth"] >= 1, "depth", "must be positive")
        need(p["tau_max"] > 0, "tau_max", "must be positive")
    elif mode == "farey-path":
        need(re.fullmatch(r"\s*\d+\s*/\s*\d+\s*", p["slope"]) is not None, "slope", "expected 'p/q'")
        need(p["R"] > 2, "R", "must exceed 2")
        need(len(p["steps"]) == 2 and min(p["steps"]) >= 1, "steps", "expected [n_hyp, n_ell], both positive")
    elif mode == "solve":
        k = TEMPLATE_ARITY[p["template"]]
        need(len(p["guess"]) == k, "guess", f"template {p['template']} takes {k} parameters")
        need(len(p["words"]) == k, "words", f"need {k} words, one per parameter")
        if p.get("targets") is None:
            p["targets"] = [4 + 0j] * k
        need(len(p["targets"]) == k, "targets", "need one target per word")
        need(p["tol"] > 0, "tol", "must be positive")
    elif mode == "verify":
        need(p["suite"] in SUITES, "suite", f"choose from {', '.join(SUITES)}")


def scene_from_dict(data, source: str = "<scene>", text: str = "") -> Scene:
    ctx = _Ctx(source, text)
    if not isinstance(data, dict):
        ctx.fail(None, "scene must be a JSON object")
    if "mode" not in data:
        ctx.fail("mode", "missing required key")
    mode = data["mode"]
    if mode not in MODES:
        ctx.fail("mode", f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    schema = {**_COMMON, **SCHEMA[mode]}
    params = {}
    for raw_key, value in data.items():
        if raw_key == "mode":
            continue
        key, scale = raw_key, 1.0
        if raw_key.endswith("_pi") and raw_key[:-3] in schema:
            key, scale = raw_key[:-3], math.pi
        if key not in schema:
            ctx.fail(raw_key, f"unknown key for mode {mode!r}")
        if key in params:
            ctx.fail(raw_key, "given twice")
        kind = schema[key][0]
        if scale != 1.0 and kind != "angle_list":
            ctx.fail(raw_key, "the _pi suffix applies to angles only")
        val = _parse(ctx, raw_key, kind, value)
        if scale != 1.0:
            val = [x * scale for x in val] if isinstance(val, list) else val * scale
        params[key] = val
    for key, (kind, default) in schema.items():
        if key == "mode" or key in params:
            continue
        if default is REQUIRED:
            ctx.fail(key, "missing required key")
        params[key] = list(default) if isinstance(default, list) else default
    _check(ctx, mode, params)
    return Scene(mode, params)


def read_scene(path) -> Scene:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SceneError(f"{path}: cannot read scene ({e.strerror})") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})") from e
    return scene_from_dict(data, str(path), text)


def loads_scene(text: str, source: str = "<string>") -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError(f"{source}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})") from e
    return scene_from_dict(data, source, text)


# writers ------------------------------------------------------------------

def ppm_bytes(image) -> bytes:
    img = np.asarray(image)
    if img.ndim == 2:
        img = np.repeat(img[:, :, None], 3, axis=2)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (H, W) or (H, W, 3) image, got shape {img.shape}")
    H, W = img.shape[:2]
    if W == 0 or H == 0:
        raise ValueError(f"image must be at least 1x1, got {W}x{H}")
    if img.dtype != np.uint8:
        if not np.issubdtype(img.dtype, np.integer) or img.min() < 0 or img.max() > 255:
            raise ValueError("image values must be 8-bit integers")
        img = img.astype(np.uint8)
    return b"P6\n%d %d\n255\n" % (W, H) + np.ascontiguousarray(img).tobytes()


def _write(path, data: bytes):
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from e


def write_ppm(image, path) -> None:
    """Binary P6, rows top to bottom; grayscale is replicated to RGB."""
    _write(path, ppm_bytes(image))


def write_text(text: str, path) -> None:
    _write(path, text.encode("ascii"))


def circles_json(shapes) -> str:
    items = []
    for s in shapes:
        if isinstance(s, Circle):
            items.append({"type": "circle", "centre": [s.centre.real, s.centre.imag], "radius": s.radius})
        elif isinstance(s, Line):
            items.append({"type": "line", "point": [s.point.real, s.point.imag],
                          "direction": [s.direction.real, s.direction.imag]})
        else:
            raise TypeError(f"cannot serialise {type(s).__name__}")
    return json.dumps(items, indent=1) + "\n"


def read_circles(text: str) -> list:
    out = []
    for item in json.loads(text):
        if item["type"] == "circle":
            out.append(Circle(complex(*item["centre"]), item["radius"]))
        else:
            out.append(Line(complex(*item["point"]), complex(*item["direction"])))
    return out
