"""``kleinian`` command line: one subcommand per scene mode."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .errors import NumericalError, SceneError
from .families import GENERATOR_NAMES, FamilySpec, instantiate
from .limits import bfs_orbit, chaos_game, rasterize
from .necklace import SpiralSpec, atom_circles, necklace_circles, necklace_generators, refine_polygon
from .slices import Window, colormap, render_slice
from .traces import Slope, cone_path, polish_system, system_residual
from .verify import run_suite
from .words import parse_word

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


def _window(d) -> Window:
    return Window(d["centre"], d["width"], d["height"], d["W"], d["H"])


def _out(scene, default: str | None = None) -> Path | None:
    out = scene.get("out") or default
    return Path(out) if out else None


def run_necklace(scene):
    circles = necklace_circles(refine_polygon(scene["points"]))
    necklace_generators(circles)  # tangency check
    text = io.circles_json(circles)
    out = _out(scene)
    io.write_text(text, out) if out else sys.stdout.write(text)
    return EXIT_OK


def run_atom(scene):
    spec = SpiralSpec(n=scene["n"], growth=scene["growth"], inner=scene["inner"],
                      amplitude=scene["amplitude"], start_angles=tuple(scene["start_angles"]),
                      guess_factor=scene["guess_factor"])
    text = io.circles_json(atom_circles(spec))
    out = _out(scene)
    io.write_text(text, out) if out else sys.stdout.write(text)
    return EXIT_OK


def run_limitset(scene):
    if scene.get("template") is not None:
        gens = instantiate(scene["template"], scene["params"])
    else:
        gens = necklace_generators(necklace_circles(refine_polygon(scene["points"])))
    if scene["method"] == "chaos":
        cloud = chaos_game(gens, scene["iterations"], seed=scene["seed"], burn_in=scene["burn_in"],
                           streams=scene["streams"])
    else:
        cloud = bfs_orbit(gens, scene["depth"])
    if cloud.meta.get("dropped"):
        _warn(f"dropped {cloud.meta['dropped']} points at or near infinity")
    out = _out(scene)
    if out is None:
        sys.stdout.write(cloud.to_csv())
    elif out.suffix.lower() == ".csv":
        io.write_text(cloud.to_csv(), out)
    else:
        counts = rasterize(cloud, _window(scene["window"])).values
        io.write_ppm(np.where(counts > 0, 0, 255).astype(np.uint8), out)
    return EXIT_OK


def run_slice(scene):
    spec = FamilySpec(scene["template"], tuple(scene["p0"]),
                      None if scene.get("p1") is None else tuple(scene["p1"]))
    raster = render_slice(spec, scene["test_point"], _window(scene["window"]), depth=scene.get("depth"),
                          sample=scene.get("sample"), seed=scene["seed"], tol=scene["tol"],
                          workers=scene["workers"])
    if raster.meta["degenerate"]:
        _warn(f"{raster.meta['degenerate']} pixels have a singular generator (value 0)")
    out = _out(scene)
    if out is None:
        sys.stdout.write(raster.to_csv())
    elif out.suffix.lower() == ".csv":
        io.write_text(raster.to_csv(), out)
    else:
        io.write_ppm(colormap(raster, scene["tau_max"]), out)
    return EXIT_OK


def run_farey_path(scene):
    n_hyp, n_ell = scene["steps"]
    path = cone_path(Slope.parse(scene["slope"]), scene["R"], n_hyp, n_ell)
    out = _out(scene)
    io.write_text(path.to_csv(), out) if out else sys.stdout.write(path.to_csv())
    return EXIT_OK


def run_solve(scene):
    names = GENERATOR_NAMES[scene["template"]]
    try:
        words = [parse_word(w, names) for w in scene["words"]]
    except ValueError as e:
        raise SceneError(f"key 'words': {e}") from e
    sol = polish_system(words, scene["template"], scene["targets"], scene["guess"], tol=scene["tol"])
    res = system_residual(words, scene["template"], scene["targets"], sol)
    text = json.dumps({"params": [[z.real, z.imag] for z in sol], "residual": res}, indent=1) + "\n"
    out = _out(scene)
    io.write_text(text, out) if out else sys.stdout.write(text)
    return EXIT_OK


def run_verify(scene):
    t0 = time.perf_counter()
    checks = run_suite(scene["suite"])
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} passed in {time.perf_counter() - t0:.2f} s")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


RUNNERS = {
    "necklace": run_necklace, "atom": run_atom, "limitset": run_limitset, "slice": run_slice,
    "farey-path": run_farey_path, "solve": run_solve, "verify": run_verify,
}
# modes that can run on defaults alone
NO_CONFIG = {"atom", "farey-path", "verify"}


def _steps(text: str) -> list[int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected n_hyp,n_ell") from None
    return [a, b]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kleinian", description="Kleinian group pictures and trace computations.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in RUNNERS:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="JSON scene file")
        p.add_argument("--out", help="output path (extension picks the format)")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        if mode == "farey-path":
            p.add_argument("--slope", help="p/q")
            p.add_argument("--R", type=float)
            p.add_argument("--steps", type=_steps, help="n_hyp,n_ell")
        if mode == "verify":
            p.add_argument("--suite", choices=io.SUITES)
    return parser


def load(args) -> io.Scene:
    if args.config:
        path = Path(args.config)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SceneError(f"{path}: cannot read scene ({e.strerror})") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SceneError(f"{path}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})") from e
        if not isinstance(data, dict):
            raise SceneError(f"{path}: scene must be a JSON object")
        if data.get("mode", args.mode) != args.mode:
            raise SceneError(f"{path}: scene mode {data.get('mode')!r} does not match subcommand {args.mode!r}")
        source = str(path)
    elif args.mode in NO_CONFIG:
        data, text, source = {}, "", "<flags>"
    else:
        raise SceneError(f"{args.mode} needs --config")
    data = dict(data, mode=args.mode)
    for key in ("out", "seed", "workers", "slope", "R", "steps", "suite"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    return io.scene_from_dict(data, source, text)


def run_cli(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scene = load(args)
        return RUNNERS[scene.mode](scene)
    except SceneError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e.strerror or e}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError, ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
