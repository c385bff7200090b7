import json
import math
from pathlib import Path

import numpy as np
import pytest

from kleinian import Circle, Line
from kleinian.errors import SceneError
from kleinian.io import circles_json, loads_scene, ppm_bytes, read_circles, read_scene, write_ppm

HEADER_1x1 = b"P6\n1 1\n255\n"


def test_ppm_fixtures(tmp_path):
    assert ppm_bytes(np.zeros((1, 1), np.uint8)) == HEADER_1x1 + b"\x00\x00\x00"
    assert ppm_bytes(np.array([[0, 255]], np.uint8)) == b"P6\n2 1\n255\n" + b"\x00" * 3 + b"\xff" * 3
    rgb = np.array([[[1, 2, 3]], [[4, 5, 6]]], np.uint8)
    assert ppm_bytes(rgb) == b"P6\n1 2\n255\n\x01\x02\x03\x04\x05\x06"
    path = tmp_path / "a.ppm"
    write_ppm(np.zeros((1, 1), np.uint8), path)
    assert path.read_bytes() == HEADER_1x1 + b"\x00\x00\x00"


def test_ppm_validation(tmp_path):
    with pytest.raises(ValueError, match="at least 1x1"):
        ppm_bytes(np.zeros((1, 0), np.uint8))
    with pytest.raises(ValueError):
        ppm_bytes(np.array([[256]]))
    with pytest.raises(OSError, match="cannot write"):
        write_ppm(np.zeros((1, 1), np.uint8), tmp_path / "missing" / "a.ppm")


def test_solomon_scene():
    text = json.dumps({"mode": "slice", "template": "compression_body",
                       "p0": [[2, 0], [2, 0], [1, 0]], "p1": [[2, 2], [2, -2], [1, 0]],
                       "test_point": [2, 0], "depth": 4,
                       "window": {"centre": [0, 0], "width": 4, "height": 4, "W": 8, "H": 8}})
    scene = loads_scene(text)
    assert scene.mode == "slice"
    assert scene["p1"] == [2 + 2j, 2 - 2j, 1]
    assert scene["seed"] == 0 and scene["tau_max"] == 2.0


def test_necklace_scene():
    pts = [[math.cos(k * math.pi / 4), math.sin(k * math.pi / 4)] for k in range(8)]
    scene = loads_scene(json.dumps({"mode": "necklace", "points": pts}))
    assert len(scene["points"]) == 8


def test_missing_mode_names_key():
    with pytest.raises(SceneError, match="'mode'"):
        loads_scene('{"points": []}')


def test_unknown_key_reports_line():
    text = '{\n "mode": "verify",\n "suite": "all",\n "colour": 3\n}'
    with pytest.raises(SceneError, match=r"<string>:4: key 'colour'"):
        loads_scene(text)


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "mode": "atom",\n "n": 3,,\n}')
    with pytest.raises(SceneError, match=r"bad.json:3:"):
        read_scene(path)


@pytest.mark.parametrize("scene, key", [
    ({"mode": "slice", "template": "grandma", "p0": [1, 2], "test_point": 0, "depth": 2,
      "window": {"centre": 0, "width": 1, "height": 1, "W": 1, "H": 1}}, "p0"),
    ({"mode": "necklace", "points": [[0, 0], [1, 0]]}, "points"),
    ({"mode": "farey-path", "slope": "three fifths"}, "slope"),
    ({"mode": "atom", "n": -1}, "n"),
    ({"mode": "atom", "n": 2.5}, "n"),
    ({"mode": "verify", "suite": "none"}, "suite"),
    ({"mode": "slice", "template": "grandma", "p0": [1, 2, 3], "test_point": 0, "depth": 2,
      "window": {"centre": 0, "width": 1, "height": 1, "W": 0, "H": 1}}, "window"),
    ({"mode": "necklace", "points": [[0, 0], [1, 0], [0, 1]], "out": "x.ppm"}, "out"),
    ({"mode": "limitset", "template": "riley", "params": [1], "points": [0, 1, [0, 1]]}, "template"),
])
def test_validation_errors(scene, key):
    with pytest.raises(SceneError, match=f"'{key}'"):
        loads_scene(json.dumps(scene))


def test_pi_suffix():
    scene = loads_scene('{"mode": "atom", "start_angles_pi": [1, 0.5]}')
    assert scene["start_angles"] == [math.pi, math.pi / 2]
    with pytest.raises(SceneError):
        loads_scene('{"mode": "atom", "n_pi": 2}')
    with pytest.raises(SceneError, match="twice"):
        loads_scene('{"mode": "atom", "start_angles_pi": [1, 0], "start_angles": [1, 0]}')


def test_scene_round_trip():
    scenes = sorted((Path(__file__).parent.parent / "scenes").glob("*.json"))
    assert scenes
    for path in scenes:
        a = read_scene(path)
        b = loads_scene(a.to_json())
        assert a == b
        assert b.to_json() == a.to_json()


def test_circle_json_round_trip():
    shapes = [Circle(1 + 2j, 0.5), Line(1j, 1)]
    text = circles_json(shapes)
    data = json.loads(text)
    assert data[0] == {"type": "circle", "centre": [1.0, 2.0], "radius": 0.5}
    assert data[1]["type"] == "line"
    assert read_circles(text) == shapes
