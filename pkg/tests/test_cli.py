import json
import subprocess
import sys

import numpy as np
import pytest

from streamsym.cli import main
from streamsym.contours import extract_contours
from streamsym.export import (contours_from_json, contours_to_json, field_from_csv,
                              field_from_json, field_to_csv, field_to_json, read_field)
from streamsym.fields import sample_grid
from streamsym.grid import Grid
from streamsym.presets import PRESETS, build_preset
from streamsym.verify import pde_residual, random_points


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_shows_catalog(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    for name in ("eq10", "eq13", "eq30", "eq35", "eq37", "eq39a", "eq39b", "eq40a", "eq40b",
                 "eq28", "eq27", "eq34", "eq36", "eq38", "eq41"):
        assert name in names
    assert len(names) >= 15


def test_unknown_preset_is_config_error(capsys):
    code, _, err = run(["sample", "--preset", "eq99"], capsys)
    assert code == 2
    assert "eq30" in err


def test_bad_grid_and_group_are_config_errors(capsys):
    assert run(["sample", "--preset", "eq30", "--grid", "1:2"], capsys)[0] == 2
    assert run(["sample", "--preset", "eq30", "--group", "G7:1"], capsys)[0] == 2
    assert run(["sample", "--preset", "eq30", "--family", "log"], capsys)[0] == 2


def test_singular_only_grid_is_domain_error(capsys):
    code, _, err = run(["sample", "--preset", "eq28", "--t", "0.01"], capsys)
    assert code == 3 and "domain" in err


def test_sample_csv_round_trip(capsys, tmp_path):
    out = tmp_path / "psi.csv"
    code, _, _ = run(["sample", "--preset", "eq30", "--grid", "-3:3:-1:1:31x21", "--t", "0.5",
                      "--format", "csv", "--out", str(out)], capsys)
    assert code == 0
    field, config = field_from_csv(out.read_text())
    assert config["preset"] == "eq30"
    direct = sample_grid(build_preset("eq30"), Grid(-3, 3, -1, 1, 31, 21), 0.5)
    np.testing.assert_array_equal(field.values, direct.values)
    assert out.read_text().splitlines()[4] == "x,y,value"


def test_sample_then_contour_is_byte_identical(capsys, tmp_path):
    for fmt in ("csv", "json"):
        out = tmp_path / ("psi." + fmt)
        run(["sample", "--preset", "eq28", "--grid", "-2:2:41x41", "--format", fmt,
             "--out", str(out)], capsys)
        field, config = read_field(out.read_text())
        assert field.mask.sum() == 1
        reread = contours_to_json(extract_contours(field, 9), field.t)
        direct_field = sample_grid(build_preset("eq28"), Grid(-2, 2, -2, 2, 41, 41), 1.0)
        direct = contours_to_json(extract_contours(direct_field, 9), direct_field.t)
        assert reread == direct


def test_json_field_masks_are_null(tmp_path):
    field = sample_grid(build_preset("eq28"), Grid(-1, 1, -1, 1, 3, 3), 1.0)
    doc = json.loads(field_to_json(field, {"k": 1}))
    assert doc["values"][1][1] is None and doc["mask"][1][1] is True
    back, config = field_from_json(field_to_json(field))
    np.testing.assert_array_equal(back.mask, field.mask)
    assert "nan" in field_to_csv(field)


def test_contour_command(capsys):
    code, out, _ = run(["contour", "--preset", "eq30", "--grid", "-6.28:6.28:101x101",
                        "--t", "0", "--levels", "9"], capsys)
    assert code == 0
    sets, config = contours_from_json(out)
    assert len(sets) == 9
    assert all(s.polylines for s in sets)


def test_contour_explicit_levels_and_csv(capsys):
    code, out, _ = run(["contour", "--preset", "eq28", "--grid", "-2:2:41x41",
                        "--levels", "0.5,1.0", "--format", "csv"], capsys)
    assert code == 0
    rows = [r for r in out.splitlines() if not r.startswith("#")]
    assert rows[0] == "level,polyline,closed,x,y"
    assert {r.split(",")[0] for r in rows[1:]} == {"0.5", "1"}


def test_family_and_groups(capsys):
    code, out, _ = run(["sample", "--family", "tanh", "--k1", "1.5", "--omega", "0.2",
                        "--group", "G3:0.1", "--group", "Galpha:0.5:sine(1,2)",
                        "--grid", "-1:1:5x5", "--t", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["groups"] == ["G3(0.1)", "Galpha(0.5, sine(1.0,2.0))"]
    assert doc["config"]["params"]["k1"] == 1.5


@pytest.mark.parametrize("quantity", ["psi", "u", "v", "vorticity", "pressure"])
def test_every_quantity(capsys, quantity):
    code, out, _ = run(["sample", "--preset", "eq34", "--grid", "-1:1:9x9",
                        "--quantity", quantity], capsys)
    assert code == 0
    assert json.loads(out)["quantity"] == quantity


def test_frames_one_file_per_time(capsys, tmp_path):
    code, out, _ = run(["frames", "--preset", "eq30", "--grid", "-3.14:3.14:-1:1:41x21",
                        "--t", "0", "--t", "1", "--t", "2", "--out", str(tmp_path)], capsys)
    assert code == 0
    files = sorted(tmp_path.iterdir())
    assert [f.name for f in files] == ["frame_0000.json", "frame_0001.json", "frame_0002.json"]
    times = [json.loads(f.read_text())["t"] for f in files]
    assert times == [0.0, 1.0, 2.0]


def test_frames_as_contours(capsys, tmp_path):
    code, _, _ = run(["frames", "--preset", "eq41", "--grid", "-2:2:41x41", "--t", "1",
                      "--t", "2", "--levels", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    for f in sorted(tmp_path.iterdir()):
        assert len(json.loads(f.read_text())["contours"]) == 5


def test_verify_passes_for_symmetry_preset(capsys):
    code, out, err = run(["verify", "--preset", "eq34", "--re", "1.0"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"]
    (suite,) = doc["suites"]
    assert suite["order_estimate"] >= 1.8
    assert "PASS" in err


def test_verify_harmonic_runs_both_suites(capsys):
    code, out, _ = run(["verify", "--preset", "eq35", "--points", "10"], capsys)
    assert code == 0
    assert [s["kind"] for s in json.loads(out)["suites"]] == ["pde", "laplace"]


def test_verify_failure_exit_status(capsys):
    # 1e-12 is below the attainable finite-difference residual
    code, out, err = run(["verify", "--preset", "eq30", "--tolerance", "1e-12"], capsys)
    assert code == 1
    assert not json.loads(out)["passed"] and "FAIL" in err


def test_wrong_reynolds_number_is_detected():
    s = build_preset("eq10")
    r = pde_residual(s, random_points(s, PRESETS["eq10"].window), re_number=5.0)
    assert not r.passed()


def test_determinism(capsys, tmp_path):
    for argv in (["sample", "--preset", "eq37", "--format", "csv"],
                 ["contour", "--preset", "eq41", "--t", "2"],
                 ["verify", "--preset", "eq36"]):
        first = run(argv, capsys)[1]
        second = run(argv, capsys)[1]
        assert first == second and first


def test_module_entry_point_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "streamsym", "list"], capture_output=True)
    assert ok.returncode == 0 and b"eq41" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "streamsym", "sample", "--preset", "nope"],
                         capture_output=True)
    assert bad.returncode == 2
