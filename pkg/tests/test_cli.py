import json
import math

import numpy as np
import pytest

from cone_lab.cli import build_parser, main
from cone_lab.core.cone_net import ConeNet, build_T, net_components, net_density
from cone_lab.core.decay import GaugeSpec, decay_bound, synthesize_profile
from cone_lab.core.harmonic import SectorProfile
from cone_lab.core.straighten import random_admissible_curve
from cone_lab.utils.cone_io import load_net, save_net
from cone_lab.utils.data_io import load_curve, save_curve, save_density, save_profile


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _sine_profile_file(path, amplitude):
    t = np.linspace(0.0, 2.0, 4097)
    v = amplitude * np.sin(math.pi * t / 2.0)
    v[0] = v[-1] = 0.0
    save_profile(SectorProfile(2.0, v, 0.05), path)
    return path


def test_build_to_file(tmp_path, capsys):
    code, out, _ = _run(capsys, "build", "T", "-o", tmp_path / "t.json")
    assert code == 0
    assert "density/pi 1.82" in out
    assert net_density(load_net(tmp_path / "t.json")) == pytest.approx(3.0 * math.acos(-1.0 / 3.0))


def test_build_to_stdout(capsys):
    code, out, err = _run(capsys, "build", "Y")
    assert code == 0
    assert json.loads(out)["dimension"] == 3
    assert "density/pi 1.5" in err


def test_build_union_of_files(tmp_path, capsys):
    _run(capsys, "build", "plane", "--dim", 4, "-o", tmp_path / "p.json")
    assert load_net(tmp_path / "p.json").dimension == 4
    _run(capsys, "build", "Y", "-o", tmp_path / "y.json")
    code, _, _ = _run(capsys, "build", "union", "--parts", tmp_path / "p.json", tmp_path / "y.json",
                      "-o", tmp_path / "u.json")
    assert code == 0
    union = load_net(tmp_path / "u.json")
    assert net_density(union) == pytest.approx(2.5 * math.pi, abs=1e-12)
    assert len(net_components(union)) == 2


def test_build_union_needs_parts(capsys):
    code, _, _ = _run(capsys, "build", "union")
    assert code == 1


def test_build_obj(tmp_path, capsys):
    code, _, _ = _run(capsys, "build", "cube", "-o", tmp_path / "cube.obj", "--radius", 2)
    assert code == 0
    lines = (tmp_path / "cube.obj").read_text().splitlines()
    assert "v 0 0 0" in lines
    assert any(line.startswith("f ") for line in lines)


def test_validate(tmp_path, capsys):
    _run(capsys, "build", "T", "-o", tmp_path / "t.json")
    code, out, _ = _run(capsys, "validate", tmp_path / "t.json")
    assert code == 0
    assert json.loads(out)["pass"] is True

    t = build_T(3)
    save_net(ConeNet(3, t.vertices, tuple(a for a in t.arcs if a.id != "t2-t3")), tmp_path / "broken.json")
    code, out, _ = _run(capsys, "validate", tmp_path / "broken.json")
    assert code == 2
    assert {v["check"] for v in json.loads(out)["violations"]} >= {"degree"}


def test_unreadable_cone_files(tmp_path, capsys):
    (tmp_path / "bad.json").write_text("{not json")
    assert _run(capsys, "validate", tmp_path / "bad.json")[0] == 1
    assert _run(capsys, "validate", tmp_path / "missing.json")[0] == 1


def test_full_length_of_plane(tmp_path, capsys):
    _run(capsys, "build", "plane", "-o", tmp_path / "plane.json")
    code, _, _ = _run(capsys, "full-length", tmp_path / "plane.json", "--eta1", 5e-4, "--budget", 100,
                      "-o", tmp_path / "cert")
    assert code == 0
    summary = json.loads((tmp_path / "cert" / "certificate.json").read_text())
    assert summary["pass"] is True
    assert summary["C_hat"] == 0.0
    header = (tmp_path / "cert" / "samples.csv").read_text().splitlines()[0]
    assert header == "sample_id,alpha_plus,length_delta,ratio"


def test_full_length_output_is_reproducible(tmp_path, capsys):
    _run(capsys, "build", "T", "-o", tmp_path / "t.json")
    for threads, name in ((1, "a"), (2, "b")):
        code, _, _ = _run(capsys, "full-length", tmp_path / "t.json", "--eta1", 5e-4, "--budget", 300,
                          "--seed", 3, "--threads", threads, "-o", tmp_path / name)
        assert code in (0, 2)
    first = (tmp_path / "a" / "samples.csv").read_bytes()
    assert first == (tmp_path / "b" / "samples.csv").read_bytes()
    assert (tmp_path / "a" / "certificate.json").read_bytes() == (tmp_path / "b" / "certificate.json").read_bytes()


def test_epi_single_profile(tmp_path, capsys):
    path = _sine_profile_file(tmp_path / "profile.csv", 0.02)
    code, out, _ = _run(capsys, "epi", path)
    report = json.loads(out)
    assert code == 0
    assert report["pass"] is True
    assert report["saving"] > 0.0


def test_epi_flat_profile(tmp_path, capsys):
    path = _sine_profile_file(tmp_path / "flat.json", 0.0)
    code, out, _ = _run(capsys, "epi", path, "--modes", 64)
    assert code in (0, 2)
    assert json.loads(out)["saving"] == pytest.approx(0.0, abs=1e-14)


def test_epi_battery(capsys):
    code, out, _ = _run(capsys, "epi", "--battery", 2, "--seed", 7, "--modes", 256)
    report = json.loads(out)
    assert code == 0
    assert report["pass"] is True
    assert [case["case"] for case in report["cases"]] == [0, 1]


def test_epi_needs_input(capsys):
    assert _run(capsys, "epi")[0] == 1


def test_straighten_geodesic(tmp_path, capsys):
    s = np.linspace(0.0, 1.0, 401)
    save_curve(np.column_stack([np.cos(s), np.sin(s), np.zeros_like(s)]), tmp_path / "curve.csv")
    code, out, _ = _run(capsys, "straighten", tmp_path / "curve.csv", "--eta", 0.1, "--tau1", 5e-3,
                        "--curve-out", tmp_path / "out.json")
    assert code == 0
    summary = json.loads(out)
    assert summary["intervals"] == []
    points, plane = load_curve(tmp_path / "out.json")
    assert points.shape[1] == 3
    assert plane.shape == (2, 3)


def test_straighten_default_tau1(tmp_path, capsys):
    assert build_parser().parse_args(["straighten", "c.json"]).tau1 is None
    s = np.linspace(0.0, 1.0, 401)
    save_curve(np.column_stack([np.cos(s), np.sin(s), np.zeros_like(s)]), tmp_path / "curve.csv")
    code, out, _ = _run(capsys, "straighten", tmp_path / "curve.csv")
    assert code == 0
    assert json.loads(out)["tau1"] == 1e-4 * 0.05 ** 2


def test_straighten_default_tau1_rejects_bumpy_curve(tmp_path, capsys, rng):
    polyline, plane = random_admissible_curve(rng)
    save_curve(polyline, tmp_path / "bumpy.json", plane=plane)
    assert _run(capsys, "straighten", tmp_path / "bumpy.json")[0] == 1
    assert _run(capsys, "straighten", tmp_path / "bumpy.json", "--eta", 0.1, "--tau1", 5e-3)[0] == 0


def test_decay_bound_matches_library(capsys):
    code, out, _ = _run(capsys, "decay", "bound", "--fy", 0.1, "--a", 0.2, "--b", 0.1, "--C0", 1,
                        "--x", 0.01, "--y", 1)
    assert code == 0
    report = json.loads(out)
    assert report["value"] == decay_bound(0.1, 0.2, GaugeSpec.power(1.0, 0.1), 0.01, 1.0)
    assert report["gauge"]["kind"] == "power"


def test_decay_log_bound_and_envelope(capsys):
    code, out, _ = _run(capsys, "decay", "log-bound", "--fy", 0.2, "--a", 1, "--A", 1, "--b", 2,
                        "--x", 1e-4, "--y", 0.3)
    assert code == 0
    assert json.loads(out)["value"] > 0.0
    code, out, _ = _run(capsys, "decay", "weak-envelope", "--fy", 0.5, "--alpha", 0.2, "--N", 2,
                        "--x", 1e-4, "--y", 0.1)
    assert code == 0
    assert json.loads(out)["dominated"] is True


def test_decay_check_monotone(tmp_path, capsys):
    save_density(synthesize_profile(lambda r: 2.0 + 0.0 * r), tmp_path / "density.csv")
    code, out, _ = _run(capsys, "decay", "check-monotone", tmp_path / "density.csv", "--lambda", 1,
                        "--C0", 0.1, "--b", 0.5, "--C", 1)
    assert code == 0
    report = json.loads(out)
    assert report["pass"] is True
    assert report["d0"] == 2.0


@pytest.mark.parametrize("tol", ["ANGLE_TOL", "NO_SUCH_TOL=1", "ANGLE_TOL=-1"])
def test_bad_tolerance_override(tmp_path, capsys, tol):
    _run(capsys, "build", "T", "-o", tmp_path / "t.json")
    assert _run(capsys, "validate", tmp_path / "t.json", "--tol", tol)[0] == 1
