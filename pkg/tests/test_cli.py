import json

import pytest

from braidfib.cli import main
from braidfib.polyloops import PolyLoop
from braidfib.trigcurves import TrigCurve


@pytest.fixture(scope="module")
def loops(tmp_path_factory):
    d = tmp_path_factory.mktemp("loops")
    half = d / "half.json"
    PolyLoop.closed_form([TrigCurve([1], [-0.25]), TrigCurve.zero()]).save(half)
    cusp = d / "cusp.json"
    PolyLoop.closed_form([TrigCurve([2], [-1.0]), TrigCurve.zero(),
                          TrigCurve.zero()]).save(cusp)
    bad = d / "collide.json"
    PolyLoop.closed_form([TrigCurve.zero(), TrigCurve.zero(),
                          TrigCurve([1], [-1.5]), TrigCurve.zero()]).save(bad)
    return {"half": str(half), "cusp": str(cusp), "bad": str(bad)}


def test_analyze_exit_codes(tmp_path, loops):
    out = tmp_path / "r.json"
    assert main(["analyze", "--builtin", "52", "--grid-n", "1024",
                 "--out", str(out)]) == 3
    rep = json.loads(out.read_text())
    assert rep["count"] == 6 and rep["p_fibered"] is False
    assert rep["tool"] == "braidfib" and "version" in rep and "config" in rep

    assert main(["analyze", "--loop", loops["half"], "--grid-n", "256",
                 "--out", str(tmp_path / "h.json")]) == 0
    assert main(["analyze", "--loop", loops["bad"], "--grid-n", "64"]) == 2
    assert main(["analyze", "--loop", str(tmp_path / "missing.json")]) == 2
    assert main(["analyze"]) == 2  # no input source


def test_word_input(tmp_path):
    wf = tmp_path / "w.txt"
    wf.write_text("n=2 scheme=artin\ns1 s1 s1\n")
    out = tmp_path / "w.json"
    code = main(["analyze", "--word", str(wf), "--grid-n", "256",
                 "--out", str(out)])
    # a parametrized homogeneous word may or may not come out fibration-exact
    assert code in (0, 3)
    rep = json.loads(out.read_text())
    assert rep["count"] >= 0 and (code == 0) == rep["p_fibered"]


def test_diagram_and_fiber_word(tmp_path):
    out = tmp_path / "d.json"
    svg = tmp_path / "d.svg"
    assert main(["diagram", "--builtin", "52", "--grid-n", "512",
                 "--svg", str(svg), "--fiber-word", "--phi", "3.1",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["diagram"]["tangencies"]) == 6
    assert rep["diagram"]["rampichini"] is False
    assert rep["fiber_word"]["euler_characteristic"] == -1
    assert svg.read_bytes().startswith(b"<?xml")
    # a critical phi is refused with exit 5
    bad_phi = rep["diagram"]["tangencies"][0]["arg"]
    assert main(["diagram", "--builtin", "52", "--grid-n", "512",
                 "--fiber-word", "--phi", bad_phi]) == 5


def test_fibers_and_exit5(tmp_path, loops):
    out = tmp_path / "f.json"
    assert main(["fibers", "--loop", loops["half"], "--phi", "0.9",
                 "--grid", "48,48,96", "--radius", "3.0", "--out", str(out),
                 "--mesh-dir", str(tmp_path / "meshes")]) == 0
    rep = json.loads(out.read_text())
    assert rep["sweep"]["rows"][0]["chi"] == 1
    assert (tmp_path / "meshes" / "fiber_000.obj").exists()
    assert (tmp_path / "meshes" / "fiber_000.ply").exists()
    # a critical phi is refused with exit 5, a too-coarse grid with exit 2
    assert main(["fibers", "--builtin", "52", "--phi", "1.5000486",
                 "--grid", "96,96,192"]) == 5
    assert main(["fibers", "--builtin", "52", "--phi", "3.14",
                 "--grid", "24,24,64"]) == 2


def test_singularity_exit_codes(tmp_path, loops):
    out = tmp_path / "s.json"
    assert main(["singularity", "--loop", loops["cusp"], "--out", str(out),
                 "--newton", str(tmp_path / "n.svg")]) == 0
    rep = json.loads(out.read_text())
    assert rep["k"] == 2
    assert rep["newton"]["radially_weighted_homogeneous"] is True
    assert rep["cone_check"]["passed"] is True
    assert main(["singularity", "--loop", loops["half"]]) == 6


def test_outputs_byte_identical(tmp_path, loops):
    out = tmp_path / "a.json"
    assert main(["analyze", "--loop", loops["half"], "--grid-n", "256",
                 "--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(["analyze", "--loop", loops["half"], "--grid-n", "256",
                 "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_config_file_flags_win(tmp_path, loops):
    cfg = tmp_path / "c.toml"
    cfg.write_text('grid-n = 128\nloop = "%s"\n' % loops["half"])
    out = tmp_path / "c.json"
    assert main(["--config", str(cfg), "analyze", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["grid_n"] == 128
    # explicit flag beats the config value
    assert main(["--config", str(cfg), "analyze", "--grid-n", "256",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["grid_n"] == 256
