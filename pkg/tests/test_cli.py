import csv
import json

import numpy as np
import pytest

from pulseforge import cli


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_pi_writes_files(tmp_path, capsys):
    stem = tmp_path / "pi5"
    code, out, _ = run(["sweep", "--case", "1", "--pulse", "pi", "--n", "5", "--phase", "same",
                        "--error", "rabi", "--out", str(stem)], capsys)
    assert code == 0
    assert "fwhm=0.1456" in out
    raw = (tmp_path / "pi5.csv").read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["error", "population"] and len(rows) == 2002
    x = np.array([float(r[0]) for r in rows[1:]])
    p = np.array([float(r[1]) for r in rows[1:]])
    np.testing.assert_allclose(p, np.cos(5 * x * np.pi / 2) ** 4, atol=1e-8)
    svg = (tmp_path / "pi5.svg").read_text()
    assert svg.startswith("<?xml") and "<polyline" in svg and 'version="1.1"' in svg
    manifest = json.loads((tmp_path / "pi5.manifest.json").read_text())
    assert manifest["command"] == "sweep" and manifest["integrator"]["steps_per_T"] == 4000
    assert manifest["config"]["grid"] == [-0.5, 0.5, 2001]


def test_sweep_csv_round_trips_full_precision(tmp_path, capsys):
    stem = tmp_path / "ae"
    run(["sweep", "--case", "1", "--pulse", "allen_eberly", "--n", "3", "--grid=-0.2:0.2:5", "--out", str(stem)], capsys)
    rows = list(csv.reader((tmp_path / "ae.csv").read_text().splitlines()))[1:]
    for _, pop in rows:
        assert repr(float(pop)) == pop


def test_sweep_cds_fixed_error_is_flat(tmp_path, capsys):
    stem = tmp_path / "cds"
    code, _, _ = run(["sweep", "--case", "2", "--pulse", "cds", "--n", "4", "--phase", "alt",
                      "--assign", "fixed-s", "--error", "arm", "--out", str(stem)], capsys)
    assert code == 0
    pops = [float(r[1]) for r in list(csv.reader((tmp_path / "cds.csv").read_text().splitlines()))[1:]]
    np.testing.assert_allclose(pops, 1.0, atol=1e-12)


def test_sweep_single_point_grid(tmp_path, capsys):
    stem = tmp_path / "one"
    code, _, _ = run(["sweep", "--case", "1", "--pulse", "sta", "--grid", "0:0:1", "--out", str(stem)], capsys)
    assert code == 0
    lines = (tmp_path / "one.csv").read_text().splitlines()
    assert len(lines) == 2 and lines[1].startswith("0.0,")
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-6)


def test_svg_does_not_touch_csv(tmp_path, capsys):
    stem = tmp_path / "s"
    args = ["sweep", "--case", "1", "--pulse", "pi", "--n", "3", "--grid=-0.3:0.3:61", "--out", str(stem)]
    run(args, capsys)
    first = (tmp_path / "s.csv").read_bytes()
    (tmp_path / "s.svg").unlink()
    run(args, capsys)
    assert (tmp_path / "s.csv").read_bytes() == first


@pytest.mark.parametrize("args", [
    ["sweep", "--case", "1", "--pulse", "pi", "--error", "arm"],
    ["sweep", "--case", "2", "--pulse", "cds", "--error", "detuning"],
    ["sweep", "--case", "2", "--pulse", "pi"],
    ["sweep", "--case", "1", "--pulse", "pi", "--assign", "alt"],
    ["sweep", "--case", "1", "--pulse", "pi", "--order", "alt"],
    ["sweep", "--case", "1", "--pulse", "pi", "--grid", "0:1:5"],
    ["sweep", "--case", "1", "--pulse", "pi", "--grid", "nonsense"],
    ["sweep", "--case", "3", "--pulse", "pi"],
    ["table", "--id", "4"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(args, capsys)
    assert code == 2
    assert err.strip()
    assert not list(tmp_path.iterdir())


def test_reason_is_one_line(capsys):
    code, _, err = run(["sweep", "--case", "1", "--pulse", "pi", "--error", "arm"], capsys)
    assert code == 2 and len(err.strip().splitlines()) == 1


def test_table_two(tmp_path, capsys):
    code, out, _ = run(["table", "--id", "2", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.reader((tmp_path / "table2.csv").read_text().splitlines()))
    assert rows[0] == ["scheme", "N", "computed", "paper", "abs_dev", "rel_dev"]
    assert len(rows) == 13
    assert "12/12 cells within tolerance" in out


def test_table_uniform_tolerance_can_fail(tmp_path, capsys):
    code, out, _ = run(["table", "--id", "2", "--tolerance", "1e-6", "--out-dir", str(tmp_path)], capsys)
    assert code == 1
    assert "FAIL" in out
    code, _, _ = run(["table", "--id", "2", "--tolerance", "-1", "--out-dir", str(tmp_path)], capsys)
    assert code == 2


def test_replay_reproduces_outputs(tmp_path, capsys):
    stem = tmp_path / "r"
    run(["sweep", "--case", "2", "--pulse", "stirap_sin", "--n", "2", "--phase", "alt", "--order", "alt",
         "--error", "arm", "--assign", "alt", "--grid=-0.2:0.2:21", "--out", str(stem)], capsys)
    first = (tmp_path / "r.csv").read_bytes()
    svg = (tmp_path / "r.svg").read_bytes()
    (tmp_path / "r.csv").unlink()
    code, _, _ = run(["replay", str(tmp_path / "r.manifest.json")], capsys)
    assert code == 0
    assert (tmp_path / "r.csv").read_bytes() == first
    assert (tmp_path / "r.svg").read_bytes() == svg
    code, _, _ = run(["replay", str(tmp_path / "missing.json")], capsys)
    assert code == 2
