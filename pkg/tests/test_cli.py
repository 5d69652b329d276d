import json
import math
import subprocess
import sys

import numpy as np
import pytest

from helson import catalog, cli
from helson.io import validate_report
from helson.matrix import load_binary
from helson.spectral import SpectralError, eig_sym


@pytest.fixture
def measures(tmp_path):
    paths = {}
    for name in ("exp_a1", "delta_0.5", "zero", "leb", "power_-0.5", "osc_sin_1"):
        p = tmp_path / f"{name}.json"
        p.write_text(catalog.builtin()[name].dumps())
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"terms": [{"coef": 1.0, "atom": {"kind": "point", "c": 0.0}}]}')
    paths["bad"] = str(bad)
    return paths


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_exponential(measures, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"measure": measures["exp_a1"], "schur": False}))
    code, out, _ = run(["classify", "--config", str(cfg)], capsys)
    assert code == 0
    doc = json.loads(out)
    validate_report(doc)
    res = doc["result"]
    assert res["verdict"] == "BoundedNonCompact"
    assert res["envelope"]["C"] == 1.0 and res["envelope"]["D"] == 1.0


def test_spectrum_point_mass(measures, capsys):
    code, out, _ = run(["spectrum", "--measure", measures["delta_0.5"], "--n", "100"], capsys)
    assert code == 0
    ev = json.loads(out)["result"]["eigenvalues"]
    m = np.arange(2, 102, dtype=float)
    assert ev[0] == pytest.approx(math.fsum(m ** -2.0), rel=1e-13)
    assert max(abs(v) for v in ev[1:]) <= 1e-10


def test_build_zero_csv(measures, capsys):
    code, out, _ = run(["build", "--measure", measures["zero"], "--n", "8"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m\\n,2,3,4,5,6,7,8,9"
    assert len(lines) == 9
    assert all(float(v) == 0.0 for ln in lines[1:] for v in ln.split(",")[1:])


def test_binary_round_trip_matches_pipeline(measures, tmp_path, capsys):
    out_bin = tmp_path / "h.bin"
    code, _, _ = run(["build", "--measure", measures["exp_a1"], "--n", "48",
                      "--format", "bin", "--out", str(out_bin)], capsys)
    assert code == 0
    loaded = eig_sym(load_binary(out_bin))
    code, out, _ = run(["spectrum", "--measure", measures["exp_a1"], "--n", "48"], capsys)
    piped = json.loads(out)["result"]
    assert piped["eigenvalues"] == loaded.eigenvalues
    assert piped["trace"] == loaded.trace


def test_output_is_deterministic(measures, tmp_path, capsys):
    outs = []
    for i in range(2):
        p = tmp_path / f"o{i}.json"
        assert cli.main(["schatten", "--measure", measures["delta_0.5"], "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert len(doc["config_hash"]) == 64 and doc["version"]


def test_csv_report(measures, capsys):
    code, out, _ = run(["classify", "--measure", measures["delta_0.5"], "--format", "csv"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "key,value"
    assert "result.verdict,TraceClass" in rows


def test_signed_schatten(measures, capsys):
    code, out, _ = run(["schatten", "--measure", measures["osc_sin_1"]], capsys)
    assert code == 0
    row = json.loads(out)["result"]["series"][0]
    assert row["kind"] == "mod-mu-trace" and row["verdict"] == "converges"


def test_diff_and_predict(measures, capsys):
    code, out, _ = run(["diff", "--measure", measures["leb"], "--measure2", measures["exp_a1"],
                        "--n", "64"], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["min_eigenvalue"] >= -1e-10 and res["series"]["verdict"] == "converges"
    code, out, _ = run(["predict", "--measure", measures["exp_a1"], "--n", "64"], capsys)
    assert json.loads(out)["result"]["sigma_ac"] == [0.0, math.pi]


def test_bounds_unbounded_witness(measures, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"measure": measures["power_-0.5"], "c_target": 2.0}))
    code, out, _ = run(["bounds", "--config", str(cfg)], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["witness"]["pass"] is True
    assert res["schur_bound"]["inconclusive"] is True


def test_report_combines_sections(measures, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"measure": measures["delta_0.5"], "n": 32, "schur": False}))
    code, out, _ = run(["report", "--config", str(cfg)], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert {"spectrum", "bounds", "classify", "schatten", "predict"} <= set(res)
    assert "skipped" in res["predict"]


# -- errors -------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--measure", "/nonexistent.json"],
    ["build", "--measure", "{m}", "--n", "0"],
    ["spectrum", "--measure", "{m}", "--format", "bin"],
    ["diff", "--measure", "{m}"],
    ["nope"],
])
def test_config_errors_exit_one(argv, measures, capsys):
    argv = [a.replace("{m}", measures["exp_a1"]) for a in argv]
    code, _, err = run(argv, capsys)
    assert code == 1
    doc = json.loads(err.strip().splitlines()[-1])
    assert doc["exit_code"] == 1


def test_inadmissible_measure_exit_one(measures, capsys):
    code, _, err = run(["classify", "--measure", measures["bad"]], capsys)
    assert code == 1 and "c=0 point mass" in json.loads(err)["message"]


def test_unknown_config_key_rejected(measures, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"measure": measures["exp_a1"], "colour": "blue"}))
    code, _, err = run(["classify", "--config", str(cfg)], capsys)
    assert code == 1 and "schema" in json.loads(err)["message"]


def test_nonconvergence_exit_two(measures, monkeypatch, capsys):
    def boom(*a, **k):
        raise SpectralError("did not converge", estimate=1.0, residual=0.5)
    monkeypatch.setattr(cli, "eig_sym", boom)
    code, _, err = run(["spectrum", "--measure", measures["exp_a1"], "--n", "8"], capsys)
    assert code == 2
    doc = json.loads(err)
    assert doc["error"] == "non-convergence" and doc["achieved_error"] == 0.5


def test_module_entry_point(measures):
    proc = subprocess.run([sys.executable, "-m", "helson", "build", "--measure",
                           measures["zero"], "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "m\\n,2,3"
