import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cp2bands.cli import main, symmetry_table
from cp2bands.config import SCHEMA_VERSION, RunConfig, dump_config, load_config
from cp2bands.errors import ConfigError

GOLDEN = Path(__file__).parent / "golden"

# coarse settings that still resolve every invariant
FAST = {
    "line_grid_t": 32,
    "line_grid_phi": 64,
    "volume_grid": 8,
    "search_grid": 4,
    "search_sweeps": 10,
    "degeneracy_resolution": 11,
}


def write_config(tmp_path, **kw):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(kw))
    return str(path)


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_module_entry_point(tmp_path):
    out = tmp_path / "o"
    res = subprocess.run(
        [sys.executable, "-m", "cp2bands", "spectrum", "--n", "1", "--lambda", "0", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip() == str(out / "spectrum.csv")


def test_spectrum_default_grid(tmp_path):
    assert main(["spectrum", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "spectrum.csv")
    assert len(rows) == 45 * 101
    bands = json.loads((tmp_path / "bands.json").read_text())
    assert bands["schema_version"] == SCHEMA_VERSION
    assert len(bands["records"]) == 101
    assert bands["records"][0]["counts"] == [15, 15, 15]
    assert bands["records"][-1]["counts"] == [24, 21]


def test_spectrum_golden(tmp_path):
    assert main(["spectrum", "--n", "1", "--lambda", "0", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "spectrum.csv").read_text() == (GOLDEN / "spectrum_N1_lambda0.csv").read_text()
    rec = json.loads((tmp_path / "bands.json").read_text())["records"]
    assert rec == [{"lambda": 0.0, "counts": [3, 3, 3], "ambiguous": False}]


def test_spectrum_selected_lambdas(tmp_path):
    assert main(["spectrum", "--lambda", "0.2", "0.9", "--out", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "bands.json").read_text())["records"]
    assert [r["counts"] for r in rec] == [[15, 15, 15], [24, 21]]


def test_spectrum_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["spectrum", "--n", "3", "--out", str(d)]) == 0
    for name in ("spectrum.csv", "bands.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_symmetry_golden(tmp_path):
    assert main(["symmetry", "--n", "3", "--out", str(tmp_path)]) == 0
    got = json.loads((tmp_path / "symmetry.json").read_text())
    assert got == json.loads((GOLDEN / "symmetry_N3.json").read_text())


def test_symmetry_table_dimensions():
    t = symmetry_table(6)
    assert t["Line"]["dimension"] == 36
    assert t["Orth"]["dimension"] == 48


def test_config_round_trip(tmp_path):
    cfg = RunConfig(N=3, lambdas=(0.1, 0.5), gap_factor=7.5, seed=4)
    dump_config(cfg, tmp_path / "c.json")
    assert load_config(tmp_path / "c.json") == cfg
    assert json.loads((tmp_path / "c.json").read_text())["schema_version"] == SCHEMA_VERSION


def test_dump_config_from_cli(tmp_path):
    cfg = write_config(tmp_path, N=2, lambda_steps=3)
    out = tmp_path / "o"
    assert main(["spectrum", "--config", cfg, "--out", str(out), "--dump-config"]) == 0
    dumped = load_config(out / "config.json")
    assert dumped.N == 2 and dumped.lambda_steps == 3 and dumped.out == str(out)
    assert len(read_csv(out / "spectrum.csv")) == 18 * 3


@pytest.mark.parametrize(
    "payload",
    [{"N": 0}, {"bogus": 1}, {"lambda_min": 0.5, "lambda_max": 0.2}, {"gap_factor": 0.5}, {"schema_version": 9}],
)
def test_config_rejects(payload):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(payload)


def test_bad_config_exit_status(tmp_path, capsys):
    cfg = write_config(tmp_path, N=-2)
    assert main(["symmetry", "--config", cfg]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["symmetry", "--config", str(tmp_path / "nope.json")]) == 2


def test_verify_passes(tmp_path):
    cfg = write_config(tmp_path, N=2, **FAST)
    assert main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert rep["ok"] and rep["errors"] == []
    low, high = rep["groups"]
    assert [r["predicted"] for r in low["records"]] == [6, 6, 6]
    assert [(r["band"], r["r"], r["A"], r["B"], r["predicted"]) for r in high["records"]] == [
        ("Orth", 2, -1, 1, 8),
        ("Line", 1, 1, 0, 10),
    ]
    assert all(r["match"] for g in rep["groups"] for r in g["records"])


def test_verify_reports_mismatch(tmp_path):
    # a split factor this large merges bands, so the observed counts cannot match
    cfg = write_config(tmp_path, N=2, gap_factor=1e6, **FAST)
    assert main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert not rep["ok"]


def test_chern_success(tmp_path):
    cfg = write_config(tmp_path, **FAST)
    assert main(["chern", "--config", cfg, "--lambda", "1", "--bands", "3", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "chern.json").read_text())
    assert (rep["r"], rep["A"], rep["B"], rep["ch2"]) == (1, 1, 0, 0.5)
    assert rep["residuals"]["ch2"] < 0.05
    assert rep["grids"]["volume"] == [16] * 4


def test_chern_gap_closed_serialized(tmp_path):
    cfg = write_config(tmp_path, **FAST)
    assert main(["chern", "--config", cfg, "--lambda", "0.6", "--bands", "3", "--out", str(tmp_path)]) == 2
    rep = json.loads((tmp_path / "chern.json").read_text())
    assert rep["error"]["code"] == "gap_closed"
    assert rep["error"]["message"]


def test_chern_unresolved_serialized(tmp_path):
    cfg = write_config(tmp_path, **{**FAST, "volume_grid": 4, "residual_max": 0.01})
    assert main(["chern", "--config", cfg, "--lambda", "1", "--bands", "3", "--out", str(tmp_path)]) == 2
    rep = json.loads((tmp_path / "chern.json").read_text())
    assert rep["error"]["code"] == "topology_unresolved"


def test_degeneracy_window(tmp_path):
    cfg = write_config(tmp_path, **FAST)
    assert main(["degeneracy", "--config", cfg, "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "degeneracy.json").read_text())
    (lo, hi), = rep["windows"]
    assert lo == pytest.approx(0.5, abs=0.01) and hi == pytest.approx(2 / 3, abs=0.01)
    assert all(s["gap"] <= 1e-6 for s in rep["samples"])


def test_degeneracy_bad_pair(tmp_path):
    assert main(["degeneracy", "--pair", "1,2,3", "--out", str(tmp_path)]) == 2
