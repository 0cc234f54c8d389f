"""Tests for scenario loading and the command line front end."""

import json
import math

import numpy as np
import pytest

from qgevrey import cli
from qgevrey.errors import ConfigurationError, NoContractionError, SchemaError
from qgevrey.scenario import _zero_forcing, load_scenario, reference_scenario


def _write(tmp_path, raw, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


# ---------------------------------------------------------------------------
# scenario files


def test_reference_scenario_shape():
    sc = reference_scenario()
    assert sc.n_sectors == 3
    assert sc.run.arc_nodes == 16 and sc.seed == 0
    eps = sc.eps_cross(0)
    assert eps.size == sc.run.eps_samples
    assert np.all(np.diff(np.abs(eps)) < 0)


def test_scenario_from_string(reference_raw):
    sc = load_scenario(json.dumps(reference_raw))
    assert sc.raw == reference_raw


@pytest.mark.parametrize(
    "edit",
    [
        lambda raw: raw.pop("grids"),
        lambda raw: raw["run"].update({"bogus": 1}),
        lambda raw: raw["problem_q"].pop("k"),
        lambda raw: raw["problem_q"].update({"Q": [[1.0, 0.0, 3.0]]}),
    ],
)
def test_schema_errors(reference_raw, edit):
    raw = json.loads(json.dumps(reference_raw))
    edit(raw)
    with pytest.raises(SchemaError):
        load_scenario(raw)


def test_non_object_rejected(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    with pytest.raises(SchemaError):
        load_scenario(path)


def test_precondition_is_not_schema(reference_raw):
    raw = json.loads(json.dumps(reference_raw))
    raw["coverings"]["eps_half_aperture"] = 0.5
    with pytest.raises(ConfigurationError) as info:
        load_scenario(raw)
    assert not isinstance(info.value, SchemaError)


# ---------------------------------------------------------------------------
# exit codes


def test_validate_reference(capsys, tmp_path):
    assert cli.main(["validate", "--out", str(tmp_path)]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    rep = json.loads((tmp_path / "validation.json").read_text())
    assert rep["ok"] is True


def test_validate_names_failed_check(capsys, tmp_path, reference_raw):
    raw = json.loads(json.dumps(reference_raw))
    raw["problem_q"]["Delta"] = [0, 0]
    assert cli.main(["validate", "--scenario", _write(tmp_path, raw)]) == cli.EXIT_FAIL
    assert "FAIL q.eps_power[1]" in capsys.readouterr().out


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["validate", "--scenario", str(bad)]) == cli.EXIT_PARSE
    assert cli.main(["validate", "--scenario", str(tmp_path / "missing.json")]) == cli.EXIT_PARSE


def test_bad_arguments():
    assert cli.main(["solve", "--stage", "q"]) == cli.EXIT_PARSE
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "--stage", "x", "--out", "."])
    assert info.value.code == 2


def test_solve_rejects_invalid_scenario(tmp_path, reference_raw):
    raw = json.loads(json.dumps(reference_raw))
    raw["problem_q"]["Delta"] = [0, 0]
    code = cli.main(["solve", "--stage", "q", "--scenario", _write(tmp_path, raw), "--out", str(tmp_path)])
    assert code == cli.EXIT_FAIL


def test_no_contraction_exit(monkeypatch, tmp_path):
    def boom(*args, **kwargs):
        raise NoContractionError("ratio 1.2")

    monkeypatch.setattr(cli, "stage_q", boom)
    assert cli.main(["solve", "--stage", "q", "--out", str(tmp_path)]) == cli.EXIT_NO_CONTRACTION


def test_borel_needs_q_artifacts(tmp_path):
    assert cli.main(["solve", "--stage", "borel", "--out", str(tmp_path)]) == cli.EXIT_DEPENDENCY


# ---------------------------------------------------------------------------
# artifacts


def test_solve_q_then_borel(tmp_path):
    out = str(tmp_path)
    assert cli.main(["solve", "--stage", "q", "--out", out]) == cli.EXIT_OK
    man = json.loads((tmp_path / "q_manifest.json").read_text())
    assert len(man["sectors"]) == 3
    assert all(s["residual"] < 1e-8 for s in man["sectors"])
    assert (tmp_path / "w_p0.csv").read_text().startswith("direction_idx,r,m,re,im\n")
    assert (tmp_path / "norms_q.csv").read_text().startswith("sector,j,theta_norm,disc_norm\n")
    assert cli.main(["solve", "--stage", "borel", "--out", out]) == cli.EXIT_OK
    bman = json.loads((tmp_path / "b_manifest.json").read_text())
    assert len(bman["subsectors"]) == 6
    assert all(s["residual"] < 1e-7 for s in bman["subsectors"])
    assert (tmp_path / "v_p0_0.csv").exists()
    # q artifacts from another scenario are refused
    man["scenario_sha256"] = "0" * 64
    (tmp_path / "q_manifest.json").write_text(json.dumps(man))
    assert cli.main(["solve", "--stage", "borel", "--out", out]) == cli.EXIT_DEPENDENCY


def test_solve_zero_forcing(tmp_path, reference_raw):
    path = _write(tmp_path, _zero_forcing(reference_raw))
    assert cli.main(["solve", "--stage", "q", "--scenario", path, "--out", str(tmp_path)]) == cli.EXIT_OK
    lines = (tmp_path / "w_p0.csv").read_text().splitlines()[1:]
    assert lines and all(float(r.split(",")[3]) == 0 and float(r.split(",")[4]) == 0 for r in lines)


def test_files_respect_umask(tmp_path):
    cli.write_atomic(tmp_path / "x.txt", "hello\n")
    mode = (tmp_path / "x.txt").stat().st_mode & 0o777
    assert mode == 0o666 & ~cli._UMASK
    assert not list(tmp_path.glob(".*.tmp"))


def test_formal_nmax_zero(tmp_path):
    assert cli.main(["formal", "--nmax", "0", "--out", str(tmp_path)]) == cli.EXIT_OK
    summary = json.loads((tmp_path / "formal.json").read_text())
    assert summary["n_max"] == 0
    assert len(summary["h_degrees"]) == 1 and len(summary["H_degrees"]) == 1
    rows = (tmp_path / "formal_h.csv").read_text().splitlines()
    assert rows[0] == "m_index,t_power,m,re,im"
    assert {r.split(",")[0] for r in rows[1:]} == {"0"}


def test_flatness_q_pair(tmp_path, reference_raw):
    raw = json.loads(json.dumps(reference_raw))
    raw["run"]["eps_samples"] = 6
    raw["run"]["eps_range"] = [0.005, 0.5]
    path = _write(tmp_path, raw)
    assert cli.main(["flatness", "--pair", "q", "--scenario", path, "--out", str(tmp_path)]) == cli.EXIT_OK
    body = json.loads((tmp_path / "flatness_q.json").read_text())
    assert body["n_samples"] == 6
    assert body["max_route_error"] < 1e-6
    assert math.isfinite(body["q_gevrey"]["kappa"])
    assert (tmp_path / "cocycle_q.csv").read_text().startswith("eps_mod,eps_arg,delta_sup,tag\n")
