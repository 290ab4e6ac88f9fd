import csv
import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavehdc.cli import main
from wavehdc.exceptions import ConfigError, UsageError
from wavehdc.experiments.config import ConfigRangeError, Param, parse_config, positive, resolve
from wavehdc.experiments.registry import REGISTRY, get_experiment, run_experiment
from wavehdc.experiments.report import from_json, to_csv, to_json

SCHEMA = {"dim": Param("int", 32, positive), "snr": Param("floats", [20.0, 10.0]), "name": Param("str", "x")}


# ---- config parsing -------------------------------------------------------------------

def test_parse_sections_and_comments():
    raw = parse_config("a = 1  # note\n\n[grid]\nb = 2, 3\n")
    assert raw == {"a": "1", "grid.b": "2, 3"}


def test_parse_duplicate_key():
    with pytest.raises(ConfigError) as info:
        parse_config("a = 1\na = 2\n")
    assert info.value.path == "a"


def test_parse_malformed_line():
    with pytest.raises(ConfigError):
        parse_config("just words\n")


def test_resolve_defaults_and_types():
    p = resolve(SCHEMA, parse_config("dim = 64\nsnr = 0, -5\n"))
    assert p == {"dim": 64, "snr": [0.0, -5.0], "name": "x"}


def test_resolve_unknown_key():
    with pytest.raises(ConfigError) as info:
        resolve(SCHEMA, {"dimm": "3"})
    assert info.value.path == "dimm"


def test_resolve_type_error():
    with pytest.raises(ConfigError) as info:
        resolve(SCHEMA, {"dim": "many"})
    assert info.value.path == "dim"


def test_resolve_range_error():
    with pytest.raises(ConfigRangeError) as info:
        resolve(SCHEMA, {"dim": "0"})
    assert isinstance(info.value, ConfigError) and info.value.path == "dim"


def test_resolve_none_overrides_ignored():
    assert resolve(SCHEMA, {}, {"dim": None})["dim"] == 32


@given(st.integers(1, 10**6))
def test_resolve_int_round_trip(n):
    assert resolve(SCHEMA, parse_config(f"dim = {n}\n"))["dim"] == n


# ---- registry and reports ------------------------------------------------------------

def test_registry_names():
    assert set(REGISTRY) == {
        "discrete-bind", "fdtd-bind", "permutation", "noise-sweep",
        "jitter-sweep", "ccr-arith", "isolation-surrogate", "bridge-linearity",
    }


def test_unknown_experiment():
    with pytest.raises(UsageError) as info:
        get_experiment("frobnicate")
    assert "discrete-bind" in str(info.value)


def test_discrete_bind_echoes_defaults():
    r = run_experiment("discrete-bind")
    assert r.passed
    assert r.parameters["dim"] == 32 and r.parameters["seed"] == 42 and r.parameters["trials"] == 10
    assert len(r.seeds) == 10
    assert r.summary["min_cosine"] == pytest.approx(1.0, abs=1e-9)


def test_report_json_round_trip():
    r = run_experiment("permutation")
    back = from_json(to_json(r))
    assert back.experiment_name == "permutation"
    assert back.parameters == json.loads(json.dumps(r.parameters))
    assert back.passed == r.passed and back.wall_time == pytest.approx(r.wall_time)


def test_json_is_byte_identical_across_runs():
    a = to_json(run_experiment("noise-sweep", "trials = 3\n"), include_wall_time=False)
    b = to_json(run_experiment("noise-sweep", "trials = 3\n"), include_wall_time=False)
    assert a == b
    assert "wall_time" not in json.loads(a)


def test_seed_changes_results():
    a = run_experiment("noise-sweep", "trials = 3\n", {"seed": 1})
    b = run_experiment("noise-sweep", "trials = 3\n", {"seed": 2})
    assert a.rows != b.rows


def test_jitter_sweep_csv_columns():
    text = to_csv(run_experiment("jitter-sweep", "trials = 2\n"))
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    assert {"sigma_phi", "cosine", "sign_accuracy"} <= set(rows[0])
    assert [float(r["sigma_phi"]) for r in rows] == [0.0, 0.1, 0.2, 0.5, 1.0]


def test_ccr_arith_values():
    r = run_experiment("ccr-arith")
    assert r.passed
    assert r.summary["ccr_cpl"] == pytest.approx(8.7e-5)
    assert r.summary["ccr_sur_open"] == pytest.approx(29.0, rel=0.01)


def test_config_overrides_reach_report():
    r = run_experiment("discrete-bind", "dim = 64\n", {"trials": 2})
    assert r.parameters["dim"] == 64 and len(r.seeds) == 2


# ---- command line ------------------------------------------------------------------

def test_cli_list(capsys):
    assert main(["--list"]) == 0
    out = capsys.readouterr().out
    for name in [*REGISTRY, "acceptance"]:
        assert name in out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["permutation", "--trials", "3"],
        ["discrete-bind", "--seed", "-1"],
        ["discrete-bind", "--seed", str(2**64)],
        ["discrete-bind", "--trials", "0"],
        ["discrete-bind", "--format", "xml"],
        ["discrete-bind", "--config", "/nonexistent/cfg"],
        ["acceptance", "--trials", "2"],
    ],
)
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_cli_config_range_error(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("sigma_phi = -1\n")
    assert main(["jitter-sweep", "--config", str(cfg)]) == 2


def test_cli_predicate_failure(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("delta_match = 1e-3\n")
    assert main(["ccr-arith", "--config", str(cfg), "--out", str(tmp_path / "r.json")]) == 1
    assert json.loads((tmp_path / "r.json").read_text())["passed"] is False


def test_cli_writes_json_and_csv(tmp_path):
    out = tmp_path / "r.json"
    assert main(["discrete-bind", "--trials", "2", "--seed", "7", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["experiment_name"] == "discrete-bind" and d["parameters"]["seed"] == 7
    out_csv = tmp_path / "r.csv"
    assert main(["jitter-sweep", "--trials", "2", "--format", "csv", "--out", str(out_csv)]) == 0
    assert out_csv.read_text().startswith("# experiment: jitter-sweep")
