import json
from fractions import Fraction

import numpy as np
import pytest

from holoball.cli import main
from holoball.config import ConfigError, load_text
from holoball.report import Assertion, RunRecord, Table, dumps, strip_timestamp, table_csv
from holoball.suites import REGISTRY, SCHEMAS, list_suites, make_config, resolve_mode, run_suite


def run_cli(tmp_path, name, text, *extra):
    cfg = tmp_path / "run.toml"
    cfg.write_text(text)
    out = tmp_path / "report.json"
    status = main(["suite", "run", name, "--config", str(cfg), "--out", str(out), *extra])
    return status, out


def test_suite_list(capsys):
    assert main(["suite", "list"]) == 0
    text = capsys.readouterr().out
    for name in ("coverage-theorem-2.13", "lemma-cone-admissible", "section4-construction"):
        assert name in text


def test_gallery_list(capsys):
    assert main(["gallery", "list"]) == 0
    assert "half_shrink" in capsys.readouterr().out


def test_registry_is_consistent():
    for entry in list_suites():
        meta = REGISTRY[entry["name"]]
        assert meta["runner"] in SCHEMAS
        assert entry["anchor"]


def test_config_grammar():
    raw = load_text("# comment\nseed = 3\nM_list = [1.5, 2]\nmap = \"thin_sq\"\n")
    cfg = make_config("lemma-cone-admissible", raw)
    assert cfg.seed == 3 and cfg.map_id == "thin_sq"
    assert cfg.params["M_list"] == [1.5, 2.0]
    assert cfg.params["samples"] == 100_000


@pytest.mark.parametrize("text, message", [
    ("map = 'identity'\n", "missing required key: seed"),
    ("seed = 1\nbogus = 2\n", "unknown keys"),
    ("seed = -1\n", "out of range"),
    ("seed = 1\nsamples = 0\n", "out of range"),
    ("seed = 1\nsamples = true\n", "boolean"),
    ("seed = 1\n[table]\nx = 1\n", "tables"),
    ("seed = \n", "cannot parse"),
])
def test_config_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        make_config("exact-formulas", load_text(text))


def test_seed_override():
    cfg = make_config("exact-formulas", {}, seed=9)
    assert cfg.seed == 9


def test_mode_resolution():
    assert resolve_mode("coverage-theorem-2.13", make_config(
        "coverage-theorem-2.13", {"seed": 1, "map": "thin_sq"})) == "expect-fail"
    assert resolve_mode("coverage-theorem-2.13", make_config(
        "coverage-theorem-2.13", {"seed": 1})) == "expect-pass"
    assert resolve_mode("coverage-theorem-2.13", make_config(
        "coverage-theorem-2.13", {"seed": 1, "expect": "fail"})) == "expect-fail"
    assert resolve_mode("exact-formulas", make_config(
        "exact-formulas", {"seed": 1, "map": "thin_sq"})) == "expect-pass"


def test_encode_and_csv():
    table = Table(["a", "b"])
    table.add(1 + 2j, Fraction(17, 24))
    table.add(np.float64(np.nan), np.array([1.0, 0.5j]))
    with pytest.raises(ValueError):
        table.add(1)
    lines = table_csv(table).splitlines()
    assert lines == ["a,b", '"[1.0, 2.0]",17/24', 'nan,"[[1.0, 0.0], [0.0, 0.5]]"']
    assert json.loads(dumps({"x": np.inf})) == {"x": "inf"}


def test_record_verdicts():
    rec = RunRecord("s", "anchor", "0", {}, "expect-fail",
                    [Assertion("a", "anchor", 1.0, 2.0, True)], [], Table(["x"]), [])
    assert rec.verdict == "negative control confirmed" and rec.status == 0
    rec.assertions.append(Assertion("b", "anchor", 1.0, 2.0, False))
    assert rec.verdict == "negative control not confirmed" and rec.status == 1
    keys = list(json.loads(rec.to_json()))
    assert keys == ["suite", "anchor", "version", "config", "mode", "verdict", "status",
                    "assertions", "diagnostics", "notes", "table", "timestamp"]


def test_assertion_schema():
    rec = run_suite("section4-construction", make_config(
        "section4-construction", {"seed": 0, "samples": 1000}))
    for a in json.loads(rec.to_json())["assertions"]:
        assert set(a) == {"name", "anchor", "measured", "threshold", "verdict"}
        assert a["anchor"]


def test_cli_coverage_half_shrink(tmp_path):
    status, out = run_cli(tmp_path, "coverage-theorem-2.13", "seed = 1\n", "--csv",
                          str(tmp_path / "t.csv"))
    assert status == 0
    data = json.loads(out.read_text())
    assert data["verdict"] == "pass" and data["config"]["map"] == "half_shrink"
    header = (tmp_path / "t.csv").read_text().splitlines()[0]
    assert header.startswith("index,curve_index,zeta,target")


def test_cli_coverage_thin_sq_negative_control(tmp_path, capsys):
    status, out = run_cli(tmp_path, "coverage-theorem-2.13", 'seed = 1\nmap = "thin_sq"\n')
    assert status == 0
    assert "negative control confirmed" in capsys.readouterr().out
    assert json.loads(out.read_text())["verdict"] == "negative control confirmed"


def test_cli_failure_writes_report(tmp_path):
    status, out = run_cli(tmp_path, "coverage-theorem-2.13",
                          'seed = 1\nmap = "thin_sq"\nexpect = "pass"\n')
    assert status == 1
    assert json.loads(out.read_text())["verdict"] == "fail"


def test_cli_missing_seed(tmp_path):
    status, out = run_cli(tmp_path, "coverage-theorem-2.13", 'map = "half_shrink"\n')
    assert status == 2
    assert not out.exists()


def test_cli_usage_errors(tmp_path):
    assert run_cli(tmp_path, "no-such-suite", "seed = 1\n")[0] == 2
    assert run_cli(tmp_path, "exact-formulas", "seed = 1\n", "--jobs", "0")[0] == 2
    assert main(["suite", "run", "exact-formulas", "--config", str(tmp_path / "missing"),
                 "--out", str(tmp_path / "x.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["suite", "run"])
    assert exc.value.code == 2


def test_cli_seed_flag_and_jobs(tmp_path):
    status, out = run_cli(tmp_path, "coverage-theorem-2.13", "seed = 1\n", "--seed", "5",
                          "--jobs", "3")
    assert status == 0
    first = out.read_text()
    assert json.loads(first)["config"]["seed"] == 5
    run_cli(tmp_path, "coverage-theorem-2.13", "seed = 5\n")
    assert strip_timestamp(out.read_text()) == strip_timestamp(first)
