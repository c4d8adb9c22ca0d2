import json
import math

import numpy as np
import pytest

import mfl.cli as cli
from mfl.cli import _CSV_COLUMNS, main
from mfl.grid import load_grid_function


BASE_INI = """\
[run]
n = 1
l = 4.0
g = 64
seed = 7
corpus_size = 4
stride = 8

[2.1i]
alpha = 0.5
p_list = 3, 3

[3.1i]
alpha = 0.5
p_list = 3, 3

[2.1i reject]
alpha = 0.5
p_list = 1, 2
expect = refusal
"""


@pytest.fixture()
def config(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(BASE_INI)
    return str(path)


def test_verify_writes_the_report_bundle(config, tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(["verify", "--config", config, "--out", str(out)])
    assert rc == 0

    csv_text = (out / "report.csv").read_text()
    lines = csv_text.splitlines()
    assert lines[0] == ",".join(_CSV_COLUMNS)
    # two computed sections x four tuples, one refusal row
    assert len(lines) == 1 + 4 + 4 + 1

    report = json.loads((out / "report.json").read_text())
    assert report["metadata"]["G"] == 64
    assert report["metadata"]["seed"] == 7
    assert report["failures"] == []
    assert report["exact_suite"]["failures"] == 0
    assert report["exact_suite"]["rows"] > 0
    by_name = {s["name"]: s for s in report["sections"]}
    assert by_name["2.1i reject"]["refused"] is True
    assert "p_gt_sprime" in by_name["2.1i reject"]["violated"]
    assert len(by_name["2.1i"]["rows"]) == 4
    for row in by_name["2.1i"]["rows"]:
        assert row["ratio"] > 0.0
        assert len(row["function_ids"]) == 2

    pngs = sorted(p.name for p in out.glob("ratios_*.png"))
    assert pngs == ["ratios_2.1i.png", "ratios_3.1i.png"]
    for p in pngs:
        assert (out / p).read_bytes()[:4] == b"\x89PNG"

    assert "wrote 9 rows" in capsys.readouterr().out


def test_verify_dumps_a_loadable_corpus(config, tmp_path):
    out = tmp_path / "rep"
    main(["verify", "--config", config, "--out", str(out)])
    dumps = sorted((out / "corpus").glob("*.mfl"))
    assert len(dumps) == 4
    g = load_grid_function(str(dumps[0]))
    assert g.domain.size == 64
    assert np.all(np.isfinite(g.values))


def test_verify_refusal_row_is_blank(config, tmp_path):
    out = tmp_path / "rep"
    main(["verify", "--config", config, "--out", str(out)])
    import csv as csvmod

    with open(out / "report.csv") as fh:
        rows = list(csvmod.DictReader(fh))
    blank = [r for r in rows if r["theorem_id"] == "2.1i reject"]
    assert len(blank) == 1
    assert blank[0]["ratio"] == "" and blank[0]["lhs"] == "" and blank[0]["c_emp"] == ""
    full = [r for r in rows if r["theorem_id"] == "2.1i"]
    assert all(float(r["ratio"]) > 0 for r in full)
    assert len({r["c_emp"] for r in full}) == 1


def test_verify_is_deterministic_across_threads(config, tmp_path):
    out1 = tmp_path / "a"
    out3 = tmp_path / "b"
    assert main(["verify", "--config", config, "--out", str(out1), "--threads", "1"]) == 0
    assert main(["verify", "--config", config, "--out", str(out3), "--threads", "3"]) == 0
    for name in ("report.csv", "report.json"):
        assert (out1 / name).read_bytes() == (out3 / name).read_bytes()
    for p in sorted(out1.glob("ratios_*.png")):
        assert p.read_bytes() == (out3 / p.name).read_bytes()


def test_verify_seed_flag_overrides_config(config, tmp_path):
    out = tmp_path / "rep"
    main(["verify", "--config", config, "--out", str(out), "--seed", "9"])
    report = json.loads((out / "report.json").read_text())
    assert report["metadata"]["seed"] == 9


def test_verify_refine_reports_drift(config, tmp_path):
    out = tmp_path / "rep"
    rc = main(["verify", "--config", config, "--out", str(out), "--refine"])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    by_name = {s["name"]: s for s in report["sections"]}
    assert len(by_name["2.1i"]["refinement"]) == 2
    assert by_name["2.1i reject"]["refinement"] == []


def test_verify_expected_refusal_that_runs_fails(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text(BASE_INI.replace(
        "[3.1i]\nalpha = 0.5\np_list = 3, 3",
        "[3.1i]\nalpha = 0.5\np_list = 3, 3\nexpect = refusal"))
    out = tmp_path / "rep"
    rc = main(["verify", "--config", str(ini), "--out", str(out)])
    assert rc == 1
    assert "expected refusal but check ran" in capsys.readouterr().err


def test_verify_unexpected_refusal_fails(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text(BASE_INI.replace("expect = refusal\n", ""))
    out = tmp_path / "rep"
    rc = main(["verify", "--config", str(ini), "--out", str(out)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "unexpected refusal" in err
    assert "p_gt_sprime" in err


def test_verify_suite_violation_fails(config, tmp_path, monkeypatch, capsys):
    fake = [{"name": "holder_lebesgue", "pair": "(a, b)",
             "lhs": 2.0, "bound": 1.0, "ok": False}]
    monkeypatch.setattr(cli, "exact_inequality_suite", lambda *a, **k: fake)
    rc = main(["verify", "--config", config, "--out", str(tmp_path / "rep")])
    assert rc == 1
    assert "exact suite: 1 violation" in capsys.readouterr().err


@pytest.mark.parametrize("mangle,fragment", [
    (lambda s: s.replace("seed = 7", "tempo = 7"), "unknown key 'tempo'"),
    (lambda s: s.replace("[3.1i]", "[9.9]"), "unknown theorem id"),
    (lambda s: s.replace("alpha = 0.5\np_list = 3, 3\n\n[3.1i]",
                         "p_list = 3, 3\n\n[3.1i]"), "needs alpha"),
    (lambda s: s.replace("expect = refusal", "expect = maybe"), "expect must be"),
    (lambda s: s.split("[2.1i]")[0], "no theorem sections"),
])
def test_config_errors_exit_2(mangle, fragment, tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text(mangle(BASE_INI))
    rc = main(["verify", "--config", str(ini), "--out", str(tmp_path / "rep")])
    assert rc == 2
    assert "config error:" in capsys.readouterr().err
    ini.write_text(mangle(BASE_INI))
    assert fragment in str(pytest.raises(
        cli.ConfigError, cli._load_config, str(ini)).value)


def test_missing_config_file_exits_2(tmp_path, capsys):
    rc = main(["verify", "--config", str(tmp_path / "nope.ini"),
               "--out", str(tmp_path / "rep")])
    assert rc == 2
    assert "cannot read config file" in capsys.readouterr().err


def test_constant_roundtrip(config, tmp_path):
    out = tmp_path / "rep"
    rc = main(["constant", "--config", config, "--out", str(out), "--refine"])
    assert rc == 0
    lines = (out / "constants.csv").read_text().splitlines()
    assert lines[0] == ",".join(_CSV_COLUMNS)
    assert len(lines) == 3  # refusal section skipped
    report = json.loads((out / "constants.json").read_text())
    assert report["failures"] == []
    assert len(report["constants"]) == 2
    for entry in report["constants"]:
        assert entry["c_emp"] > 0.0
        assert len(entry["refinement"]) == 2
        assert len(entry["argmax_ids"]) == 2


def test_sweep_writes_curve(config, tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(["sweep", "--config", config, "--theorem", "2.1i",
               "--param", "alpha", "--values", "0.4,0.5,0.99",
               "--out", str(out)])
    assert rc == 0
    assert (out / "sweep_alpha.png").read_bytes()[:4] == b"\x89PNG"
    lines = (out / "sweep.csv").read_text().splitlines()
    # two computing values contribute 4 rows each, the refused one 1 blank row
    assert len(lines) == 1 + 4 + 4 + 1
    assert "(1 refused)" in capsys.readouterr().out


def test_sweep_unknown_section_fails(config, tmp_path, capsys):
    rc = main(["sweep", "--config", config, "--theorem", "nope",
               "--param", "kappa", "--values", "0.1",
               "--out", str(tmp_path / "rep")])
    assert rc == 1
    assert "no section" in capsys.readouterr().err


def test_hls_ladder_outputs(tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(["hls", "--n", "1", "--lam", "0.5", "--box", "8",
               "--grid", "64", "--steps", "2", "--out", str(out)])
    assert rc == 0
    report = json.loads((out / "hls.json").read_text())
    assert len(report["ratios"]) == 2
    assert report["ratios"][0] < report["ratios"][1] < report["constant"]
    lines = (out / "hls_ladder.csv").read_text().splitlines()
    assert lines[0] == "step,L,G,ratio,constant"
    assert len(lines) == 3
    assert (out / "hls_ladder.png").read_bytes()[:4] == b"\x89PNG"
    assert "final ratio" in capsys.readouterr().out


def test_list_theorems_prints_catalog(capsys):
    assert main(["list-theorems"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 26
    assert lines[0].split()[0] == "2.1i"
    assert all(len(line.split(None, 1)) == 2 for line in lines)
