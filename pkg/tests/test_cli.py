import json
import os

import pytest

from kpzlab.cli import main


def run_cli(args):
    return main(args)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_selftest_exit_zero(tmp_path):
    out = tmp_path / "out"
    code = run_cli(
        ["selftest", "--seed", "7", "--out-dir", str(out), "--n-lines", "12",
         "--delta", "0.1", "--triples", "40"]
    )
    assert code == 0
    csv_path = out / "selftest-7.csv"
    assert csv_path.exists()
    text = read(csv_path).decode()
    assert text.startswith("# kpzlab ")
    assert "# config:" in text
    report = json.loads((out / "selftest-7.json").read_text())
    assert report["pass"] is True
    assert report["criteria"]["oracle_equivalence"]["pass"] is True


def test_config_error_exit_2(tmp_path):
    code = run_cli(["variation", "--n-lines", "-3", "--out-dir", str(tmp_path)])
    assert code == 2
    code = run_cli(["environment", "--eps", "0.51", "--n-samples", "50",
                    "--n-lines", "64", "--delta", "0.03125",
                    "--out-dir", str(tmp_path)])
    assert code == 2  # eps^3 off the line grid


def test_seed_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("KPZLAB_SEED", "4242")
    out = tmp_path / "o"
    code = run_cli(["selftest", "--out-dir", str(out), "--n-lines", "8",
                    "--delta", "0.15", "--triples", "10"])
    assert code == 0
    assert (out / "selftest-4242.csv").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_lines": 8, "delta": 0.15, "triples": 10, "seed": 5}))
    out = tmp_path / "o"
    code = run_cli(["selftest", "--config", str(cfg), "--seed", "6",
                    "--out-dir", str(out)])
    assert code == 0
    assert (out / "selftest-6.csv").exists()  # flag beat the file


def test_variation_csv_schema_and_determinism(tmp_path):
    args = [
        "variation", "--seed", "11", "--n-lines", "32", "--delta", "0.05",
        "--n-samples", "12", "--alphas", "1,1.5,2",
        "--eps-list", "0.0625,0.125", "--window", "4",
    ]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli(args + ["--out-dir", str(out1), "--workers", "1"])
    run_cli(args + ["--out-dir", str(out2), "--workers", "8"])
    b1 = read(out1 / "variation-11.csv")
    b2 = read(out2 / "variation-11.csv")
    assert b1 == b2
    header = [l for l in b1.decode().splitlines() if not l.startswith("#")][0]
    assert header == "alpha,eps,mean_V,se_V,n"


def test_independence_run_and_report(tmp_path):
    out = tmp_path / "o"
    code = run_cli(
        ["independence", "--seed", "13", "--out-dir", str(out), "--n-lines", "64",
         "--delta", "0.03", "--n-samples", "150", "--times", "0.25,0.75",
         "--eps3-lines", "4", "--window", "4"]
    )
    report = json.loads((out / "independence-13.json").read_text())
    assert set(report["criteria"]) == {"correlation_small", "ci_covers_zero"}
    header = [
        l for l in (out / "independence-13.csv").read_text().splitlines()
        if not l.startswith("#")
    ][0]
    assert header == "t1,t2,eps,corr,ci_lo,ci_hi"
    assert code in (0, 1)


def test_holder_writes_paths_csv(tmp_path):
    out = tmp_path / "o"
    code = run_cli(
        ["holder", "--seed", "17", "--out-dir", str(out), "--n-lines", "32",
         "--delta", "0.05", "--n-samples", "16", "--resolutions", "8,32",
         "--window", "4"]
    )
    assert code in (0, 1)
    paths_csv = out / "paths-17.csv"
    assert paths_csv.exists()
    header = [
        l for l in paths_csv.read_text().splitlines() if not l.startswith("#")
    ][0]
    assert header == "t,value,replica"
