import numpy as np

from lassomc.cli import main
from lassomc.harness import read_csv


def run(argv):
    return main(argv)


def test_bench_writes_csv_and_json(tmp_path, capsys):
    out = tmp_path / "res.csv"
    jout = tmp_path / "res.json"
    code = run(
        [
            "bench",
            "linear",
            "--dim",
            "4",
            "--methods",
            "mc,lmc",
            "--budgets",
            "20,40",
            "--repeats",
            "2",
            "--s-folds",
            "5",
            "--big-m",
            "200",
            "--seed",
            "1",
            "--lambda-strategy",
            "fixed:0.0",
            "--out",
            str(out),
            "--json",
            str(jout),
        ]
    )
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 8
    assert jout.exists()


def test_unknown_method_exits_two(tmp_path, capsys):
    code = run(["bench", "linear", "--methods", "quantum", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_problem_exits_two(capsys):
    assert run(["bench", "warp", "--methods", "mc"]) == 2


def test_budget_rounded_down_to_fold_multiple(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = run(
        [
            "bench",
            "linear",
            "--dim",
            "3",
            "--methods",
            "lmc",
            "--budgets",
            "23",
            "--repeats",
            "2",
            "--s-folds",
            "5",
            "--big-m",
            "100",
            "--lambda-strategy",
            "fixed:0.0",
            "--seed",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert "not divisible" in capsys.readouterr().err
    rows = read_csv(out)
    assert {r["N"] for r in rows} == {20}  # actual N recorded


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "problem=linear\n"
        "dim=4\n"
        "methods=mc\n"
        "budgets=20\n"
        "repeats=2\n"
        "big-m=100\n"
        "seed=5\n"
        "# comment line\n"
        "lambda-strategy=fixed:0.0\n"
    )
    out = tmp_path / "cfg.csv"
    code = run(["bench", "--config", str(cfg), "--repeats", "3", "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 3  # flag overrode the file's repeats=2


def test_bad_config_key_exits_two(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("problem=linear\nwarp_factor=9\n")
    assert run(["bench", "--config", str(cfg)]) == 2


def test_runtime_failure_exits_three(tmp_path, capsys):
    # a degree-3 basis in 400 dimensions blows the expansion cap at runtime
    code = run(
        [
            "bench",
            "sobol",
            "--methods",
            "pce",
            "--budgets",
            "20",
            "--repeats",
            "2",
            "--pce-degree",
            "3",
            "--out",
            str(tmp_path / "x.csv"),
        ]
    )
    assert code == 3
    assert "runtime error:" in capsys.readouterr().err


def test_summary_output(tmp_path):
    out = tmp_path / "sum.csv"
    code = run(
        [
            "bench",
            "linear",
            "--dim",
            "3",
            "--methods",
            "mc",
            "--budgets",
            "20",
            "--repeats",
            "3",
            "--seed",
            "3",
            "--summary",
            str(out),
        ]
    )
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 1
    assert rows[0]["repeats"] == 3
    assert np.isfinite(rows[0]["mse_mean"])
