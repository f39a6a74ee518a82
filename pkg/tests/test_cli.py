import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from dglclass import (
    Sequence,
    classify,
    fig1_truths,
    philox_stream,
    sample,
    train,
    write_sequence,
)
from dglclass.cli import CSV_COLUMNS, format_float, run_cli, write_rows_csv
from dglclass.montecarlo import fig2_config, run_experiment

EXPECTED_HEADER = (
    "experiment,n,N,alpha,M,alphabet,trials,errors,error_rate,ci_low,ci_high,"
    "map_error_rate,bound_thm1,bound_cor1,bound_thm2,bound_cor2,"
    "min_tv_nominal,min_tv_true"
)


def test_csv_header_is_frozen():
    assert ",".join(CSV_COLUMNS) == EXPECTED_HEADER


def test_format_float_strings():
    assert format_float(1.0) == "1"
    assert format_float(0.5) == "0.5"
    assert format_float(0.2) == "0.2"
    assert format_float(1 / 3) == "0.333333333333"
    assert format_float(0.00012345) == "0.00012345"      # boundary: stays fixed
    assert format_float(0.000012345) == "1.2345e-05"     # below 1e-4: scientific
    assert format_float(123456789012345.0) == "1.23456789012e+14"
    assert format_float(0.0) == "0"


def _write_training_files(tmp_path, lengths=60):
    truths = fig1_truths()[:3]
    paths = []
    seqs = []
    for i, t in enumerate(truths):
        seq = sample(t, lengths, philox_stream(300 + i))
        path = tmp_path / f"train{i}.txt"
        write_sequence(path, seq)
        paths.append(str(path))
        seqs.append(seq)
    test_seq = sample(truths[1], 40, philox_stream(999))
    test_path = tmp_path / "test.txt"
    write_sequence(test_path, test_seq)
    return paths, seqs, str(test_path), test_seq


def test_classify_matches_library(tmp_path, capsys):
    paths, seqs, test_path, test_seq = _write_training_files(tmp_path)
    code = run_cli(
        ["classify", "--train", paths[0], "--train", paths[1], "--train", paths[2],
         "--test", test_path, "--alphabet", "3"]
    )
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    decision = classify(train(seqs, 3), test_seq)
    assert out[0] == f"hypothesis {decision.chosen + 1}"
    expected = "statistics " + " ".join(format_float(s) for s in decision.statistics)
    assert out[1] == expected
    assert len(out) == 2


def test_classify_needs_two_training_files(tmp_path, capsys):
    paths, _, test_path, _ = _write_training_files(tmp_path)
    code = run_cli(
        ["classify", "--train", paths[0], "--test", test_path, "--alphabet", "3"]
    )
    err = capsys.readouterr().err
    assert code == 1
    assert err.startswith("ERROR:Usage:")


def test_classify_missing_file_is_io_error(tmp_path, capsys):
    paths, _, test_path, _ = _write_training_files(tmp_path)
    code = run_cli(
        ["classify", "--train", paths[0], "--train", str(tmp_path / "nope.txt"),
         "--test", test_path, "--alphabet", "3"]
    )
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:IO:")


def test_classify_symbol_out_of_range(tmp_path, capsys):
    paths, _, test_path, _ = _write_training_files(tmp_path)
    bad = tmp_path / "bad.txt"
    bad.write_text(" ".join(["0"] * 59 + ["7"]) + "\n")
    code = run_cli(
        ["classify", "--train", paths[0], "--train", str(bad),
         "--test", test_path, "--alphabet", "3"]
    )
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:SymbolOutOfRange:")


def test_classify_non_integer_token(tmp_path, capsys):
    paths, _, test_path, _ = _write_training_files(tmp_path)
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 x\n")
    code = run_cli(
        ["classify", "--train", paths[0], "--train", str(bad),
         "--test", test_path, "--alphabet", "3"]
    )
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:Parse:")


def test_bounds_cor1_reference_output(capsys):
    code = run_cli(
        ["bounds", "--which", "cor1", "--n", "1000", "--alpha", "100",
         "--m", "5", "--alphabet", "3", "--min-tv", "0.2"]
    )
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out == [
        "value 0.000148679871969",
        "exponent 0.0138888888889",
        "penalty 2.77258872224",
        "delta_star 0.181818181818",
    ]


def test_bounds_dgl_reference_output(capsys):
    code = run_cli(["bounds", "--which", "dgl", "--n", "100", "--m", "2",
                    "--delta", "0.3"])
    out = capsys.readouterr().out
    assert code == 0
    assert out == "value 0.044435986153\n"


def test_bounds_delta_star_output(capsys):
    code = run_cli(
        ["bounds", "--which", "delta-star", "--alpha", "1", "--min-tv", "0.6",
         "--alphabet", "2", "--regime", "large"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert out == "value 0.3\n"


def test_bounds_estimation_output(capsys):
    code = run_cli(
        ["bounds", "--which", "estimation", "--n", "100", "--alpha", "1",
         "--m", "2", "--alphabet", "3", "--min-tv", "0.6", "--delta", "0.3",
         "--regime", "large"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert out == "value 1.62402339884\n"


def test_bounds_combined_output(capsys):
    code = run_cli(
        ["bounds", "--which", "combined", "--n", "100", "--alpha", "1",
         "--m", "2", "--alphabet", "3", "--min-tv", "0.6", "--delta", "0.3",
         "--regime", "small"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert out == "value 0.399923875377\n"


def test_bounds_missing_flag_is_usage_error(capsys):
    code = run_cli(["bounds", "--which", "dgl", "--n", "100", "--m", "2"])
    err = capsys.readouterr().err
    assert code == 1
    assert err.startswith("ERROR:Usage:")
    assert "--delta" in err


def test_bounds_unknown_which_is_usage_error(capsys):
    code = run_cli(["bounds", "--which", "thm9"])
    assert code == 1
    assert capsys.readouterr().err.startswith("ERROR:Usage:")


def test_bounds_delta_at_min_tv_is_data_error(capsys):
    code = run_cli(
        ["bounds", "--which", "combined", "--n", "100", "--alpha", "1",
         "--m", "2", "--alphabet", "3", "--min-tv", "0.3", "--delta", "0.3",
         "--regime", "small"]
    )
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:BadParams:")


def test_no_arguments_is_usage_error(capsys):
    assert run_cli([]) == 1
    assert capsys.readouterr().err.startswith("ERROR:Usage:")


def test_unknown_subcommand_is_usage_error(capsys):
    assert run_cli(["frobnicate"]) == 1
    assert capsys.readouterr().err.startswith("ERROR:Usage:")


def test_help_exits_zero(capsys):
    assert run_cli(["--help"]) == 0
    assert "classify" in capsys.readouterr().out
    assert run_cli(["bounds", "--help"]) == 0
    capsys.readouterr()


def _read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_figures_fig2_csv(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    code = run_cli(["figures", "--which", "fig2", "--out", str(out),
                    "--trials", "12", "--seed", "5"])
    assert code == 0
    header, rows = _read_csv(out)
    assert header == EXPECTED_HEADER
    assert len(rows) == 6  # one row per alpha
    col = {name: i for i, name in enumerate(EXPECTED_HEADER.split(","))}
    for row in rows:
        assert len(row) == 18
        assert row[col["experiment"]] == "fig2"
        assert row[col["n"]] == "60"
        assert row[col["alphabet"]] == "138"
        assert row[col["trials"]] == "12"
        assert row[col["bound_thm1"]] == ""     # small-regime columns absent
        assert row[col["bound_cor1"]] == ""
        assert float(row[col["bound_thm2"]]) > 0
        assert float(row[col["bound_cor2"]]) > 0
        assert 0.0 <= float(row[col["error_rate"]]) <= 1.0
        assert float(row[col["min_tv_true"]]) == pytest.approx(0.2, rel=1e-9)
    assert [r[col["alpha"]] for r in rows] == ["0.5", "1", "2", "4", "8", "16"]
    # N = round(alpha * 60)
    assert [r[col["N"]] for r in rows] == ["30", "60", "120", "240", "480", "960"]


def test_figures_threads_do_not_change_bytes(tmp_path):
    out1 = tmp_path / "t1.csv"
    out3 = tmp_path / "t3.csv"
    assert run_cli(["figures", "--which", "fig2", "--out", str(out1),
                    "--trials", "10", "--threads", "1"]) == 0
    assert run_cli(["figures", "--which", "fig2", "--out", str(out3),
                    "--trials", "10", "--threads", "3"]) == 0
    assert out1.read_bytes() == out3.read_bytes()


def test_figures_seed_changes_results(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli(["figures", "--which", "fig2", "--out", str(a),
                    "--trials", "50", "--seed", "1"]) == 0
    assert run_cli(["figures", "--which", "fig2", "--out", str(b),
                    "--trials", "50", "--seed", "2"]) == 0
    assert a.read_bytes() != b.read_bytes()


def test_write_rows_csv_matches_figures_cli(tmp_path):
    # the CLI file and a direct library dump must agree byte for byte
    out = tmp_path / "cli.csv"
    assert run_cli(["figures", "--which", "fig2", "--out", str(out),
                    "--trials", "10", "--seed", "3"]) == 0
    rows = run_experiment(fig2_config(trials=10, master_seed=3))
    lib = tmp_path / "lib.csv"
    with open(lib, "w", newline="") as fh:
        write_rows_csv(fh, rows)
    assert out.read_bytes() == lib.read_bytes()


def _simulate_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


BASE_DOC = {
    "experiment": "custom",
    "alphas": [1.0],
    "n_grid": [10],
    "trials": 16,
    "truths": [[0.75, 0.25], [0.25, 0.75]],
    "bound_set": ["thm1"],
}


def test_simulate_truths_config(tmp_path):
    cfg = _simulate_config(tmp_path, BASE_DOC)
    out = tmp_path / "out.csv"
    assert run_cli(["simulate", "--config", cfg, "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == EXPECTED_HEADER
    assert len(rows) == 1
    col = {name: i for i, name in enumerate(EXPECTED_HEADER.split(","))}
    row = rows[0]
    assert row[col["experiment"]] == "custom"
    assert row[col["n"]] == "10"
    assert row[col["N"]] == "10"
    assert row[col["M"]] == "2"
    assert row[col["alphabet"]] == "2"
    assert row[col["trials"]] == "16"
    assert row[col["bound_thm1"]] != ""
    assert row[col["bound_cor1"]] == ""
    assert row[col["map_error_rate"]] != ""
    assert float(row[col["min_tv_true"]]) == 0.5


def test_simulate_family_config(tmp_path):
    doc = {
        "alphas": [1.0, 2.0],
        "n_grid": [12],
        "trials": 8,
        "family": {"num_hypotheses": 3, "c": 1.4},
        "bound_set": ["thm2", "cor2"],
        "compare_map": False,
    }
    cfg = _simulate_config(tmp_path, doc)
    out = tmp_path / "out.csv"
    assert run_cli(["simulate", "--config", cfg, "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    col = {name: i for i, name in enumerate(EXPECTED_HEADER.split(","))}
    assert len(rows) == 2
    for row in rows:
        assert row[col["experiment"]] == "custom"
        assert row[col["alphabet"]] == "21"     # ceil(12**1.2)=20 -> multiple of 3
        assert row[col["map_error_rate"]] == ""
        assert row[col["bound_thm2"]] != ""


def test_simulate_cli_overrides(tmp_path):
    cfg = _simulate_config(tmp_path, BASE_DOC)
    out = tmp_path / "out.csv"
    assert run_cli(["simulate", "--config", cfg, "--out", str(out),
                    "--trials", "8", "--seed", "17"]) == 0
    _, rows = _read_csv(out)
    col = {name: i for i, name in enumerate(EXPECTED_HEADER.split(","))}
    assert rows[0][col["trials"]] == "8"


def test_simulate_unknown_key_rejected(tmp_path, capsys):
    doc = dict(BASE_DOC, beta=2.0)
    cfg = _simulate_config(tmp_path, doc)
    code = run_cli(["simulate", "--config", cfg, "--out", str(tmp_path / "o.csv")])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:Parse:")
    assert "beta" in err


def test_simulate_missing_required_key(tmp_path, capsys):
    doc = {k: v for k, v in BASE_DOC.items() if k != "alphas"}
    cfg = _simulate_config(tmp_path, doc)
    code = run_cli(["simulate", "--config", cfg, "--out", str(tmp_path / "o.csv")])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:Parse:")


def test_simulate_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code = run_cli(["simulate", "--config", str(path),
                    "--out", str(tmp_path / "o.csv")])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:Parse:")


def test_simulate_non_object_json(tmp_path, capsys):
    path = tmp_path / "arr.json"
    path.write_text("[1, 2, 3]")
    code = run_cli(["simulate", "--config", str(path),
                    "--out", str(tmp_path / "o.csv")])
    assert code == 2
    assert capsys.readouterr().err.startswith("ERROR:Parse:")


def test_simulate_both_truths_and_family(tmp_path, capsys):
    doc = dict(BASE_DOC, family={"num_hypotheses": 3, "c": 1.4})
    cfg = _simulate_config(tmp_path, doc)
    code = run_cli(["simulate", "--config", cfg, "--out", str(tmp_path / "o.csv")])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:InvalidGrid:")


def test_simulate_bad_grid(tmp_path, capsys):
    doc = dict(BASE_DOC, n_grid=[0])
    cfg = _simulate_config(tmp_path, doc)
    code = run_cli(["simulate", "--config", cfg, "--out", str(tmp_path / "o.csv")])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("ERROR:InvalidGrid:")


def test_simulate_missing_config_file(tmp_path, capsys):
    code = run_cli(["simulate", "--config", str(tmp_path / "absent.json"),
                    "--out", str(tmp_path / "o.csv")])
    assert code == 2
    assert capsys.readouterr().err.startswith("ERROR:IO:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dglclass", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "classify" in proc.stdout


def test_console_script():
    exe = shutil.which("dglclass")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "bounds", "--which", "dgl", "--n", "100", "--m", "2",
         "--delta", "0.3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "value 0.044435986153\n"
