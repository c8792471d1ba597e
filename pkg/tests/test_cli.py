import json

import pytest

from tamerank.cli import (
    EXIT_CONFIG,
    EXIT_LAMBDA,
    EXIT_OK,
    main,
    parse_config,
    run,
    run_rank,
    validate_rank_report,
)
from tamerank.errors import ConfigError, InvariantViolationError, LambdaUnavailableError

EXAMPLE_6_5 = {
    "p": 5,
    "f": 1,
    "S": [7, 11],
    "lambda": {"mode": "table", "table": {"all": 0}},
}


def write_config(tmp_path, doc, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_config_valid():
    job = parse_config(json.dumps(EXAMPLE_6_5))
    assert job.p == 5 and job.S == (7, 11)
    assert job.lambda_table == {"all": 0}
    assert job.field.group_order == 4


def test_parse_config_rejects_p_in_s():
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps({"p": 3, "S": [3, 7]}))
    assert "S must not contain p" in exc.value.violations


def test_parse_config_rejects_bad_f():
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps({"p": 3, "f": 6, "S": [5]}))
    assert any("prime to p" in v for v in exc.value.violations)


def test_parse_config_collects_all_violations():
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps({"p": 4, "S": [6, 6], "lambda": {"mode": "nope"}}))
    assert len(exc.value.violations) >= 3


def test_parse_config_malformed():
    with pytest.raises(ConfigError):
        parse_config("{not json")


def test_run_rank_example_6_5():
    job = parse_config(json.dumps(EXAMPLE_6_5))
    report = run(job, "rank")
    assert report["total"] == 6
    assert [r["rank"] for r in report["records"]] == [0, 5, 0, 1]
    assert report["records"][1]["m_map"] == {"7": 1, "11": 0}
    assert not report["conjectural"]


def test_run_rank_missing_lambda():
    job = parse_config(json.dumps({"p": 5, "S": [7, 11]}))
    with pytest.raises(LambdaUnavailableError):
        run(job, "rank")


def test_report_determinism(tmp_path):
    job = parse_config(json.dumps(EXAMPLE_6_5))
    a = json.dumps(run(job, "rank"), indent=2)
    b = json.dumps(run(job, "rank"), indent=2)
    assert a == b


def test_validate_rank_report_catches_tampering():
    job = parse_config(json.dumps(EXAMPLE_6_5))
    report = run_rank(job)
    report["records"][1]["rank"] += 1
    with pytest.raises(InvariantViolationError):
        validate_rank_report(report)


def test_run_oracle_small():
    job = parse_config(json.dumps({"p": 3, "f": 1, "S": [5, 7]}))
    report = run(job, "oracle")
    assert report["all_pass"]
    rows = {(r["q"], r["character"]): r for r in report["rows"]}
    assert rows[(7, "eps")]["expected"] == 1
    assert rows[(5, "eps")]["expected"] == 0
    assert rows[(7, "eps")]["exponents"] == [1, 2]
    assert all(r["estimated"] == r["expected"] for r in report["rows"])


def test_run_lambda():
    job = parse_config(json.dumps({"p": 5, "f": 1, "S": []}))
    report = run(job, "lambda")
    assert report["rows"] == [
        {"character": "omega^3", "lambda": 0, "mu_zero": True, "levels_used": [1, 2]}
    ]


def test_run_chars():
    job = parse_config(json.dumps({"p": 5, "f": 1, "S": []}))
    report = run(job, "chars")
    assert [c["label"] for c in report["characters"]] == [
        "eps",
        "omega^1",
        "omega^2",
        "omega^3",
    ]
    assert report["classes"] == [["eps"], ["omega^1"], ["omega^2"], ["omega^3"]]


def test_main_rank_roundtrip(tmp_path, capsys):
    cfg = write_config(tmp_path, EXAMPLE_6_5)
    code = main(["rank", "--config", cfg])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    report = json.loads(out)
    assert report["total"] == 6


def test_main_exit_codes(tmp_path, capsys):
    bad = write_config(tmp_path, {"p": 3, "S": [3, 7]}, "bad.json")
    assert main(["rank", "--config", bad]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "S must not contain p" in err

    # even nontrivial character, no table, no greenberg flag
    nolam = write_config(tmp_path, {"p": 5, "S": [7, 11]}, "nolam.json")
    assert main(["rank", "--config", nolam]) == EXIT_LAMBDA

    # the greenberg flag plus a table entry for omega unblocks the same job
    tbl = tmp_path / "table.json"
    tbl.write_text(json.dumps({"omega^1": 0, "omega^3": 0}))
    assert (
        main(
            [
                "rank",
                "--config",
                nolam,
                "--assume-greenberg",
                "--lambda-table",
                str(tbl),
            ]
        )
        == EXIT_OK
    )
    report = json.loads(capsys.readouterr().out)
    assert report["total"] == 6 and report["conjectural"]


def test_main_oracle_and_out_file(tmp_path, capsys):
    cfg = write_config(tmp_path, {"p": 3, "f": 1, "S": [7]})
    out = tmp_path / "report.json"
    assert main(["oracle", "--config", cfg, "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["all_pass"]
    assert main(["oracle", "--config", cfg, "--levels", "1,2"]) == EXIT_OK
    capsys.readouterr()


def test_main_missing_config(tmp_path):
    assert main(["rank", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_stickelberger_mode_in_config():
    job = parse_config(
        json.dumps(
            {
                "p": 5,
                "f": 1,
                "S": [7, 11],
                "lambda": {
                    "mode": "stickelberger-odd",
                    "table": {"omega^1": 0, "omega^2": 0},
                },
            }
        )
    )
    report = run(job, "rank")
    assert report["total"] == 6
    provs = {r["character"]: r["lambda"]["provenance"] for r in report["records"]}
    assert provs["omega^3"] == "stickelberger-computed"
    assert provs["eps"] == "unconditional-zero"
    assert provs["omega^1"] == "input-table"
