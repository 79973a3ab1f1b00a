"""The qav command-line interface: exit codes, formats, and determinism."""

import json

import pytest

from qav import cli


def test_suite_list_is_sorted_and_complete():
    assert list(cli.SUITES) == sorted(cli.SUITES)
    assert set(cli.SUITES) == {
        "cartan",
        "crossing",
        "drinfeld-rep",
        "eiprei",
        "f-series",
        "gauss",
        "lowrank",
        "main-structure",
        "psi",
        "relrbar",
        "unitarity",
        "ybe",
        "zseries",
    }


def test_cartan_text_output(capsys):
    rc = cli.run(["check", "cartan", "--type", "B", "--rank", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "[cartan] B2" in out
    assert "pass" in out
    assert "fail" not in out


def test_json_output_schema(capsys):
    rc = cli.run(
        ["check", "cartan", "--type", "D", "--rank", "3", "--format", "json"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert payload["schema"] == 1
    (report,) = payload["reports"]
    assert report["suite"] == "cartan"
    assert report["algebra"] == {"type": "D", "rank": 3}
    assert all(c["status"] == "pass" for c in report["checks"])
    # timing never leaks into the deterministic payload
    assert "elapsed" not in json.dumps(payload)


def test_json_runs_are_byte_identical(capsys):
    args = ["check", "unitarity", "--type", "B", "--rank", "1", "--format", "json"]
    cli.run(args)
    first = capsys.readouterr().out
    cli.run(args)
    second = capsys.readouterr().out
    assert first == second


def test_skip_statuses(capsys):
    rc = cli.run(
        ["check", "lowrank", "--type", "B", "--rank", "2", "--order", "4",
         "--format", "json"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    (report,) = payload["reports"]
    assert [c["status"] for c in report["checks"]] == ["skipped"]
    assert "reason" in report["checks"][0]

    rc = cli.run(["check", "psi", "--type", "B", "--rank", "1", "--order", "4",
                  "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert payload["reports"][0]["checks"][0]["status"] == "skipped"


def test_usage_errors_exit_2(capsys):
    assert cli.run(["check", "no-such-suite"]) == 2
    assert cli.run(["no-such-command"]) == 2
    capsys.readouterr()


def test_bad_algebra_exits_2(capsys):
    assert cli.run(["check", "cartan", "--type", "D", "--rank", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_resource_bound_exits_2(capsys):
    rc = cli.run(["check", "ybe", "--type", "B", "--rank", "9"])
    assert rc == 2
    assert "resource bound" in capsys.readouterr().err


def test_failing_check_exits_1(monkeypatch, capsys):
    monkeypatch.setattr(
        cli,
        "_run_suite",
        lambda suite, alg, K, W: [
            {"name": "forced failure", "status": "fail", "witness": "w"}
        ],
    )
    rc = cli.run(["check", "cartan"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "forced failure" in out
    assert "witness" in out


def test_dump_writes_json_payload(tmp_path, capsys):
    dump = tmp_path / "report.json"
    rc = cli.run(
        ["check", "cartan", "--type", "B", "--rank", "1", "--format", "json",
         "--dump", str(dump)]
    )
    stdout_payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert json.loads(dump.read_text()) == stdout_payload


def test_lop_suites_report_conventions(capsys):
    rc = cli.run(
        ["check", "gauss", "--type", "B", "--rank", "1", "--order", "4",
         "--format", "json"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    (report,) = payload["reports"]
    assert report["conventions"]["base"] == "swapped"
