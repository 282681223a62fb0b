import json
import subprocess
import sys

import pytest

from ramanujan_lab import cli
from ramanujan_lab.report import (
    EmptyReport,
    Record,
    emit_report,
    parse_json_lines,
    render_text,
    summarize,
)


def run_cli(capsys, *argv):
    code = cli.main(list(argv) + ["--quiet"])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- report layer -------------------------------------------------------------


def test_empty_report_is_an_error():
    with pytest.raises(EmptyReport):
        emit_report([], "text")
    assert "0 checked" in emit_report([], "text", allow_empty=True)


def test_record_status_is_validated():
    with pytest.raises(ValueError):
        Record("x", "passed")


def test_summary_counts():
    recs = [Record("c", "held"), Record("c", "failed"), Record("c", "excluded"), Record("c", "held")]
    s = summarize(recs)
    assert (s.checked, s.held, s.failed, s.excluded) == (3, 2, 1, 1)
    assert s.line() == "3 checked, 2 held, 1 failed, 1 excluded"
    assert render_text(recs).rstrip().endswith(s.line())


def test_parse_rejects_tampered_summary():
    text = emit_report([Record("c", "held", {"p": 3})], "json-lines")
    parse_json_lines(text)
    with pytest.raises(ValueError):
        parse_json_lines(text.replace('"held":1', '"held":2'))
    with pytest.raises(ValueError):
        parse_json_lines(text.replace('"version":1', '"version":9'))


# --- CLI --------------------------------------------------------------------------


def test_congruence_text_report(capsys):
    code, out, _ = run_cli(capsys, "congruence", "--kind", "A", "--series", "T1.3", "--pmax", "20")
    assert code == 0
    assert out.rstrip().splitlines()[-1] == "7 checked, 7 held, 0 failed, 0 excluded"


def test_congruence_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "congruence", "--kind", "B", "--series", "T1.3,T3.11", "--pmax", "30",
                           "--format", "json-lines")
    assert code == 0
    rep = parse_json_lines(out)
    assert rep.header["command"] == "congruence" and rep.header["config"]["p_max"] == 30
    assert not rep.truncated
    t311 = [r for r in rep.records if r.fields["series_id"] == "T3.11"]
    assert {r.fields["p"] for r in t311 if r.status == "excluded"} == {3}
    assert rep.summary["excluded"] == 1


def test_output_is_deterministic(capsys, tmp_path):
    args = ["congruence", "--kind", "AB", "--series", "T1.3,T1.4,T2.40", "--pmax", "60", "--format", "json-lines"]
    a = run_cli(capsys, *args)[1]
    b = run_cli(capsys, *args, "--workers", "2")[1]
    path = tmp_path / "rep.jsonl"
    assert run_cli(capsys, *args, "--out", str(path))[0] == 0
    assert a == b == path.read_text()


def test_failed_check_exits_one(capsys):
    # the tabulated eps0 of T1.16 does not satisfy the B-congruence
    code, out, _ = run_cli(capsys, "congruence", "--kind", "B", "--series", "T1.16", "--pmax", "40")
    assert code == 1
    assert " failed" in out and "0 failed" not in out


@pytest.mark.parametrize("argv", [
    ["congruence", "--pmax", "2"],
    ["congruence", "--series", "T9.9"],
    ["fourier", "--digits", "5"],
    ["congruence", "--kind", "C"],
    ["frobnicate"],
    ["congruence", "--catalog", "/nonexistent/catalog.txt"],
])
def test_configuration_errors_exit_two(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 2


def test_unwritable_output_exits_two(capsys, tmp_path):
    code, _, err = run_cli(capsys, "classical", "--pmax", "30", "--out", str(tmp_path / "no" / "such" / "file"))
    assert code == 2 and "cannot write" in err


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    assert "ramanujan-lab" in capsys.readouterr().out


def test_config_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"digits": 30, "pmax": 41, "kind": "B"}))
    env = {cli.DIGITS_ENV: "25"}
    assert cli.config_from_args(["r0"], env).digits == 25
    cfg = cli.config_from_args(["congruence", "--config", str(conf)], env)
    assert (cfg.digits, cfg.pmax, cfg.kind) == (30, 41, "B")
    cfg = cli.config_from_args(["congruence", "--config", str(conf), "--digits", "20", "--pmax", "11"], env)
    assert (cfg.digits, cfg.pmax) == (20, 11)
    assert cli.config_from_args(["congruence"], {}).pmax == 199
    assert cli.config_from_args(["identities"], {}).pmax == 99
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(cli.ConfigError):
        cli.config_from_args(["congruence", "--config", str(bad)], {})
    with pytest.raises(cli.ConfigError):
        cli.config_from_args(["congruence"], {cli.DIGITS_ENV: "many"})


def test_env_digits_reach_the_report(capsys, monkeypatch):
    monkeypatch.setenv(cli.DIGITS_ENV, "20")
    code, out, _ = run_cli(capsys, "verify-value", "--series", "T1.3", "--format", "json-lines")
    assert code == 0
    rep = parse_json_lines(out)
    assert rep.header["config"]["digits"] == 20 and rep.records[0].fields["digits"] == 20


def test_catalog_export(capsys, tmp_path):
    path = tmp_path / "cat.json"
    code, out, _ = run_cli(capsys, "catalog", "--export-json", str(path))
    assert code == 0 and "65 checked, 65 held" in out
    from ramanujan_lab.catalog import builtin_catalog, from_json
    assert from_json(path.read_text()) == builtin_catalog()


def test_custom_catalog_file(capsys, tmp_path):
    path = tmp_path / "mine.txt"
    path.write_text("# one row\nmy-series m=1 s=1/2,1/2,1/2 z0=1/4 a=1,6 v0=2 chi0=-4 eps0=?\n")
    code, out, _ = run_cli(capsys, "congruence", "--kind", "B", "--catalog", str(path), "--pmax", "13")
    assert code == 0 and "eps0 unknown" in out and "0 checked" in out


def test_interrupt_writes_truncated_report(capsys, monkeypatch):
    def interrupted(cfg, out):
        out.append(Record("congruence", "held", {"series_id": "T1.3", "p": 3}))
        raise KeyboardInterrupt

    monkeypatch.setitem(cli.WORKFLOWS, "congruence", interrupted)
    code, out, _ = run_cli(capsys, "congruence", "--format", "json-lines")
    assert code == 1
    rep = parse_json_lines(out)
    assert rep.truncated and len(rep.records) == 1
    code, out, _ = run_cli(capsys, "congruence")
    assert code == 1 and out.rstrip().endswith("# TRUNCATED")


def test_fourier_and_r0_commands(capsys):
    code, out, _ = run_cli(capsys, "r0", "--series", "T3.11,T3.6", "--digits", "40", "--format", "json-lines")
    assert code == 0
    recs = {r.fields["series_id"]: r.fields for r in parse_json_lines(out).records}
    assert recs["T3.11"]["closed_form"] == "93/253"
    assert recs["T3.6"]["closed_form"] == "3/pi"
    code, out, _ = run_cli(capsys, "fourier", "--series", "T1.6", "--digits", "30")
    assert code == 0 and "0 checked" in out and "1 excluded" in out


def test_identities_command(capsys):
    code, out, _ = run_cli(capsys, "identities", "--name", "6n+1", "--pmax", "41", "--format", "json-lines")
    assert code == 0
    checks = [r.fields["check"] for r in parse_json_lines(out).records]
    assert checks == ["exact", "recurrence"]
    # too short a range for the rank-5 recurrence is a failed certification
    code, out, _ = run_cli(capsys, "identities", "--name", "10n2+6n+1", "--pmax", "41")
    assert code == 1 and "determine degree" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ramanujan_lab", "classical", "--pmax", "23", "--quiet"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "9 checked, 9 held, 0 failed, 0 excluded" in proc.stdout
