import csv
import io
import json

import pytest

from superchar.cli import CSV_TABLE_HEADER, main, parse_and_dispatch, parse_report, render_report


def run(argv):
    rep, code = parse_and_dispatch(argv)
    return rep, code


def test_roots_command():
    rep, code = run(["roots", "--m", "2", "--n", "1", "--weight", "1,0|0"])
    assert code == 0 and rep["status"] == "ok"
    assert rep["payload"]["alpha"] == ["1", "-1", "0"]
    assert rep["payload"]["alphabar"] == ["-1", "1", "2"]
    assert rep["schema"] == "superchar/1"


def test_branch_command():
    rep, code = run(["branch", "--m", "1", "--n", "1", "--top", "4|0,-1"])
    assert code == 0 and rep["payload"]["count"] == 4


def test_degenerate_weights_are_rejected():
    rep, code = run(["verify-kac", "--m", "1", "--n", "1", "--top", "1|0,-1"])
    assert code == 1 and rep["error"]["name"] == "RootsCoincide"
    rep, code = run(["verify-kac", "--m", "1", "--n", "1", "--top", "0|0,0"])
    assert code == 1 and rep["error"]["name"] == "Atypical"


def test_verify_kac_ok():
    rep, code = run(["verify-kac", "--top", "4|0,-1"])
    assert code == 0 and rep["payload"]["counts"]["FAIL"] == 0


def test_signature_mismatch():
    rep, code = run(["branch", "--m", "2", "--n", "1", "--top", "4|0,-1"])
    assert code == 1 and rep["error"]["name"] == "SignatureMismatch"


def test_usage_errors():
    for argv in (["nonsense"], [], ["roots"], ["roots", "--weight", "1|0", "--m", "1"]):
        rep, code = run(argv)
        assert code == 2 and rep["error"]["name"] == "UsageError"
    rep, code = run(["roots", "--weight", "1;0"])
    assert code == 2 and rep["error"]["name"] == "ParseError"


def test_json_round_trip():
    rep, _ = run(["table", "--top", "4|0,-1", "--sub", "4|0"])
    text = render_report(rep, "json")
    assert json.loads(text)["status"] == "ok"
    assert parse_report(text)["payload"] == rep["payload"]
    assert render_report(rep, "json") == text


def test_csv_table_header():
    rep, _ = run(["table", "--m", "1", "--n", "1", "--top", "4|0,-1", "--sub", "4|0"])
    rows = list(csv.reader(io.StringIO(render_report(rep, "csv"))))
    assert rows[0] == CSV_TABLE_HEADER == "r,c,cbar,gamma,gammabar,delta,deltabar,strP,strPbar".split(",")
    assert len(rows) == 4


def test_error_table_line():
    rep, _ = run(["verify-kac", "--top", "0|0,0"])
    text = render_report(rep, "table")
    assert text.count("\n") == 1 and text.startswith("ERROR Atypical: ")


@pytest.mark.parametrize("cmd", [["tower", "--top", "4|0,-1"], ["tensor-check", "--weight", "2|0"],
                                 ["verify-kac", "--top", "3,1|2"], ["roots", "--weight", "2|0"],
                                 ["branch", "--top", "4|0,-1"]])
def test_all_formats_render(cmd):
    rep, code = run(cmd)
    assert code == 0
    for fmt in ("json", "csv", "table"):
        assert render_report(rep, fmt)


def test_main_exit_codes(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("SUPERCHAR_CACHE", str(tmp_path))
    assert main(["tensor-check", "--weight", "2|0", "--format", "table"]) == 0
    assert list(tmp_path.iterdir())
    assert main(["roots", "--weight", "2|0", "--format", "yaml"]) == 2
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1].startswith("ERROR UnsupportedFormat")


def test_negative_leading_weight():
    rep, code = run(["branch", "--top", "-1,-2|-2,-2"])
    assert code == 0 and rep["payload"]["count"] == 4
    rep, code = run(["roots", "--weight", "-2|0"])
    assert code == 0
