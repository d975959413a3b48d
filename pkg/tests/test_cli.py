"""
test_cli.py

The `chebcurves` command line: report envelopes, output formats and exit
codes.
"""

import io
import json

import pandas as pd
import pytest

from pychebcurves import cli, config
from pychebcurves.config import RunConfig
from pychebcurves.routines import read_json, read_obj


def run_json(capsys, *args):
    code = cli.main(["--format", "json", *args])
    return code, json.loads(capsys.readouterr().out)


def test_envelope(capsys):
    code, report = run_json(capsys, "cheb", "--d", "4", "--p", "7")
    assert code == cli.EXIT_OK
    assert set(report) == {"command", "parameters", "config", "result", "deviations"}
    assert report["command"] == "cheb"
    assert report["parameters"] == {"d": 4, "p": 7, "ext": 1}
    assert report["result"]["integer_coefficients"] == [2, 0, -4, 0, 1]
    assert report["result"]["coefficients"] == [2, 0, 3, 0, 1]
    assert report["config"]["seed"] == 0
    assert "field_convention" in report["config"]
    assert "log_level" not in report["config"]


def test_output_is_reproducible(capsys):
    cli.main(["--format", "json", "stab", "--d", "5", "--p", "19"])
    first = capsys.readouterr().out
    cli.main(["--format", "json", "stab", "--d", "5", "--p", "19"])
    assert capsys.readouterr().out == first


def test_timing_adds_wall_time(capsys):
    code, report = run_json(capsys, "--timing", "cheb", "--d", "3", "--p", "5")
    assert code == cli.EXIT_OK
    assert report["wall_time"] >= 0


def test_config_is_restored(capsys):
    before = config.current()
    cli.main(["--format", "json", "--seed", "7", "cheb", "--d", "3", "--p", "5"])
    capsys.readouterr()
    assert config.current() is before


@pytest.mark.parametrize(
    "args",
    [
        ["cheb", "--p", "7"],
        ["frobnicate"],
        ["verify", "--which", "fermat"],
        ["jinv", "--coeffs", "1,2", "--p", "7"],
        ["jinv", "--coeffs", "1,x,0,0,1", "--p", "7"],
        ["--format", "xml", "cheb", "--d", "4", "--p", "7"],
    ],
)
def test_usage_errors(capsys, args):
    assert cli.main(args) == cli.EXIT_USAGE


def test_hypothesis_failure_is_an_error(capsys):
    assert cli.main(["cheb", "--d", "5", "--p", "5"]) == cli.EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_bad_config_file(capsys, tmpdir):
    path = tmpdir.join("bad.yml")
    path.write("enumeration_cap: 100\nfavourite_prime: 7\n")
    assert cli.main(["--config", str(path), "cheb", "--d", "4", "--p", "7"]) == cli.EXIT_ERROR


def test_config_file(capsys, tmpdir):
    path = tmpdir.join("run.yml")
    path.write("output_format: json\nseed: 3\n")
    assert cli.main(["--config", str(path), "count", "--d", "4", "--q", "49"]) == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["seed"] == 3
    assert report["result"]["result"] == {"count": 92, "genus": 3}


def test_deviation_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_fermat_identity", lambda d, p: False)
    code, report = run_json(capsys, "verify", "--which", "fermat", "--d", "4", "--p", "7")
    assert code == cli.EXIT_DEVIATION
    assert report["result"] == {"identity": False, "expected": True}
    assert report["deviations"] == ["fermat identity is False, expected True"]


def test_csv_format(capsys):
    assert cli.main(["--format", "csv", "count", "--d", "5", "--q", "81"]) == cli.EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame["result.count"].tolist() == [190]


def test_table_format(capsys):
    assert cli.main(["stab", "--d", "5", "--p", "19"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("command: stab")
    assert "S3" in out


def test_maximal(capsys):
    code, report = run_json(capsys, "maximal", "--d", "4", "--q", "7", "--m", "2")
    assert code == cli.EXIT_OK
    assert report["result"]["result"]["maximal"]
    assert report["result"]["curve"]["kind"] == "superelliptic/chebyshev"


def test_inflect_partial_field(capsys):
    code, report = run_json(capsys, "inflect", "--d", "4", "--p", "11", "--ext", "2")
    assert code == cli.EXIT_OK
    assert report["result"]["result"]["count"] == 0
    assert not report["result"]["result"]["complete"]


def test_aut(capsys):
    code, report = run_json(capsys, "aut", "--d", "5", "--p", "19")
    assert code == cli.EXIT_OK
    assert report["result"]["total_order"] == 30
    assert report["result"]["image"]["label"] == "S3"


def test_verify_order3(capsys):
    code, report = run_json(capsys, "verify", "--which", "order3", "--d", "5", "--p", "19")
    assert code == cli.EXIT_OK
    assert report["result"]["identity"]
    assert report["result"]["witness_order"] == 3


def test_verify_order3_family(capsys):
    code, report = run_json(capsys, "verify", "--which", "order3-family", "--d", "5", "--p", "19")
    assert code == cli.EXIT_OK
    assert report["result"]["solutions"] == [9, 10]


def test_jinv(capsys):
    code, report = run_json(capsys, "jinv", "--coeffs", "1,0,-4,0,2", "--p", "11")
    assert code == cli.EXIT_OK
    assert report["result"]["result"] == {"j": 3, "j_rational": "8000"}


def test_distinguish(capsys):
    code, report = run_json(capsys, "distinguish", "--n", "4", "--m", "2", "--q", "7", "--mode", "genus-one")
    assert code == cli.EXIT_OK
    assert report["result"]["evidence"]["j_equal"]


def test_scan_stream(capsys, tmpdir):
    path = tmpdir.join("grid.csv")
    args = ["scan", "--d-min", "5", "--d-max", "5", "--p-min", "7", "--p-max", "11", "--stream", "--output", str(path)]
    assert cli.main(args) == cli.EXIT_OK
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [(cell["d"], cell["p"]) for cell in lines] == [(5, 7), (5, 11)]
    assert all(cell["stabilizer_order"] == 2 for cell in lines)
    assert len(pd.read_csv(str(path))) == 2


def test_log_file(capsys, tmpdir, monkeypatch):
    path = tmpdir.join("run.log")
    monkeypatch.setattr(cli, "verify_fermat_identity", lambda d, p: False)
    args = ["--log-file", str(path), "verify", "--which", "fermat", "--d", "4", "--p", "7"]
    assert cli.main(args) == cli.EXIT_DEVIATION
    assert "fermat identity is False" in path.read()


def test_report_file(capsys, tmpdir):
    path = str(tmpdir.join("stab.json"))
    code, report = run_json(capsys, "--report", path, "stab", "--d", "5", "--p", "19")
    assert code == cli.EXIT_OK
    assert read_json(path) == report


def test_repeat_from_report(capsys, tmpdir):
    path = str(tmpdir.join("count.json"))
    cli.main(["--format", "json", "--seed", "9", "--report", path, "count", "--d", "4", "--q", "49"])
    first = json.loads(capsys.readouterr().out)
    assert cli.main(["--config", path, "count", "--d", "4", "--q", "49"]) == cli.EXIT_OK
    again = json.loads(capsys.readouterr().out)
    assert again["config"] == first["config"]
    assert again["config"]["seed"] == 9
    assert again["result"] == first["result"]


def test_repeat_from_non_report(capsys, tmpdir):
    path = tmpdir.join("list.json")
    path.write("[1, 2, 3]")
    assert cli.main(["--config", str(path), "cheb", "--d", "4", "--p", "7"]) == cli.EXIT_ERROR


def test_save_config(capsys, tmpdir):
    path = str(tmpdir.join("effective.yml"))
    args = ["--format", "json", "--seed", "4", "--extension-cap", "10", "--save-config", path]
    assert cli.main([*args, "cheb", "--d", "3", "--p", "5"]) == cli.EXIT_OK
    capsys.readouterr()
    assert RunConfig.from_yaml(path) == RunConfig(output_format="json", seed=4, extension_cap=10)


def test_scan_cache(capsys, tmpdir):
    path = str(tmpdir.join("scan.pkl"))
    args = ["--format", "json", "scan", "--d-min", "5", "--d-max", "5", "--p-min", "7", "--p-max", "11", "--cache", path]
    assert cli.main(args) == cli.EXIT_OK
    first = json.loads(capsys.readouterr().out)
    assert [(cell.d, cell.p) for cell in read_obj(path)["cells"]] == [(5, 7), (5, 11)]
    assert cli.main(args) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["result"] == first["result"]
