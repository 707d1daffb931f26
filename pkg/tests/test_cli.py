import csv
import io
import subprocess
import sys

import pytest

from tailscore.cli import fmt, main, parse_grid
from tailscore.errors import InvalidParameterError, SpecParseError
from tailscore.specs import parse_distribution


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.reader(io.StringIO(text)))


def test_profile(capsys):
    code, out, _ = run(["profile", "pareto(alpha=2,scale=1)"], capsys)
    assert code == 0
    rows = dict(table(out)[1:])
    assert table(out)[0] == ["field", "value"]
    assert rows["evi"] == "0.5" and rows["rv_index"] == "-2" and rows["upper_endpoint"] == "inf"
    assert float(rows["m_index"]) == pytest.approx(-2, abs=1e-3)
    assert rows["m_index_status"] == "converged"


@pytest.mark.parametrize("text", [
    "pareto(2)", "mix(0.25:exp(rate=1), 0.75:gev(gamma=0.1,mu=0,sigma=1))",
    "unif(a=-1,b=0.1)", "gpd(gamma=-0.5,sigma=1,mu=0)", "point(c=1e-300)",
])
def test_profile_spec_round_trip(text, capsys):
    code, out, _ = run(["profile", text], capsys)
    printed = dict(table(out)[1:])["spec"]
    assert parse_distribution(printed) == parse_distribution(text)
    assert run(["profile", printed], capsys)[1] == out


def test_profile_undefined_values(capsys):
    rows = dict(table(run(["profile", "unif(a=0,b=1)"], capsys)[1])[1:])
    assert rows["m_index"] == "undefined" and rows["upper_endpoint"] == "1"
    assert rows["evi"] == "-1"


def test_crossing(capsys):
    code, out, _ = run(["crossing", "--score", "se(k=1)", "--x0", "1", "--x1", "3",
                        "--f0", "point(c=0)", "--f1", "point(c=3)"], capsys)
    assert code == 0
    header, row = table(out)
    assert header == ["a", "b", "lambda_star", "residual"]
    assert row[:3] == ["4", "-8", "0.66666666666666663"]
    assert float(row[3]) <= 1e-9


def test_bound_and_curve(capsys):
    args = ["--score", "crps", "--truth", "exp(rate=1)", "--alt", "pareto(alpha=2,scale=1)",
            "--grid", "0,0.01,0.5"]
    code, out, _ = run(["bound", *args], capsys)
    assert code == 0
    rows = table(out)
    assert rows[0] == ["lambda", "gap", "bound", "satisfied"]
    assert rows[1] == ["0", "0", "0", "true"]
    assert all(r[3] == "true" for r in rows[1:])
    assert run(["curve", *args], capsys)[1] == out


def test_grid_descriptors():
    assert parse_grid("lin:0:0.5:3") == [0.0, 0.25, 0.5]
    assert parse_grid("geom:0.001:0.1:3") == pytest.approx([0.001, 0.01, 0.1])
    with pytest.raises(InvalidParameterError):
        parse_grid("0.5,1")
    with pytest.raises(SpecParseError):
        parse_grid("lin:0:1")
    with pytest.raises(SpecParseError):
        parse_grid("0.1,abc")


def test_epsilon(capsys):
    code, out, _ = run(["epsilon", "--score", "crps", "--truth", "exp(rate=1)",
                        "--alt", "pareto(alpha=2,scale=1)", "--eps", "1e-3", "--functional", "evi"],
                       capsys)
    assert code == 0
    header, row = table(out)
    rec = dict(zip(header, row))
    assert header == ["epsilon", "D", "lambda_eps", "measured_gap", "t_truth", "t_construct",
                      "tail_verdict"]
    assert float(rec["measured_gap"]) <= 1e-3
    assert rec["t_construct"] == "0.5" and rec["t_truth"] == "0"
    assert rec["tail_verdict"] == "FirstHeavier"


def test_tailcmp(capsys):
    code, out, _ = run(["tailcmp", "pareto(alpha=2,scale=1)", "pareto(alpha=2,scale=2)"], capsys)
    rows = table(out)
    assert code == 0 and rows[0] == ["verdict", "ratio", "probe_x", "probe_ratio"]
    assert len(rows) == 13
    assert {r[0] for r in rows[1:]} == {"TailEquivalent"}
    assert float(rows[1][1]) == pytest.approx(0.25)
    code, out, _ = run(["tailcmp", "unif(a=0,b=1)", "unif(a=0,b=2)"], capsys)
    assert table(out)[1] == ["SecondHeavier", "undefined", "", ""]


def test_power_and_output_file(tmp_path, capsys):
    dest = tmp_path / "power.csv"
    argv = ["power", "--score", "crps", "--truth", "exp(rate=1)",
            "--alt", "mix(0.99:exp(rate=1),0.01:pareto(alpha=2,scale=1))",
            "--n", "100,200", "--reps", "10", "--seed", "4"]
    code, out, _ = run(argv + ["-o", str(dest)], capsys)
    assert code == 0 and out == ""
    rows = table(dest.read_text())
    assert rows[0] == ["n", "mean_diff", "stderr", "detect_frac"] and len(rows) == 3
    assert run(argv, capsys)[1] == dest.read_text()


@pytest.mark.parametrize("argv", [
    ["power", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "pareto(alpha=2.5,scale=1)",
     "--n", "50", "--reps", "5", "--seed", "9"],
    ["epsilon", "--score", "wcrps(q=2)", "--truth", "norm(mu=0,sigma=1)", "--alt", "gpd(gamma=0.3)",
     "--eps", "0.1", "0.01", "--functional", "rv_index"],
    ["profile", "gev(gamma=0.2)"],
])
def test_byte_identical_reruns(argv, capsys):
    first = run(argv, capsys)
    assert first[0] == 0
    assert run(argv, capsys) == first


@pytest.mark.parametrize("argv,code", [
    (["profile", "pareto(alpha=2"], 2),
    (["profile", "pareto(alpha=-1,scale=1)"], 2),
    (["profile", "weibull(k=1)"], 2),
    (["bound", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "exp(rate=2)", "--grid", "1.0"], 2),
    (["bound", "--score", "logscore", "--truth", "exp(rate=1)", "--alt", "exp(rate=2)"], 2),
    (["crossing", "--score", "se(k=1)", "--x0", "1", "--x1", "3", "--f0", "point(c=3)",
      "--f1", "point(c=3)"], 3),
    (["bound", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "pareto(alpha=1,scale=1)"], 3),
    (["power", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "exp(rate=1)", "--n", "x"], 2),
    (["power", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "exp(rate=1)", "--n", "10",
      "--reps", "1"], 2),
    (["epsilon", "--score", "crps", "--truth", "exp(rate=1)", "--alt", "exp(rate=2)",
      "--eps", "-1", "--functional", "evi"], 2),
    (["tailcmp", "exp(rate=1)"], 2),
    (["nosuchcommand"], 2),
])
def test_exit_status_matrix(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:  # argparse usage errors
        got = exc.code
    _, err = capsys.readouterr()
    assert got == code
    assert err


def test_parse_error_message_names_token(capsys):
    code, _, err = run(["profile", "pareto(alpha=two,scale=1)"], capsys)
    assert code == 2
    assert "'two'" in err and "position 13" in err


def test_empirical_bad_line(tmp_path, capsys):
    path = tmp_path / "data.txt"
    path.write_text("0.5\n1.5\noops\n")
    code, _, err = run(["profile", f"emp(file={path})"], capsys)
    assert code == 2 and "line 3" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tailscore", "profile", "exp(rate=1)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "field,value"
    assert "rv_index,-inf" in proc.stdout


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(None) == "undefined"
    assert fmt(True) == "true"
    assert float(fmt(2 / 3)) == 2 / 3
