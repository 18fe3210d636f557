import csv
import io
import json
import subprocess
import sys

import pytest

from sqfull.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_sieve_100(capsys):
    code, out, _ = run(capsys, "sieve", "--limit", "100")
    assert code == 0
    table = rows(out)
    assert table[0] == ["n", "e", "d"]
    assert len(table) - 1 == 14
    assert table[-1] == ["100", "10", "1"]


def test_exponents_json(capsys):
    code, out, _ = run(capsys, "exponents")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert abs(doc["varpi0"] - 0.1689) < 1e-3
    assert doc["varpi_psi_exact"] == "29/100"


def test_pell_rows(capsys):
    code, out, _ = run(capsys, "pell", "--limit", "500")
    assert [r[2] for r in rows(out)[1:]] == ["2", "14", "82", "478"]


def test_domain_error_exit_1(capsys):
    code, _, err = run(capsys, "decompose", "--n", "12")
    assert code == 1 and "not square-full" in err
    code, _, _ = run(capsys, "abc-chain", "--c", "1", "--b", "4", "--e", "5", "--d", "2", "--n", "13")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--limit", "0"],
        ["sieve"],
        ["nonsense"],
        ["sieve", "--limit", "10", "--bogus"],
        ["poly-count", "--poly", "1,2", "--limit", "5"],
        ["detmethod", "--alpha", "2", "--nwindow", "10", "--eta", "-1"],
        ["mordell", "--D", "0", "--box", "5"],
    ],
)
def test_usage_error_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_rationals_printed_as_fractions(capsys):
    code, out, _ = run(capsys, "gaussian-check", "--alpha", "2", "--limit", "20")
    table = rows(out)
    row14 = next(r for r in table[1:] if r[0] == "14")
    header = table[0]
    assert row14[header.index("w")] == "-1/2"
    assert row14[header.index("residual")] == "1/4"


def test_dyadic_check_json(capsys):
    code, out, _ = run(capsys, "dyadic-check", "--poly", "1,0,4", "--N", "5000", "--format", "json")
    doc = json.loads(out)
    assert doc["equal"] and doc["lhs"] == doc["rhs"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "o.csv"
    assert main(["pell", "--limit", "100", "--out", str(path)]) == 0
    assert path.read_text().startswith("d,k,n\n")


def test_fit_command(tmp_path, capsys):
    path = tmp_path / "series.csv"
    path.write_text("x,y\n100,10\n10000,100\n1000000,1000\n")
    code, out, _ = run(capsys, "fit", "--in", str(path))
    assert code == 0
    assert float(rows(out)[1][0]) == pytest.approx(0.5)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert main(["fit", "--in", str(bad)]) == 1


DETERMINISM_CASES = [
    ["sieve", "--limit", "200000"],
    ["count", "--limit", "1000000", "10000000"],
    ["poly-count", "--poly", "1,0,4", "--limit", "200000", "--majorant"],
    ["dyadic-check", "--poly", "1,0,1", "--N", "20000", "--format", "json"],
    ["mordell", "--dmax", "30", "--box", "2000"],
    ["gaussian-check", "--alpha", "4", "--limit", "30000"],
    ["detmethod", "--alpha", "2", "--nwindow", "30000", "--probe-samples", "100", "--seed", "3"],
    ["randpoly", "--H", "8", "--N", "40"],
    ["mcell", "--poly", "1,0,4", "--N", "1000", "--E", "1/2", "--D", "4"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: a[0])
def test_byte_identical_across_threads(capsys, argv):
    outs = []
    for threads in ("1", "8", "8"):
        code, out, _ = run(capsys, *argv, "--threads", threads)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sqfull", "pell", "--limit", "20"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "d,k,n\n1,1,2\n7,5,14\n"


def test_thread_env_default(monkeypatch, capsys):
    monkeypatch.setenv("SQFULL_THREADS", "4")
    code, out, _ = run(capsys, "sieve", "--limit", "1000")
    monkeypatch.setenv("SQFULL_THREADS", "1")
    code2, out2, _ = run(capsys, "sieve", "--limit", "1000")
    assert out == out2
