import json
import subprocess
import sys

import pytest

from ordtope.cli import main
from ordtope.codes import l_encode
from ordtope.numeric import gen_primes


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_encode_decode(capsys):
    assert run(capsys, "encode", "--g", "--basis", "first:3", "1,2,3")[:2] == (0, "2250\n")
    assert run(capsys, "decode", "--g", "--basis", "first:3", "2250")[:2] == (0, "1,2,3\n")
    code, _, err = run(capsys, "decode", "--g", "--basis", "first:3", "77")
    assert code == 3 and "not-in-factorial-domain" in err
    assert run(capsys, "encode", "--l", "--basis", "first:3", "1,1,0")[1] == "778150,6\n"
    assert run(capsys, "encode", "--g", "--basis", "prog:3:4", "1,1")[1] == "21\n"


def test_malformed_input(capsys):
    assert run(capsys, "encode", "--g", "--basis", "nope", "1")[0] == 2
    assert run(capsys, "encode", "--g", "1,x")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["encode"])
    assert exc.value.code == 2


def test_order_curve(capsys):
    code, out, _ = run(capsys, "order-curve", "--n", "3", "--basis", "first:3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "rank,value_mantissa,digits,preimage" and len(lines) == 9
    assert lines[1].endswith("0;0;0") and lines[-1].endswith("1;1;1")


def test_search(capsys):
    target = l_encode((0, 1, 1), gen_primes(3)).sum
    code, out, _ = run(capsys, "search", "--n", "3", "--target", str(target))
    assert code == 0 and out.startswith("preimage=0,1,1 ")
    assert run(capsys, "search", "--n", "3", "--target", "0.5")[0] == 4
    code, out, _ = run(capsys, "search", "--n", "16", "--seed", "11", "--format", "json")
    row = json.loads(out)
    assert code == 0 and row["found"] and row["comparisons"] <= 18


def test_budget_exit(capsys, monkeypatch):
    assert run(capsys, "order-curve", "--n", "12", "--budget", "100")[0] == 5
    monkeypatch.setenv("ORDTOPE_BUDGET", "100")
    assert run(capsys, "order-curve", "--n", "12")[0] == 5


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--claims", "totient", "--n", "30", "--primes", "2,3,5")
    (r,) = json.loads(out)
    assert code == 0 and r["verdict"] == "verified" and r["computed_value"] == 8
    code, out, _ = run(capsys, "audit", "--claims", "eq.prop4", "--k", "1", "--m", "1")
    (r,) = json.loads(out)
    assert r["paper_value"] == 9 and r["computed_value"] == 4
    assert run(capsys, "audit", "--claims", "nosuch")[0] == 2


def test_jst(capsys, tmp_path):
    code, out, _ = run(capsys, "jst", "--k", "2", "--m", "1", "--curves", str(tmp_path))
    assert code == 0 and len(out.splitlines()) == 3
    assert (tmp_path / "code3.csv").read_text().startswith("rank,")
    code, out, _ = run(capsys, "jst", "--k", "1", "--m", "1", "--audit")
    assert {r["claim"] for r in json.loads(out)} >= {"eq.prop1", "eq.prop4"}
    assert run(capsys, "jst", "--k", "0", "--m", "1")[0] == 2


def test_sphere_and_beadsort(capsys, monkeypatch):
    code, out, _ = run(capsys, "sphere", "--n", "4", "--samples", "3", "--seed", "2")
    assert code == 0 and len(out.splitlines()) == 3
    assert run(capsys, "sphere", "--n", "4", "--samples", "3", "--seed", "2")[1] == out
    assert run(capsys, "sphere", "--n", "3")[0] == 2
    assert run(capsys, "beadsort", stdin="3 1\n2", monkeypatch=monkeypatch)[1] == "1 2 3\n"
    assert run(capsys, "beadsort", "--max", "2", stdin="3 1", monkeypatch=monkeypatch)[0] == 2


def test_bench_deterministic(capsys):
    args = ("bench", "--sizes", "4,8", "--targets", "5", "--no-timing")
    code, out, _ = run(capsys, *args)
    assert code == 0 and run(capsys, *args)[1] == out
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert {r[1] for r in rows} == {"order_search", "linear_scan", "sort_then_search"}


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "ordtope.cli", "encode", "1,2,3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "2250\n"


def test_g_decode_trims_without_length(capsys):
    assert run(capsys, "decode", "--g", "50")[1] == "1,0,2\n"
    assert run(capsys, "decode", "--g", "--n", "5", "50")[1] == "1,0,2,0,0\n"
    assert run(capsys, "decode", "--l", "--n", "3", "--k", "2", "1698969,6")[1] == "1,0,2\n"
