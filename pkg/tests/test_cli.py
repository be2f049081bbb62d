import json

import pytest

from regnc.cli import main

from conftest import HORN_CLAUSAL, NON_HNC_DISJ, UNIT_CASCADE, CLASH_CHAIN


@pytest.fixture
def write(tmp_path):
    def _write(text, name="f.rnc"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse(capsys, write):
    code, out, _ = run(capsys, "parse", write("{&  P>=.5\n(| Q<=1/4)}"))
    assert code == 0 and out == "{& P>=0.5 (| Q<=0.25)}\n"


def test_recognize(capsys, write):
    code, out, _ = run(capsys, "recognize", write(HORN_CLAUSAL))
    assert code == 0 and out == "HORN-NC\n"
    code, out, _ = run(capsys, "recognize", write(NON_HNC_DISJ))
    assert code == 0 and out.splitlines() == ["NOT-HORN-NC", "@"]
    code, out, _ = run(capsys, "recognize", "--format", "json", write(NON_HNC_DISJ))
    assert json.loads(out) == {"hnc": False, "witness": []}


def test_solve(capsys, write):
    code, out, _ = run(capsys, "solve", write(UNIT_CASCADE))
    assert code == 0 and out.splitlines() == ["SAT", "P=0.8", "R=0.9"]
    code, out, _ = run(capsys, "solve", "--trace", write(CLASH_CHAIN))
    lines = out.splitlines()
    assert code == 1 and lines[0] == "UNSAT" and lines[-1].startswith("⊥αβ")
    code, out, _ = run(capsys, "solve", "--format", "json", write(UNIT_CASCADE))
    data = json.loads(out)
    assert data["status"] == "SAT" and data["model"] == {"P": "0.8", "R": "0.9"}
    code, out, _ = run(capsys, "solve", write("{& P>=0.2 0>=1}"))
    assert code == 1 and out == "UNSAT\n"
    code, _, err = run(capsys, "solve", write("(| P>=0.5 Q>=0.5)"))
    assert code == 2 and "error" in err


def test_clausal_and_oracle(capsys, write):
    code, out, _ = run(capsys, "clausal", write("(| {& P<=0.1 Q<=0.2} R>=1)"))
    assert code == 0 and out == "{& (| P<=0.1 R>=1) (| Q<=0.2 R>=1)}\n"
    code, _, err = run(capsys, "clausal", "--max-clauses", "1", write("(| {& P<=0.1 Q<=0.2} R>=1)"))
    assert code == 2
    code, out, _ = run(capsys, "oracle", write("{& P>=0.8 P<=0.5}"))
    assert code == 1 and out == "UNSAT\n"
    code, out, _ = run(capsys, "oracle", write("{& P>=0.8 (| P<=0.5 Q>=0.3)}"))
    assert code == 0 and out.splitlines() == ["SAT", "P=0.8", "Q=0.3"]


def test_eval(capsys, write):
    code, out, _ = run(capsys, "eval", write(HORN_CLAUSAL), "--interp", write("R=0.1\n", "i.txt"))
    assert code == 0 and out == "1\n"


def test_lp_query(capsys, write):
    prog = write("chain 10\nfact P>=0.8\nrule P>=0.7 -> Q>=0.5\n", "p.rlp")
    code, out, _ = run(capsys, "lp", "query", "--program", prog, "--query", "Q>=0.5")
    assert code == 0 and out.splitlines() == ["TRUE", "semantics=classical"]
    code, out, _ = run(capsys, "lp", "query", "--program", prog, "--query", "Q>=0.6")
    assert code == 1 and out.splitlines()[0] == "FALSE"
    code, out, _ = run(capsys, "lp", "query", "--program", prog, "--query", "S<=0.5")
    assert code == 0 and out.splitlines() == ["TRUE", "semantics=minimal-model"]
    bad = write("chain 10\nfact P>=0.8\nrule P>=0.7 -> (|)\n", "b.rlp")
    code, out, _ = run(capsys, "lp", "query", "--program", bad, "--query", "Q>=0.5")
    assert code == 3 and out.splitlines()[0] == "UNSAT-PROGRAM"


def test_gen_and_bench(capsys):
    code, a, _ = run(capsys, "gen", "--seed", "42", "--props", "4", "--depth", "3")
    code2, b, _ = run(capsys, "gen", "--seed", "42", "--props", "4", "--depth", "3")
    assert code == code2 == 0 and a == b
    code, out, _ = run(capsys, "bench", "--sizes", "100,300")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("n\t") and len(lines) == 4
    assert lines[-1].startswith("exponent=")
    code, out, _ = run(capsys, "bench", "--sizes", "100", "--format", "json")
    assert json.loads(out)["exponent"] is None


def test_errors(capsys, write):
    code, out, err = run(capsys, "parse", write("{& P>=0.5"))
    assert code == 2 and err.startswith("error:")
    code, out, _ = run(capsys, "parse", "--format", "json", write("P>=2"))
    assert code == 2 and "error" in json.loads(out)
    code, _, err = run(capsys, "parse", "/nonexistent/x.rnc")
    assert code == 2
