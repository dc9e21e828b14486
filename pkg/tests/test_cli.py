import json

from plc.cli import main
from plc.lab.suites import FIXTURES

ALICE = str(FIXTURES / "alice.json")
FAILING = "hi(l1),!hi(l2),hi(l3),hi(l7),!hi(l8)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "B1 p&q")
    assert code == 0 and out.strip() == "B1 p & q"
    code, out, _ = run(capsys, "parse", "--json", "X (p ~>2 q)")
    assert json.loads(out) == {"formula": "X (p ~>2 q)", "depth": 2, "props": ["p", "q"]}


def test_parse_error(capsys):
    code, _, err = run(capsys, "parse", "p &")
    assert code == 2 and err.startswith("plc:")


def test_mc(capsys):
    assert run(capsys, "mc", ALICE, "--world", "r_tp", "--formula", "true")[:2] == (0, "true\n")
    assert run(capsys, "mc", ALICE, "--world", "l_tp", "--formula", "tell ~>1 p")[0] == 1
    code, out, _ = run(capsys, "mc", ALICE, "--json", "--formula", "p")
    assert code == 1 and json.loads(out)["false_at"] == ["l_tn", "r_tn"]


def test_mc_system(capsys):
    path = str(FIXTURES / "forgetful.json")
    assert run(capsys, "mc", path, "--run", "r1", "--time", "0", "--formula", "X p")[0] == 0
    assert run(capsys, "mc", path, "--run", "r1", "--formula", "p")[0] == 2


def test_conditions(capsys):
    code, out, _ = run(capsys, "conditions", ALICE, "--conditions", "unif,cons", "--json")
    assert code == 0 and json.loads(out)["UNIF"]["holds"]
    code, out, _ = run(capsys, "conditions", ALICE, "--conditions", "SDP")
    assert code == 1 and out.startswith("SDP: no")


def test_diag(capsys):
    code, out, _ = run(capsys, "diag", "--circuit", "fulladder", "--obs", FAILING, "--order", "card")
    assert code == 0 and "Bel = {{X1}}" in out
    code, out, _ = run(capsys, "diag", "--json", "--obs", FAILING, "--order", "subset")
    assert sorted(json.loads(out)["bel"]) == ["{X1}", "{X2,A2}", "{X2,O1}"]


def test_diag_over_time(capsys):
    code, out, _ = run(capsys, "diag", "--json", "--obs", "hi(l1),hi(l2),hi(l3),hi(l7),hi(l8)",
                       "--obs", FAILING)
    assert code == 0
    assert json.loads(out)["bel"] == [["{}"], ["{X1}"]]


def test_system_check(capsys):
    code, out, _ = run(capsys, "system-check", str(FIXTURES / "forgetful.json"), "--json")
    data = json.loads(out)
    assert code == 1 and data["synchronous"]["holds"] and not data["perfect_recall"]["holds"]
    assert run(capsys, "system-check", ALICE, "--checks", "bogus")[0] == 2


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "--scheme", "K2[B1]", "--conditions", "CONS,NORM",
                       "--max-worlds", "2")
    assert code == 0
    code, out, _ = run(capsys, "axioms", "--scheme", "K3[B1]", "--conditions", "CONS,NORM",
                       "--max-worlds", "2", "--expect-counterexample", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["verdict"] == "counterexample" and "witness" in rec
    assert run(capsys, "axioms", "--scheme", "K3[B1]", "--max-worlds", "2")[0] == 1


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", ALICE, "--formula", "tell ~>1 p", "--json")
    assert code == 0 and json.loads(out)["agree"]
    assert run(capsys, "oracle", ALICE, "--formula", "p")[0] == 2


def test_suite_and_determinism(capsys):
    a = run(capsys, "suite", "coherence", "--seed", "7", "--json")
    b = run(capsys, "suite", "coherence", "--seed", "7", "--json")
    assert a[0] == 0 and a[1] == b[1]
    assert all(json.loads(line)["ok"] for line in a[1].splitlines())
    assert run(capsys, "suite", "kd45", "--agents", "2")[0] == 2
    assert run(capsys, "suite", "nosuch")[0] == 2


def test_bundled_fixtures(capsys):
    code, out, _ = run(capsys, "suite", "all", "--fixtures", "--fixtures-only")
    assert code == 0 and "FAILED" not in out


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "mc", str(tmp_path / "missing.json"), "--formula", "p")[0] == 2
    assert run(capsys, "mc", ALICE, "--formula", "p", "--cap", "worlds=2")[0] == 3
    assert run(capsys)[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PLC_CAP_OVERRIDE", "worlds=2")
    assert run(capsys, "mc", ALICE, "--formula", "p")[0] == 3
