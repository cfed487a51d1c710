import json
import subprocess
import sys

import pytest

from chibound.cli import main
from chibound.graph import complete_graph, from_text, to_text
from chibound.optree import KGlue, Leaf, Substitute, dumps, loads

TWO_TRIANGLES = KGlue(1, Leaf(complete_graph("abx")), Leaf(complete_graph("xcd")), frozenset("x"))
C5_TEXT = "p 5 5\nv a\nv b\nv c\nv d\nv e\ne a b\ne a e\ne b c\ne c d\ne d e\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "bowtie.json").write_text(dumps(TWO_TRIANGLES))
    (tmp_path / "c5.g").write_text(C5_TEXT)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_color_kglue_example(files, capsys):
    code, _, err = run(capsys, "color", files / "bowtie.json", "--method", "kglue",
                       "--bound", "kglue(x,1)", "-o", files / "c.txt", "--cert", files / "r.json")
    assert code == 0 and "pass" in err
    colors = {line.split()[1] for line in (files / "c.txt").read_text().splitlines()}
    assert len(colors) <= 4
    report = json.loads((files / "r.json").read_text())
    assert report["verdict"] == "pass" and report["bound"] == "kglue(x, 1)"
    assert report["trace"]["k"] == 1


def test_verify_monochromatic_edge_fails(files, capsys):
    (files / "g").write_text(to_text(complete_graph("ab")))
    (files / "c").write_text("a 0\nb 0\n")
    code, out, _ = run(capsys, "verify", files / "g", files / "c", "--bound", "x")
    assert code == 1 and "not proper" in out


def test_oracle_chif_on_lexpow(files, capsys):
    assert run(capsys, "gen", "lexpow", files / "c5.g", 2, "-o", files / "l.g")[0] == 0
    code, out, _ = run(capsys, "oracle", files / "l.g", "--chif")
    assert (code, out) == (0, "25/4\n")


def test_oracle_other_queries(files, capsys):
    assert run(capsys, "oracle", files / "c5.g", "--omega")[1] == "2\n"
    assert run(capsys, "oracle", files / "c5.g", "--chi")[1] == "3\n"
    assert run(capsys, "oracle", files / "c5.g", "--cutset", 1)[1] == "none\n"
    assert run(capsys, "oracle", files / "c5.g", "--cutset", 2)[1] == "a c\n"


@pytest.mark.parametrize("method, bound", [
    ("depth", "x"), ("poly", "x^1"), ("poly", "polystar(1)"), ("supermult", "2^(x-1)"),
    ("supermult", "supermultstar(2^(x-1))"),
])
def test_color_then_verify_round_trip(files, capsys, method, bound):
    t = Substitute(complete_graph("pq"), {"p": Leaf(complete_graph(2)), "q": TWO_TRIANGLES.left})
    (files / "t.json").write_text(dumps(t))
    code, _, _ = run(capsys, "color", files / "t.json", "--method", method, "--bound", bound,
                     "-o", files / "c.txt", "--cert", files / "r.json")
    assert code == 0
    run(capsys, "realize", files / "t.json", "-o", files / "g.txt")
    report = json.loads((files / "r.json").read_text())
    code, out, _ = run(capsys, "verify", files / "g.txt", files / "c.txt", "--bound", report["bound"])
    assert (code, out) == (0, "pass\n")


def test_outputs_are_byte_deterministic(files, capsys):
    outs = []
    for n in range(2):
        run(capsys, "gen", "tree", "--seed", 11, "--mix", "leaf=1,substitute=2", "-o", files / f"t{n}.json")
        run(capsys, "color", files / f"t{n}.json", "--method", "supermult", "--bound", "2^(x-1)",
            "-o", files / f"c{n}", "--cert", files / f"r{n}")
        outs.append([(files / name).read_bytes() for name in (f"t{n}.json", f"c{n}", f"r{n}")])
    assert outs[0] == outs[1]


def test_realize_validate_depth_normalize_reduce(files, capsys):
    code, out, _ = run(capsys, "realize", files / "bowtie.json")
    assert code == 0 and len(from_text(out)) == 5
    assert run(capsys, "validate", files / "bowtie.json")[:2] == (0, "valid\n")
    t = Substitute(complete_graph("pq"), {"p": Leaf(complete_graph(1)), "q": Leaf(complete_graph(2))})
    (files / "s.json").write_text(dumps(t))
    assert run(capsys, "depth", files / "s.json")[1] == "1\n"
    code, out, _ = run(capsys, "normalize", files / "bowtie.json")
    assert code == 0 and loads(out) == TWO_TRIANGLES
    code, out, _ = run(capsys, "reduce", files / "s.json")
    assert code == 0 and len(from_text(out)) == 3


def test_validate_reports_issues(files, capsys):
    bad = KGlue(1, Leaf(complete_graph("abx")), Leaf(complete_graph("abc")), frozenset("ab"))
    (files / "bad.json").write_text(dumps(bad))
    code, out, _ = run(capsys, "validate", files / "bad.json")
    assert code == 2 and "|shared| exceeds k" in out
    code, _, err = run(capsys, "realize", files / "bad.json")
    assert code == 2 and "input error" in err


@pytest.mark.parametrize("argv", [
    ["oracle", "missing.g", "--chi"],
    ["color", "{t}", "--method", "poly", "--bound", "x+1"],
    ["color", "{t}", "--method", "depth", "--bound", "y"],
    ["color", "{t}", "--method", "kglue", "--bound", "kglue(x,1)", "--k", "2"],
    ["gen", "tree", "--seed", "1", "--mix", "leaf=x"],
    ["gen", "mycielski", "9"],
])
def test_input_errors_exit_2(files, capsys, argv):
    argv = [a.format(t=files / "bowtie.json") for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and "input error" in err


def test_certification_failure_exits_1(files, capsys):
    (files / "c5t.json").write_text(json.dumps({"leaf": {"graph": C5_TEXT, "class": "base"}}))
    code, _, err = run(capsys, "color", files / "c5t.json", "--method", "depth", "--bound", "const 2")
    assert code == 1 and "certification failed" in err


def test_budget_exceeded_exits_3(files, capsys):
    run(capsys, "gen", "mycielski", 3, "-o", files / "m.g")
    code, _, err = run(capsys, "--budget", 10, "oracle", files / "m.g", "--chi")
    assert code == 3 and "budget" in err


def test_inconclusive_precision_exits_4(files, capsys):
    # omega 3 with 5 colors against 3^log2(3) = 5.70...: a 2-bit enclosure is [2, 512]
    g = from_text("p 5 3\nv a\nv b\nv c\nv d\nv e\ne a b\ne a c\ne b c\n")
    (files / "g").write_text(to_text(g))
    (files / "c").write_text("a 0\nb 1\nc 2\nd 3\ne 4\n")
    argv = ["verify", files / "g", files / "c", "--bound", "supermultstar(const 1)"]
    assert run(capsys, "--precision-bits", 2, *argv)[:2] == (4, "inconclusive-precision\n")
    assert run(capsys, *argv)[:2] == (0, "pass\n")


def test_flags_validated_before_work(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--budget", "0", "oracle", "x", "--chi"])
    assert exc.value.code == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "chibound", "oracle", str(files / "c5.g"), "--chi"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "3\n"


def test_budget_flag_does_not_leak(files, capsys):
    from chibound import oracle
    before = oracle.DEFAULT_BUDGET
    run(capsys, "--budget", 5, "oracle", files / "c5.g", "--chi")
    assert oracle.DEFAULT_BUDGET == before
