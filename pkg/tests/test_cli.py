import io
import os
import subprocess
import sys

import pytest

from polyra.cli import run
from polyra.corpus import CORPUS, RUNNING, UNTYPABLE, reference
from polyra.inference import typable_bruteforce
from polyra.ra_ast import parse_expr
from polyra.type_formulas import formulas_equivalent_bounded, parse_formula


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def call(capsys, *argv, stdin=None):
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = run(list(argv))
    finally:
        sys.stdin = sys.__stdin__
    out = capsys.readouterr()
    return code, out.out, out.err


def test_infer_running_example(capsys, files):
    code, out, err = call(capsys, "infer", files("e.ra", RUNNING))
    assert code == 0 and err == ""
    phi = parse_formula(out, parse_expr(RUNNING))
    assert formulas_equivalent_bounded(phi, reference(RUNNING))


def test_infer_simplify_and_stdin(capsys):
    code, out, _ = call(capsys, "infer", "--simplify", "-", stdin=RUNNING)
    assert code == 0
    assert "attr B: !r & s || B: true" in out


def test_infer_is_deterministic(capsys, files):
    path = files("e.ra", CORPUS[2])
    assert call(capsys, "infer", path) == call(capsys, "infer", path)


def test_infer_early_stop(capsys, files):
    code, out, err = call(capsys, "infer", "--early-stop", files("e.ra", UNTYPABLE[1]))
    assert code == 1 and out == ""
    assert "union" in err and "0..35" in err


def test_typable(capsys, files):
    code, out, _ = call(capsys, "typable", files("e.ra", "(project[A](r) union project[B](s))"))
    assert (code, out) == (1, "untypable\n")
    code, out, _ = call(capsys, "typable", "--oracle", files("f.ra", "((r times s) join (r union s))"))
    assert (code, out) == (0, "typable\n")


def test_check(capsys, files):
    schema = files("t.txt", "r: A B\ns: B C\n")
    code, out, _ = call(capsys, "check", "--schema", schema, files("e.ra", "(r join s)"))
    assert (code, out) == (0, "A B C\n")
    code, out, err = call(capsys, "check", "--schema", schema, files("f.ra", "(r union s)"))
    assert code == 1 and out == "" and "union" in err


def test_solve_eqs(capsys, files):
    code, out, _ = call(capsys, "solve-eqs", files("s.txt", "L: a1 a2 a3; R: b1 b2 b3; a1 = b1; a2 = b1 b2"))
    assert code == 0
    assert out.splitlines()[1:] == ["a1 =", "a2 = c1", "a3 = c2 c3", "b1 =", "b2 = c1", "b3 = c3 c4"]


def test_eval(capsys, files):
    db = files("db.txt", "relation r (A, B)\nx, y\nu, v\nrelation s (B, C)\ny, z\n")
    code, out, _ = call(capsys, "eval", "--db", db, files("e.ra", "(r join s)"))
    assert (code, out) == (0, "relation result (A, B, C)\nx, y, z\n")


def test_equiv(capsys, files):
    a = files("a.ra", "(r union s)")
    b = files("b.ra", "(s union r)")
    c = files("c.ra", "(r minus s)")
    assert call(capsys, "equiv", a, b)[:2] == (0, "equivalent\n")
    code, out, err = call(capsys, "equiv", a, c)
    assert code == 1 and out.startswith("relation r") and "not equivalent" in err


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["infer"],
    ["infer", "/nonexistent/file.ra"],
    ["equiv", "-", "-", "--attrs", "9"],
])
def test_usage_errors(capsys, argv):
    code, out, _ = call(capsys, *argv, stdin="r")
    assert code == 2 and out == ""


def test_parse_error_exit_code(capsys, files):
    code, out, err = call(capsys, "infer", files("e.ra", "(r union"))
    assert code == 2 and "byte" in err


def test_bad_database(capsys, files):
    code, _, err = call(capsys, "eval", "--db", files("db.txt", "relation r (A, B)\nx\n"), files("e.ra", "r"))
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize("text", CORPUS)
def test_exit_codes_on_corpus(capsys, files, text):
    path = files("e.ra", text)
    code, _, _ = call(capsys, "typable", path)
    assert code == (0 if typable_bruteforce(parse_expr(text)) else 1)
    assert call(capsys, "infer", path)[0] == 0


def test_output_independent_of_hash_seed(files):
    path = files("e.ra", CORPUS[2])
    outs = set()
    for seed in ("0", "1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "polyra.cli", "infer", path],
                              capture_output=True, text=True, env=env, check=True)
        outs.add(proc.stdout)
    assert len(outs) == 1
