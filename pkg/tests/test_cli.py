import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from weavekit.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, format_move, main, parse_move
from weavekit.moves import Move


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def plain_file(tmp_path):
    path = tmp_path / "plain.weave"
    code, _out, _err = run_cli(
        "build", "--tiling", "(4,4,4,4)", "--method", "Cr", "--m", "1",
        "--scale", "2", "--seq", "1,2:1,1", "-o", str(path),
    )
    assert code == EXIT_OK
    return path


def test_build_reports_classification(tmp_path):
    path = tmp_path / "d.weave"
    code, out, err = run_cli(
        "build", "--tiling", "(4,4,4,4)", "--method", "4Br", "--m", "2",
        "--scale", "1", "-o", str(path),
    )
    assert code == EXIT_OK
    assert "classification = Polycatenane" in err


def test_build_rejects_hyperbolic():
    code, _out, err = run_cli(
        "build", "--tiling", "(5,5,5,5)", "--method", "Cr", "--m", "1", "--scale", "1"
    )
    assert code == EXIT_INPUT
    assert "curated" in err


def test_analyze_text_report(plain_file):
    code, out, _err = run_cli("analyze", str(plain_file))
    assert code == EXIT_OK
    assert "span = 12" in out
    assert "alternating = True" in out
    assert "classification = Weave" in out


def test_analyze_json_report(plain_file):
    code, out, _err = run_cli("--format", "json-report", "analyze", str(plain_file))
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["span"] == 12 and rep["white"] == 2


def test_analyze_missing_file():
    code, _out, err = run_cli("analyze", "/nonexistent/х.weave")
    assert code == EXIT_INPUT


def test_analyze_budget_guard(plain_file):
    code, _out, err = run_cli("--crossing-budget", "3", "analyze", str(plain_file))
    assert code == EXIT_BUDGET


def test_analyze_deterministic_across_runs_and_parallel(plain_file):
    runs = [
        run_cli("analyze", str(plain_file)),
        run_cli("analyze", str(plain_file)),
        run_cli("--parallel", "4", "analyze", str(plain_file)),
        run_cli("--parallel", "4", "analyze", str(plain_file)),
    ]
    outputs = {out for _code, out, _err in runs}
    assert len(outputs) == 1


def test_fuzz_trace_roundtrip(plain_file, tmp_path):
    trace_path = tmp_path / "walk.trace"
    out_path = tmp_path / "end.weave"
    code, out, _err = run_cli(
        "fuzz", str(plain_file), "--steps", "25", "--seed", "7",
        "--cap", "11", "--trace", str(trace_path), "-o", str(out_path),
    )
    assert code == EXIT_OK
    lines = trace_path.read_text().splitlines()
    assert lines
    moves = [parse_move(line) for line in lines]
    assert [format_move(m) for m in moves] == lines
    # replay the trace and reproduce the final diagram byte for byte
    from weavekit import diagram as D
    from weavekit.moves import apply_move

    cur = D.parse(plain_file.read_text())
    for m in moves:
        cur = apply_move(cur, m)
    assert D.serialize(cur) == out_path.read_text()


def test_fuzz_seed_determinism(plain_file, tmp_path):
    t1 = tmp_path / "a.trace"
    t2 = tmp_path / "b.trace"
    run_cli("fuzz", str(plain_file), "--steps", "30", "--seed", "3", "--trace", str(t1))
    run_cli("fuzz", str(plain_file), "--steps", "30", "--seed", "3", "--trace", str(t2))
    assert t1.read_text() == t2.read_text()


def test_canonicalize_diagram(plain_file):
    code, out, _err = run_cli("canonicalize", str(plain_file), "--certify-ball", "3")
    assert code == EXIT_OK
    assert "certified = True" in out
    assert "match True" in out


def test_canonicalize_winding_input():
    code, out, _err = run_cli("canonicalize", "--winding", "(5,3)")
    assert code == EXIT_OK
    assert "q_after = 1" in out
    assert "canonical = [(1, 0)]" in out


def test_verify_suites_pass():
    for suite, extra in (
        ("oracle", []),
        ("invariance", ["--steps", "40", "--cap", "10"]),
        ("tait1", ["--steps", "120"]),
        ("tait2", []),
    ):
        code, out, _err = run_cli("verify", "--suite", suite, "--seed", "1", *extra)
        assert code == EXIT_OK, (suite, out)
        assert "violations = 0" in out


def test_console_script_entry_point(plain_file):
    proc = subprocess.run(
        [sys.executable, "-m", "weavekit.cli", "analyze", str(plain_file)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "span = 12" in proc.stdout


def test_move_format_roundtrip():
    samples = [
        Move("R1_add", (3, 1)),
        Move("R1_remove", (2,)),
        Move("R2_add", ((1, 0), (4, 1), True)),
        Move("R2_remove", (0, 5)),
        Move("R3", (((0, 1), (2, 3), (4, 0)),)),
    ]
    for m in samples:
        assert parse_move(format_move(m)) == m


def test_budget_env_var_fallback(plain_file, monkeypatch):
    monkeypatch.setenv("WEAVE_CROSSING_BUDGET", "3")
    code, _out, _err = run_cli("analyze", str(plain_file))
    assert code == EXIT_BUDGET
    monkeypatch.setenv("WEAVE_CROSSING_BUDGET", "24")
    code, _out, _err = run_cli("analyze", str(plain_file))
    assert code == EXIT_OK


def test_analyze_crossing_free_diagram(tmp_path):
    path = tmp_path / "loop.weave"
    path.write_text("genus 1\nloop word=a\n")
    code, out, _err = run_cli("analyze", str(path))
    assert code == EXIT_OK
    assert "bracket = <(1,0)^1> : (1A^0) * d^-1" in out
    assert "classification = Mixed" in out or "threads = 1" in out


def test_verify_harness_detects_corruption():
    # the invariance checker must flag a diagram that breaks the relation
    from weavekit.corpus import alternating_corpus
    from weavekit.diagram import Crossing, SurfaceDiagram
    from weavekit.invariants import bracket
    from weavekit.moves import apply_move, fuzz

    base = alternating_corpus()[0][1]
    trace = fuzz(base, 5, seed=0, max_crossings=10)
    good = trace.diagrams[-1]
    crossings = list(good.crossings)
    crossings[0] = Crossing(0, 1 - crossings[0].over_axis)
    corrupted = SurfaceDiagram(good.genus, tuple(crossings), good.edges, good.loops)
    assert bracket(corrupted) != bracket(good)
