"""Command-line front end: build, analyze, verify, fuzz, canonicalize.

Exit codes are a stable contract: 0 success, 1 property violation,
2 input error, 3 crossing budget exceeded. All randomness is seeded
through flags; reports come in a canonical text form or as JSON with
sorted keys, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import canonical, corpus, diagram, invariants, moves, tessellation
from .diagram import DiagramError, SurfaceDiagram
from .invariants import TooManyCrossings

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


# -- move trace format ------------------------------------------------------------


def format_move(m: moves.Move) -> str:
    if m.kind == "R1_add":
        eid, chir = m.params
        return f"R1_add e{eid} chirality={'+1' if chir > 0 else '-1'}"
    if m.kind == "R1_remove":
        return f"R1_remove c{m.params[0]}"
    if m.kind == "R2_add":
        (ea, da), (eb, db), over_first = m.params
        which = "first" if over_first else "second"
        return f"R2_add e{ea}.{da} e{eb}.{db} over={which}"
    if m.kind == "R2_remove":
        x1, x2 = m.params
        return f"R2_remove c{x1} c{x2}"
    if m.kind == "R3":
        corners = m.params[0]
        return "R3 " + " ".join(f"c{c}.{s}" for c, s in corners)
    raise ValueError(f"unknown move kind {m.kind!r}")


def parse_move(line: str) -> moves.Move:
    parts = line.split()
    kind = parts[0]
    if kind == "R1_add":
        eid = int(parts[1][1:])
        chir = 1 if parts[2].endswith("+1") else -1
        return moves.Move("R1_add", (eid, chir))
    if kind == "R1_remove":
        return moves.Move("R1_remove", (int(parts[1][1:]),))
    if kind == "R2_add":
        def step(tok: str) -> tuple[int, int]:
            e, _, d = tok.partition(".")
            return (int(e[1:]), int(d))
        over_first = parts[3].endswith("first")
        return moves.Move("R2_add", (step(parts[1]), step(parts[2]), over_first))
    if kind == "R2_remove":
        return moves.Move("R2_remove", (int(parts[1][1:]), int(parts[2][1:])))
    if kind == "R3":
        corners = []
        for tok in parts[1:]:
            c, _, s = tok.partition(".")
            corners.append((int(c[1:]), int(s)))
        return moves.Move("R3", (tuple(corners),))
    raise ValueError(f"unknown move line {line!r}")


# -- analyze -----------------------------------------------------------------------


def analyze_report(
    d: SurfaceDiagram, budget: Optional[int], parallel: int
) -> dict[str, object]:
    rep: dict[str, object] = {}
    validation = d.validate()
    rep["genus"] = d.genus
    rep["crossings"] = len(d.crossings)
    rep["edges"] = len(d.edges)
    rep["free_loops"] = len(d.loops)
    rep["valid"] = validation.ok
    rep["validation_errors"] = list(validation.errors)
    rep["validation_advisories"] = list(validation.advisories)
    if not validation.ok:
        return rep
    if d.crossings or d.edges:
        rep["faces"] = len(d.faces())
    threads = d.threads()
    rep["threads"] = len(threads)
    rep["thread_homology"] = {
        f"t{t.id}": list(t.homology) for t in threads
    }
    rep["classification"] = tessellation.classify(d)
    try:
        sets = d.thread_sets()
        rep["thread_sets"] = [list(s) for s in sets]
    except diagram.ZeroHomologyThread:
        rep["thread_sets"] = None
    rep["alternating"] = d.is_alternating()
    proper, improper = d.is_proper() if d.crossings else (True, [])
    rep["proper"] = proper
    rep["improper_crossings"] = improper
    reduced, isthmi = d.is_reduced() if d.crossings else (True, [])
    rep["reduced"] = reduced
    rep["isthmus_crossings"] = isthmi
    adeq = invariants.adequacy(d)
    rep["plus_adequate"] = adeq["plus"]
    rep["minus_adequate"] = adeq["minus"]
    rep["writhe"] = invariants.writhe(d) if d.crossings else 0
    rep["writhe_per_component"] = {
        f"t{tid}": w for tid, w in sorted(invariants.writhe_per_component(d).items())
    } if d.crossings else {}
    rep["linking"] = {
        f"t{i}-t{j}": v for (i, j), v in sorted(invariants.linking_matrix(d).items())
    }
    b = invariants.bracket(d, budget=budget, parallel=parallel)
    rep["bracket"] = b.format()
    rep["kauffman_f"] = invariants.kauffman_f(d, budget=budget, parallel=parallel).format()
    rep["jones"] = invariants.jones(d, budget=budget, parallel=parallel).format()
    if not b.is_zero:
        rep["maxdeg"] = b.max_degree()
        rep["mindeg"] = b.min_degree()
        rep["span"] = b.span()
    try:
        white, black = invariants.checkerboard_coloring(d)
        rep["white"] = len(white)
        rep["black"] = len(black)
    except invariants.NotCheckerboardColorable:
        rep["white"] = None
        rep["black"] = None
    rep["size"] = canonical.size(d)
    rep["minimal_size"] = canonical.is_minimal_size(d)
    return rep


def _emit_report(rep: dict[str, object], fmt: str, out=None) -> None:
    out = out if out is not None else sys.stdout
    if fmt == "json-report":
        json.dump(rep, out, sort_keys=True, indent=2, default=str)
        out.write("\n")
        return
    for key, value in rep.items():
        if isinstance(value, dict):
            body = " ".join(f"{k}={v}" for k, v in value.items())
            out.write(f"{key} = {body}\n")
        elif isinstance(value, list):
            out.write(f"{key} = {value}\n")
        else:
            out.write(f"{key} = {value}\n")


# -- verify suites ------------------------------------------------------------------


def verify_invariance(steps: int, seed: int, cap: int, budget: Optional[int]):
    """Bracket behavior move by move along one seeded walk."""
    lines: list[str] = []
    failures: list[str] = []
    base = corpus.alternating_corpus()[0][1]
    trace = moves.fuzz(base, steps, seed, max_crossings=cap)
    cur = base
    cur_b = invariants.bracket(cur, budget=budget)
    cur_f = invariants.kauffman_f(cur, budget=budget)
    checked = {"R1": 0, "R2": 0, "R3": 0}
    for mv, nxt in zip(trace.moves, trace.diagrams):
        nxt_b = invariants.bracket(nxt, budget=budget)
        nxt_f = invariants.kauffman_f(nxt, budget=budget)
        if mv.kind in ("R1_add", "R1_remove"):
            if mv.kind == "R1_add":
                chir = mv.params[1]
            else:
                chir = -invariants.crossing_signs(cur)[mv.params[0]]
            expected = cur_b.scaled(3 * chir, -1)
            ok = nxt_b == expected
            checked["R1"] += 1
        else:
            ok = nxt_b == cur_b
            checked["R2" if mv.kind.startswith("R2") else "R3"] += 1
        if not ok:
            failures.append(f"bracket relation failed after {format_move(mv)}")
        if nxt_f != cur_f:
            failures.append(f"normalized polynomial changed after {format_move(mv)}")
        cur, cur_b, cur_f = nxt, nxt_b, nxt_f
    lines.append(
        f"invariance: {len(trace.moves)} moves "
        f"(R1 {checked['R1']}, R2 {checked['R2']}, R3 {checked['R3']}), "
        f"{len(failures)} violations"
    )
    return failures, lines


def verify_oracle(budget: Optional[int]):
    lines: list[str] = []
    failures: list[str] = []
    tested = 0
    for name, d in corpus.full_corpus():
        if len(d.crossings) > 10:
            continue
        if not d.validate().ok:
            continue
        tested += 1
        if invariants.bracket(d, budget=budget) != invariants.bracket_by_skein(d, budget=budget):
            failures.append(f"state sum and skein recursion disagree on {name}")
    lines.append(f"oracle: {tested} diagrams compared, {len(failures)} violations")
    return failures, lines


def verify_tait1(steps: int, seed: int, budget: Optional[int]):
    lines: list[str] = []
    failures: list[str] = []
    for name, d in corpus.alternating_corpus():
        if len(d.crossings) > 12:
            continue
        bounds = moves.crossing_number_bounds(d, seed=seed, budget=budget)
        C = len(d.crossings)
        if not bounds["certified_lower"] or bounds["lower"] != C:
            failures.append(
                f"{name}: span bound gives {bounds['lower']}, crossing count {C}"
            )
            continue
        trace = moves.fuzz(d, steps, seed, max_crossings=C + 6, keep_diagrams=False)
        reached = len(trace.end.crossings)
        low = moves.simplify(trace.end, seed=seed)
        if len(low.crossings) < C:
            failures.append(
                f"{name}: a move sequence reached {len(low.crossings)} crossings"
            )
        lines.append(
            f"tait1 {name}: C={C} span_lower={bounds['lower']} "
            f"fuzz_end={reached} simplified={len(low.crossings)}"
        )
    return failures, lines


def verify_tait2(seed: int, budget: Optional[int]):
    lines: list[str] = []
    failures: list[str] = []
    base_pairs = []
    for name, d in corpus.alternating_corpus()[:3]:
        twisted = canonical.dehn_twist_diagram(d, "a", 1)
        twisted = canonical.dehn_twist_diagram(twisted, "b", -1)
        scrambled = moves.fuzz(
            twisted, 10, seed, max_crossings=len(d.crossings) + 6, keep_diagrams=False
        ).end
        settled = moves.simplify(scrambled, seed=seed)
        base_pairs.append((name, d, settled))
    for name, d1, d2 in base_pairs:
        ok_class = (
            d2.validate().ok
            and d2.is_alternating()
            and d2.is_reduced()[0]
            and len(d2.crossings) == len(d1.crossings)
        )
        w1, w2 = invariants.writhe(d1), invariants.writhe(d2)
        lines.append(
            f"tait2 {name}: writhe {w1} vs twisted+moved {w2}"
            + ("" if ok_class else " (pair left the reduced alternating class)")
        )
        if w1 != w2:
            failures.append(f"{name}: writhes differ, {w1} vs {w2}")
    return failures, lines


# -- command implementations -----------------------------------------------------------


def cmd_build(args) -> int:
    symbol = tessellation.parse_vertex_symbol(args.tiling)
    spec = tessellation.TransformSpec.parse(args.method, args.m)
    tiling = tessellation.build_tiling(symbol, args.scale)
    d = tessellation.transform(tiling, spec)
    if args.seq:
        seq: dict[tuple[int, int], tuple[int, int]] = {}
        for chunk in args.seq.split(";"):
            pair, _, pq = chunk.partition(":")
            i, j = (int(x) for x in pair.split(","))
            p, q = (int(x) for x in pq.split(","))
            seq[(i, j)] = (p, q)
        d = tessellation.assign_weaving_map(d, seq)
    elif args.alternating:
        d = tessellation.assign_alternating(d)
    text = diagram.serialize(d)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    kind = tessellation.classify(d)
    print(f"classification = {kind}", file=sys.stderr)
    try:
        sets = d.thread_sets()
        census = " ".join(str(len(s)) for s in sets)
        print(f"thread_sets = {len(sets)} sizes {census}", file=sys.stderr)
    except diagram.ZeroHomologyThread:
        print("thread_sets = undefined (null-homologous components)", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    with open(args.file) as fh:
        d = diagram.parse(fh.read())
    rep = analyze_report(d, args.crossing_budget, args.parallel)
    _emit_report(rep, args.format)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    with open(args.file) as fh:
        d = diagram.parse(fh.read())
    trace = moves.fuzz(d, args.steps, args.seed, max_crossings=args.cap)
    if args.trace:
        with open(args.trace, "w") as fh:
            for mv in trace.moves:
                fh.write(format_move(mv) + "\n")
    print(f"moves = {len(trace.moves)}")
    print(f"final_crossings = {len(trace.end.crossings)}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(diagram.serialize(trace.end))
    return EXIT_OK


def cmd_canonicalize(args) -> int:
    if args.winding:
        vectors = []
        for chunk in args.winding.split(";"):
            chunk = chunk.strip().strip("()")
            vectors.append(tuple(int(x) for x in chunk.split(",")))
        genus = len(vectors[0]) // 2 if vectors else args.genus
        V = tuple(vectors)
    else:
        with open(args.file) as fh:
            d = diagram.parse(fh.read())
        genus = d.genus
        V = invariants.full_winding_multiset(d, budget=args.crossing_budget)
    result = canonical.canonical_form(V, genus)
    print(f"q_before = {result.q_before}")
    print(f"q_after = {result.q_after}")
    print(f"certified = {result.certified}")
    print(f"matrix = {result.matrix}")
    print(f"canonical = {list(result.winding)}")
    if args.certify_ball:
        bq, bset = canonical.brute_force_minimum(V, genus, args.certify_ball)
        match = bq == result.q_after and bset == result.winding
        print(f"ball_check = bound {args.certify_ball} min {bq} match {match}")
        if bq < result.q_after:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    budget = args.crossing_budget
    if args.suite == "invariance":
        failures, lines = verify_invariance(args.steps, args.seed, args.cap, budget)
    elif args.suite == "oracle":
        failures, lines = verify_oracle(budget)
    elif args.suite == "tait1":
        failures, lines = verify_tait1(args.steps, args.seed, budget)
    elif args.suite == "tait2":
        failures, lines = verify_tait2(args.seed, budget)
    else:
        raise DiagramError(f"unknown suite {args.suite!r}")
    for line in lines:
        print(line)
    for f in failures:
        print(f"FAIL: {f}")
    print(f"suite = {args.suite}; violations = {len(failures)}")
    return EXIT_VIOLATION if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="weavekit")
    top.add_argument("--parallel", type=int, default=1)
    top.add_argument("--crossing-budget", type=int, default=None)
    top.add_argument("--format", choices=["text", "json-report"], default="text")
    sub = top.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="compile a tessellation into a weave diagram")
    b.add_argument("--tiling", required=True)
    b.add_argument("--method", required=True)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--scale", type=int, default=1)
    b.add_argument("--seq", default=None, help='crossing sequences like "1,2:1,1;1,3:1,1"')
    b.add_argument("--alternating", action="store_true")
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="full invariant report for a diagram file")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("fuzz", help="seeded random move walk")
    f.add_argument("file")
    f.add_argument("--steps", type=int, default=100)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--cap", type=int, default=12)
    f.add_argument("--trace", default=None)
    f.add_argument("-o", "--output", default=None)
    f.set_defaults(func=cmd_fuzz)

    c = sub.add_parser("canonicalize", help="canonical winding form of a diagram")
    c.add_argument("file", nargs="?")
    c.add_argument("--winding", default=None, help='vectors like "(1,0);(2,1)"')
    c.add_argument("--genus", type=int, default=1)
    c.add_argument("--certify-ball", type=int, default=0)
    c.set_defaults(func=cmd_canonicalize)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=["tait1", "tait2", "invariance", "oracle"])
    v.add_argument("--steps", type=int, default=500)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cap", type=int, default=12)
    v.set_defaults(func=cmd_verify)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooManyCrossings as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DiagramError, tessellation.TessellationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())


def run_determinism_probe(workdir) -> dict[str, tuple[str, str]]:
    """Run every subcommand twice with fixed seeds; return paired outputs.

    Used by the acceptance suite: each pair must be byte-identical,
    including the state sum split across four workers.
    """
    import io
    import os
    from contextlib import redirect_stderr, redirect_stdout

    def run(argv, files=()):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        blob = f"exit={code}\n--stdout--\n{out.getvalue()}\n--stderr--\n{err.getvalue()}"
        for f in files:
            blob += f"\n--file {os.path.basename(f)}--\n"
            with open(f) as fh:
                blob += fh.read()
        return blob

    diagram_path = os.path.join(str(workdir), "probe.weave")
    trace_path = os.path.join(str(workdir), "probe.trace")
    end_path = os.path.join(str(workdir), "probe-end.weave")
    commands = {
        "build": (
            ["build", "--tiling", "(4,4,4,4)", "--method", "Cr", "--m", "1",
             "--scale", "2", "--seq", "1,2:1,1", "-o", diagram_path],
            [diagram_path],
        ),
        "analyze": (["analyze", diagram_path], []),
        "analyze-json": (["--format", "json-report", "analyze", diagram_path], []),
        "analyze-parallel-4": (["--parallel", "4", "analyze", diagram_path], []),
        "fuzz": (
            ["fuzz", diagram_path, "--steps", "40", "--seed", "11", "--cap", "11",
             "--trace", trace_path, "-o", end_path],
            [trace_path, end_path],
        ),
        "canonicalize": (["canonicalize", diagram_path, "--certify-ball", "3"], []),
        "verify-invariance": (
            ["verify", "--suite", "invariance", "--steps", "30", "--seed", "4", "--cap", "10"],
            [],
        ),
        "verify-oracle": (["verify", "--suite", "oracle"], []),
    }
    results: dict[str, tuple[str, str]] = {}
    for label, (argv, files) in commands.items():
        first = run(argv, files)
        second = run(argv, files)
        results[label] = (first, second)
    return results
