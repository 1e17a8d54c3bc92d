"""Batch command line.

Exit status: 0 ok, 1 property failed, 2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import approx, bisim, ccs, functor_kit as fk, glts as glts_mod, hml
from .canon_set import FinSet
from .limits import LimitExceeded, Limits

OK, FAILED, USAGE, LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Loaded:
    """A system plus the mapping from user-facing process names to states."""

    system: glts_mod.Glts
    names: dict
    program: Optional[ccs.Program] = None
    path: str = ""

    def state(self, name: str) -> str:
        if name not in self.names:
            raise UsageError(f"unknown process {name!r} in {self.path}")
        return self.names[name]


def _read(path: str) -> str:
    if path.startswith("fixture:"):
        return resources.files("guarded_proc.fixtures").joinpath(path[len("fixture:"):]).read_text()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        # examples/fig1.glts and friends ship with the package
        bundled = resources.files("guarded_proc.fixtures").joinpath(Path(path).name)
        if not Path(path).exists() and bundled.is_file():
            return bundled.read_text()
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load(path: str, roots=None, limits: Limits = Limits()) -> Loaded:
    """Load a ``.ccs`` or ``.glts`` file; for CCS, compile ``roots`` (default: every definition)."""
    text = _read(path)
    if path.endswith(".ccs"):
        program = ccs.parse_program(text)
        wanted = list(roots) if roots else list(program.order)
        for r in wanted:
            program[r]
        g, ids = program.to_glts(wanted, limits)
        return Loaded(g, ids, program, path)
    if path.endswith(".glts"):
        g = glts_mod.parse_glts(text)
        return Loaded(g, {x: x for x in g.states}, None, path)
    raise UsageError(f"{path}: expected a .ccs or .glts file")


@dataclass
class Report:
    status: int
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args, limits) -> Report:
    text = _read(args.file)
    if args.file.endswith(".glts"):
        g = glts_mod.parse_glts(text)
        return Report(OK, [glts_mod.format_glts(g).rstrip()], glts_mod.to_json(g))
    if not args.file.endswith(".ccs"):
        raise UsageError(f"{args.file}: expected a .ccs or .glts file")
    prog = ccs.parse_program(text)
    lines = [f"# channels: {', '.join(prog.channels) or '(none)'}"]
    data = {"channels": list(prog.channels), "definitions": {}}
    for name in prog.order:
        p = prog.defs[name]
        lines.append(f"{name} = {prog.pretty(p)}")
        lines.append(f"  ast: {p!r}")
        data["definitions"][name] = {"text": prog.pretty(p), "ast": repr(p)}
    return Report(OK, lines, data)


def cmd_lts(args, limits) -> Report:
    if not args.file.endswith(".ccs"):
        raise UsageError("lts expects a .ccs file")
    if args.limit is not None:
        limits = Limits(**{**limits.__dict__, "states": args.limit})
    loaded = load(args.file, [args.process], limits)
    g = loaded.system
    root = loaded.state(args.process)
    text = f"# initial state: {root}\n" + glts_mod.format_glts(g)
    data = glts_mod.to_json(g) | {"initial": root}
    return Report(OK, [text.rstrip()], data)


def cmd_eval(args, limits) -> Report:
    loaded = load(args.file, [args.process], limits)
    t = approx.eval_state(loaded.system, loaded.state(args.process), args.depth)
    return Report(OK, [str(t)], {"process": args.process, "depth": args.depth, "tree": str(t)})


def cmd_bisim(args, limits) -> Report:
    loaded = load(args.file, [args.p, args.q], limits)
    g = loaded.system
    x, y = loaded.state(args.p), loaded.state(args.q)
    if args.depth is None:
        rel, k = bisim.bisim_stable(g)
        ok = rel(x, y)
        data = {"p": args.p, "q": args.q, "bisimilar": ok, "stable_level": k, "level": None}
        if ok:
            return Report(OK, [f"bisimilar (stabilized at level {k})"], data)
        level = min(n for n in range(k + 1) if not bisim.bisim_level(g, n)(x, y))
    else:
        ok = bisim.bisim_level(g, args.depth)(x, y)
        data = {"p": args.p, "q": args.q, "bisimilar": ok, "stable_level": None, "level": args.depth}
        if ok:
            return Report(OK, [f"bisimilar at level {args.depth}"], data)
        level = args.depth
    m = bisim.mismatch(g, x, y, level)
    where = f"at level {level}" if args.depth is not None else f"(first fails at level {level})"
    lines = [f"not bisimilar {where}; distinguishing pair reported:", f"  {_describe(loaded, m)}"]
    data["mismatch"] = {"side": m.side, "source": m.source, "action": m.action, "target": m.target, "level": m.level}
    return Report(FAILED, lines, data)


def _describe(loaded: Loaded, m: bisim.Mismatch) -> str:
    g = loaded.system
    text = str(m)
    if g.names:
        text += f"  [{m.source} = {g.display(m.source)}; {m.target} = {g.display(m.target)}]"
    return text


def cmd_coincide(args, limits) -> Report:
    loaded = load(args.file, None, limits)
    g = loaded.system
    lines, levels = [], []
    status = OK
    for n in range(args.depth + 1):
        c = bisim.coincidence(g, n)
        levels.append({"level": n, "ok": c.ok, "counterexample": c.counterexample})
        if c.ok:
            lines.append(f"level {n}: bisimilarity coincides with equality of evaluations")
        else:
            status = FAILED
            x, y = c.counterexample
            lines.append(
                f"level {n}: COUNTEREXAMPLE {x}, {y} (bisimilar={c.bisimilar}, equal trees={c.equal_trees})"
            )
    return Report(status, lines, {"states": len(g.states), "levels": levels})


def cmd_hml_check(args, limits) -> Report:
    phi = hml.parse_formula(args.formula)
    loaded = load(args.file, [args.process], limits)
    ok = hml.sat(loaded.system, loaded.state(args.process), phi, args.depth)
    verdict = "satisfies" if ok else "does not satisfy"
    data = {"process": args.process, "formula": str(phi), "depth": args.depth, "sat": ok}
    return Report(OK if ok else FAILED, [f"{args.process} {verdict} {phi} at level {args.depth}"], data)


def cmd_distinguish(args, limits) -> Report:
    loaded = load(args.file, [args.p, args.q], limits)
    x, y = loaded.state(args.p), loaded.state(args.q)
    d = hml.distinguish(loaded.system, x, y, args.depth)
    b = bisim.bisim_level(loaded.system, args.depth)(x, y)
    data = {"p": args.p, "q": args.q, "depth": args.depth, "bisimilar": b, "formula": None}
    if d is None:
        note = "bisimilar" if b else "not bisimilar, but no formula separates them at this level"
        return Report(FAILED, [f"no distinguishing formula at level {args.depth} ({note})"], data)
    back = {v: k for k, v in loaded.names.items()}
    holds, fails = back.get(d.holds_at, d.holds_at), back.get(d.fails_at, d.fails_at)
    data |= {"formula": str(d.formula), "holds_at": holds, "fails_at": fails}
    return Report(OK, [f"{d.formula}", f"  true at {holds}, false at {fails}"], data)


def cmd_demo(args, limits) -> Report:
    checks = run_demo()
    lines = [
        f"[{'PASS' if ok else 'FAIL'}] {name}: expected {exp}, got {got}" for name, exp, got, ok in checks
    ]
    data = {"checks": [{"name": n, "expected": str(e), "actual": str(a), "ok": ok} for n, e, a, ok in checks]}
    return Report(OK if all(c[3] for c in checks) else FAILED, lines, data)


def run_demo() -> list[tuple]:
    """The worked examples as ``(name, expected, actual, ok)`` rows."""
    rows = []

    def check(name, expected, actual):
        rows.append((name, expected, actual, expected == actual))

    fig = load("fixture:fig1.glts").system
    rel, k = bisim.bisim_stable(fig)
    for x, y in [("x0", "y0"), ("x1", "y1"), ("x0", "y2"), ("x2", "y1")]:
        check(f"fig1 {x} ~ {y} (stable)", True, rel(x, y))
    check("fig1 x0 ~ y0 at levels 0..10", True, all(bisim.bisim_level(fig, n)("x0", "y0") for n in range(11)))
    check("fig1 stabilises within |X|^2+1", True, k <= len(fig.states) ** 2 + 1)
    check("fig1 eval(x0, 0)", "{ff}", str(approx.eval_state(fig, "x0", 0)))

    hl = load("fixture:hml.ccs", ["p", "q"])
    g, p, q = hl.system, hl.state("p"), hl.state("q")
    trees = [approx.eval_state(g, p, n) == approx.eval_state(g, q, n) for n in range(6)]
    check("hml eval(p,n) == eval(q,n), n = 0..5", [True] + [False] * 5, trees)
    levels = [bisim.bisim_level(g, n)(p, q) for n in range(6)]
    check("hml B_n(p, q), n = 0..5", [True] + [False] * 5, levels)
    phi = hml.parse_formula("[a]<b>tt")
    check("hml q |= [a]<b>tt at levels 0, 1", [True, False], [hml.sat(g, q, phi, 0), hml.sat(g, q, phi, 1)])
    check("hml eval(p, 1)", "{(a, {b, c})}", str(approx.eval_state(g, p, 1)))

    F = fk.Pfin(fk.Id())
    X = ["x", "y"]
    u = FinSet(X)
    check("witness count, Pfin(Id), u = v = {x, y}, R total", 7, fk.witness_count(F, fk.Relation.total(X, X), u, u))
    return rows


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = argparse.ArgumentParser(
        prog="guarded-proc",
        description="Guarded transition systems: evaluation, bisimilarity and HML in the step-indexed model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="validate a .ccs/.glts file and echo it")
    p.add_argument("file")

    p = sub.add_parser("lts", parents=[common], help="compile a CCS definition to .glts")
    p.add_argument("file")
    p.add_argument("-p", "--process", required=True)
    p.add_argument("--limit", type=int, help="maximum number of states")

    p = sub.add_parser("eval", parents=[common], help="print the process tree of a state")
    p.add_argument("file")
    p.add_argument("process")
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("bisim", parents=[common], help="decide level-n or stable bisimilarity")
    p.add_argument("file")
    p.add_argument("p")
    p.add_argument("q")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--depth", type=int)
    g.add_argument("--stable", action="store_true", help="use the stabilisation level (default)")

    p = sub.add_parser("coincide", parents=[common], help="check bisimilarity vs evaluation equality")
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("hml-check", parents=[common], help="model-check an HML formula")
    p.add_argument("file")
    p.add_argument("process")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("distinguish", parents=[common], help="find a distinguishing HML formula")
    p.add_argument("file")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--depth", type=int, required=True)

    sub.add_parser("demo", parents=[common], help="replay the worked examples")
    return parser


COMMANDS = {
    "parse": cmd_parse,
    "lts": cmd_lts,
    "eval": cmd_eval,
    "bisim": cmd_bisim,
    "coincide": cmd_coincide,
    "hml-check": cmd_hml_check,
    "distinguish": cmd_distinguish,
    "demo": cmd_demo,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    for name in ("depth", "limit"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            print(f"error: --{name} must be non-negative", file=sys.stderr)
            return USAGE
    try:
        limits = Limits.from_env()
        report = COMMANDS[args.command](args, limits)
    except LimitExceeded as e:
        report = Report(LIMIT, [f"resource limit exceeded: {e}"], {"error": "limit", "message": str(e)})
    except (UsageError, ValueError) as e:
        # CcsError, GltsError, FormulaSyntaxError and bad limit specs are ValueErrors
        report = Report(USAGE, [f"error: {e}"], {"error": "usage", "message": str(e)})
    if args.json:
        json.dump({"command": args.command, "status": report.status, **report.data}, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        stream = out if report.status in (OK, FAILED) else sys.stderr
        for line in report.lines:
            print(line, file=stream)
    return report.status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
