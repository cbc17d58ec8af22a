"""Command-line front end.  Each subcommand parses, calls the library, renders.

Two renderings: ``text`` for people and ``machine``, where every line is a
record name followed by ``key=value`` fields in a fixed order.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields

from .chains import compare_ANW
from .dataflow import Program, Sign, solve
from .endomap import classify_map, fixpoint_sets
from .engine import format_trace, iterate
from .errors import FixlatError, SchemaError
from .formats import dumps_instance, load_instance, load_program_doc
from .lab.instances import RANDOM_ORDER, SHAPES, generate_instance
from .lab.search import DEFAULT_WITNESSES, search
from .lab.theorems import REFUTED, TheoremId, verify, verify_all

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2
BUDGET_ENV = "FIXLAT_BUDGET"


class _Out:
    def __init__(self, fmt: str, stream):
        self.machine = fmt == "machine"
        self.stream = stream

    def line(self, text: str = ""):
        self.stream.write(text + "\n")

    def record(self, name: str, **kv):
        if self.machine:
            self.line(" ".join([name, *(f"{k}={_value(v)}" for k, v in kv.items())]))

    def text(self, s: str = ""):
        if not self.machine:
            self.line(s)


def _value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(map(_value, v)) if isinstance(v, (set, frozenset)) else [_value(x) for x in v]
        return "{" + ",".join(items) + "}"
    if isinstance(v, dict):
        return "{" + ",".join(f"{k}:{_value(x)}" for k, x in v.items()) + "}"
    s = str(v)
    if not s or any(c.isspace() or c in '="' for c in s):
        return json.dumps(s, ensure_ascii=False)
    return s


def _budget(args) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env is None:
        return None
    if not env.isdigit() or int(env) < 1:
        raise SchemaError(BUDGET_ENV, f"must be a positive integer, got {env!r}")
    return int(env)


def _names(p, xs):
    return [p.names[x] for x in sorted(xs)]


# -- subcommands ---------------------------------------------------------------

def cmd_classify(args, out: _Out) -> int:
    inst = load_instance(args.instance)
    p, f = inst.poset, inst.f
    pc = p.classification
    mc = classify_map(f, inst.a0)
    fs = fixpoint_sets(f)
    out.record("poset", size=len(p), **{k.name: getattr(pc, k.name) for k in fields(pc)})
    out.record("map", **{k.name: getattr(mc, k.name) for k in fields(mc)})
    out.record("fixpoints", pre=_names(p, fs.pre), post=_names(p, fs.post), fix=_names(p, fs.fix))
    if not out.machine:
        out.text(f"poset: {len(p)} elements")
        for k in fields(pc):
            out.text(f"  {k.name:<24} {getattr(pc, k.name)}")
        out.text(f"map (a0 = {p.names[inst.a0]}):")
        for k in fields(mc):
            out.text(f"  {k.name:<24} {getattr(mc, k.name)}")
        out.text(f"pre-fixpoints:  {', '.join(_names(p, fs.pre)) or '(none)'}")
        out.text(f"post-fixpoints: {', '.join(_names(p, fs.post)) or '(none)'}")
        out.text(f"fixpoints:      {', '.join(_names(p, fs.fix)) or '(none)'}")
    return EXIT_OK


def cmd_iterate(args, out: _Out) -> int:
    inst = load_instance(args.instance)
    p = inst.poset
    outcome, trace = iterate(p, inst.f, inst.a0, _budget(args))
    if out.machine:
        for k, v in trace.items():
            out.record("iterate", index=k, value=p.names[v])
        rec = {}
        for key, v in outcome.as_record().items():
            if key in ("value", "first_limit_value"):
                v = p.names[v]
            elif key == "prefix_set":
                v = set(_names(p, v))
            rec[key] = v
        out.record("outcome", **rec)
    else:
        for line in format_trace(trace, outcome, show=lambda x: p.names[x]):
            out.text(line)
    return EXIT_OK


def cmd_sets(args, out: _Out) -> int:
    inst = load_instance(args.instance)
    p = inst.poset
    cs = compare_ANW(p, inst.f, inst.a0, _budget(args))
    A = None if cs.A is None else _names(p, cs.A)
    N, W = _names(p, cs.N), _names(p, cs.W)
    out.record("sets", A=A, N=N, W=W, outcome=cs.outcome.kind)
    out.record("flags", **cs.flags())
    out.text(f"A = {'undefined (' + cs.outcome.kind + ')' if A is None else '{' + ', '.join(A) + '}'}")
    out.text("N = {" + ", ".join(N) + "}")
    out.text("W = {" + ", ".join(W) + "}")
    for k, v in cs.flags().items():
        out.text(f"  {k:<24} {'n/a' if v is None else v}")
    return EXIT_OK


def _render_verdict(v, out: _Out):
    out.record(
        "verdict",
        theorem=v.theorem.value,
        status=v.status,
        hypotheses=v.hypotheses,
        dropped=list(v.dropped),
        witness=v.witness,
    )
    if not out.machine:
        hyps = ", ".join(f"{k}={'yes' if ok else 'no'}" for k, ok in v.hypotheses.items()) or "none"
        out.text(f"{v.theorem.value}: {v.status}  [hypotheses: {hyps}]")
        if v.witness:
            out.text("  witness: " + ", ".join(f"{k}={_value(x)}" for k, x in v.witness.items()))


def cmd_verify(args, out: _Out) -> int:
    inst = load_instance(args.instance)
    v = verify(args.theorem, inst, _budget(args), args.drop or ())
    _render_verdict(v, out)
    return EXIT_REFUTED if v.status == REFUTED else EXIT_OK


def cmd_verify_all(args, out: _Out) -> int:
    inst = load_instance(args.instance)
    verdicts = verify_all(inst, _budget(args))
    for v in verdicts:
        _render_verdict(v, out)
    return EXIT_REFUTED if any(v.status == REFUTED for v in verdicts) else EXIT_OK


def cmd_search(args, out: _Out) -> int:
    common = dict(drop=args.drop or None, k=args.count, budget=_budget(args))
    if args.exhaustive is not None:
        report = search(args.theorem, exhaustive_max_size=args.exhaustive, **common)
    else:
        seeds = range(args.seed, args.seed + args.seeds)
        report = search(args.theorem, seeds=seeds, sizes=args.size, shapes=args.shape, **common)
    out.record(
        "search",
        theorem=report.theorem.value,
        mode=report.mode,
        dropped=list(report.dropped),
        checked=report.checked,
        hypotheses_held=report.hypotheses_held,
        skipped=report.skipped,
        witnesses=len(report.witnesses),
    )
    for w in report.witnesses:
        out.record("witness", **w.provenance, clause=(w.verdict.witness or {}).get("clause"))
    out.text(
        f"{report.theorem.value} {report.mode}: checked {report.checked}, "
        f"hypotheses held on {report.hypotheses_held}, skipped {report.skipped}"
    )
    if not report.witnesses:
        out.text("none found")
        out.record("result", found=False)
        return EXIT_OK
    for w in report.witnesses:
        out.text("witness: " + " ".join(f"{k}={v}" for k, v in w.provenance.items()))
        out.text("  " + ", ".join(f"{k}={_value(x)}" for k, x in (w.verdict.witness or {}).items()))
    if args.bundle:
        with open(args.bundle, "w", encoding="utf-8") as fh:
            fh.write(report.bundle())
        out.text(f"reproduction bundle written to {args.bundle}")
    out.record("result", found=True)
    return EXIT_REFUTED


def _entry_state(items) -> dict[str, Sign]:
    state = {}
    for item in items or ():
        var, sep, sign = item.partition("=")
        if not sep or not var:
            raise SchemaError("--entry", f"expected var=SIGN, got {item!r}")
        try:
            state[var] = Sign.parse(sign)
        except ValueError as e:
            raise SchemaError("--entry", str(e)) from None
    return state


def cmd_dataflow(args, out: _Out) -> int:
    prog = Program.from_doc(load_program_doc(args.program))
    result = solve(prog, _entry_state(args.entry), _budget(args))
    table = result.table()
    reach = prog.reachable()
    for nid, row in table.items():
        out.record("node", id=nid, reachable=nid in reach, **{v: s for v, s in row.items()})
    out.record("iterations", count=result.iterations)
    if not out.machine:
        width = max(len(n) for n in table)
        out.text((" " * width + "  " + "  ".join(f"{v:<5}" for v in prog.vars)).rstrip())
        for nid, row in table.items():
            mark = "" if nid in reach else "  (unreachable)"
            out.text((f"{nid:<{width}}  " + "  ".join(f"{str(s):<5}" for s in row.values())).rstrip() + mark)
        out.text(f"iterations: {result.iterations}")
    return EXIT_OK


def cmd_gen(args, out: _Out) -> int:
    inst = generate_instance(args.seed, args.size, args.shape)
    out.line(dumps_instance(inst).rstrip("\n"))
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------

def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a sub-level default from overwriting a top-level --format
    fmt.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="fixlat", parents=[fmt], description="Fixpoints of maps on finite posets.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    theorem_ids = [t.value for t in TheoremId]

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[fmt], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("classify", cmd_classify, "poset and map classification")
    sp.add_argument("instance")

    sp = add("iterate", cmd_iterate, "transfinite iteration trace and outcome")
    sp.add_argument("instance")
    sp.add_argument("--budget", type=_positive)

    sp = add("sets", cmd_sets, "the sets A, N, W and their inclusions")
    sp.add_argument("instance")
    sp.add_argument("--budget", type=_positive)

    sp = add("verify", cmd_verify, "check one theorem on an instance")
    sp.add_argument("theorem", choices=theorem_ids, metavar="THEOREM_ID")
    sp.add_argument("instance")
    sp.add_argument("--drop", action="append", metavar="HYP")
    sp.add_argument("--budget", type=_positive)

    sp = add("verify-all", cmd_verify_all, "check every applicable theorem")
    sp.add_argument("instance")
    sp.add_argument("--budget", type=_positive)

    sp = add("search", cmd_search, "look for counterexamples or hypothesis-drop witnesses")
    sp.add_argument("theorem", choices=theorem_ids, metavar="THEOREM_ID")
    sp.add_argument("--drop", action="append", metavar="HYP")
    sp.add_argument("--seed", type=int, default=0, help="first seed (default 0)")
    sp.add_argument("--seeds", type=_positive, default=1000, help="number of seeds (default 1000)")
    sp.add_argument("--count", type=_positive, default=DEFAULT_WITNESSES, help="witnesses to collect")
    sp.add_argument("--size", type=_positive, action="append", help="instance size, repeatable (default 6)")
    sp.add_argument("--shape", choices=SHAPES, action="append", help=f"repeatable (default {RANDOM_ORDER})")
    sp.add_argument("--exhaustive", type=_positive, metavar="MAX_SIZE",
                    help="enumerate every labeled instance up to MAX_SIZE instead of seeding")
    sp.add_argument("--bundle", metavar="PATH", help="write the first witness as an instance file")
    sp.add_argument("--budget", type=_positive)

    sp = add("dataflow", cmd_dataflow, "sign analysis of a program file")
    sp.add_argument("program")
    sp.add_argument("--entry", action="append", metavar="VAR=SIGN")
    sp.add_argument("--budget", type=_positive)

    sp = add("gen", cmd_gen, "print a generated instance file")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=_positive, default=6)
    sp.add_argument("--shape", choices=SHAPES, default=RANDOM_ORDER)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "size", None) is None and args.command == "search":
        args.size = [6]
    if getattr(args, "shape", None) is None and args.command == "search":
        args.shape = [RANDOM_ORDER]
    out = _Out(getattr(args, "format", "text"), stdout)
    try:
        return args.func(args, out)
    except (FixlatError, OSError) as e:
        stderr.write(f"fixlat: error: {e}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
