"""Command-line interface: ``regnc SUBCOMMAND ...``.

Every subcommand prints line-oriented text, or with ``--format json`` a
single JSON object.  Exit codes: solve/oracle 0 SAT, 1 UNSAT; lp query 0
TRUE, 1 FALSE, 3 UNSAT-PROGRAM; other subcommands 0; 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import __version__
from .bench import FAMILIES, bench
from .clausal import DEFAULT_MAX_CLAUSES, to_clausal
from .core import Const, RegncError, count_literals, format_truth
from .generate import GenConfig, Mode, gen_random
from .hornnc import is_horn_clausal, is_horn_nc_inductive, is_horn_nc_pattern
from .lp import Answer, entails, parse_program
from .parser import parse
from .semantics import DEFAULT_ORACLE_BUDGET, Status, evaluate, oracle_sat, parse_interpretation
from .solver import simplify_constants, solve

EXIT_ERROR = 2


class _Out:
    """Collects text lines and a JSON payload; prints one of them."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: List[str] = []
        self.payload: Dict = {}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def flush(self) -> None:
        if self.fmt == "json":
            print(json.dumps(self.payload, sort_keys=True))
        else:
            for ln in self.lines:
                print(ln)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _model_json(model: Optional[Dict[str, Fraction]]):
    if model is None:
        return None
    return {p: format_truth(v) for p, v in sorted(model.items())}


def _model_lines(out: _Out, model: Dict[str, Fraction]) -> None:
    for p in sorted(model):
        out.line(f"{p}={format_truth(model[p])}")


def cmd_parse(args, out: _Out) -> int:
    phi = parse(_read(args.file))
    out.line(str(phi))
    out.payload = {"formula": str(phi), "literals": count_literals(phi)}
    return 0


def cmd_recognize(args, out: _Out) -> int:
    phi = simplify_constants(parse(_read(args.file)))
    verdict = is_horn_nc_pattern(phi)
    inductive = is_horn_nc_inductive(phi)
    if verdict.is_hnc != inductive:
        raise AssertionError("pattern and inductive recognizers disagree")
    out.line("HORN-NC" if verdict.is_hnc else "NOT-HORN-NC")
    if not verdict.is_hnc:
        out.line("@" + "/".join(str(i) for i in verdict.witness))
    out.payload = {"hnc": verdict.is_hnc,
                   "witness": None if verdict.witness is None else list(verdict.witness)}
    return 0


def cmd_solve(args, out: _Out) -> int:
    phi = simplify_constants(parse(_read(args.file)))
    if isinstance(phi, Const):
        sat = phi.is_top
        out.line("SAT" if sat else "UNSAT")
        out.payload = {"status": "SAT" if sat else "UNSAT", "model": {} if sat else None, "trace": []}
        return 0 if sat else 1
    result = solve(phi, trace=args.trace, extra_rules=args.extra_rules)
    out.line(result.status.value)
    if result.model is not None:
        _model_lines(out, result.model)
    if args.trace:
        for step in result.trace:
            out.line(step.format())
    out.payload = {
        "status": result.status.value,
        "model": _model_json(result.model),
        "steps": result.steps,
        "rur_steps": result.rur_steps,
    }
    if args.trace:
        out.payload["trace"] = [
            {"rule": s.rule, "literals": [str(l) for l in s.literals],
             "path": list(s.path), "args": list(s.args),
             "result": None if s.result is None else str(s.result)}
            for s in result.trace
        ]
    return 0 if result.status is Status.SAT else 1


def cmd_clausal(args, out: _Out) -> int:
    phi = parse(_read(args.file))
    cl = to_clausal(phi, args.max_clauses)
    horn = is_horn_clausal(cl)
    out.line(str(cl))
    out.payload = {"formula": str(cl), "clauses": len(cl), "horn": horn}
    return 0


def cmd_oracle(args, out: _Out) -> int:
    phi = parse(_read(args.file))
    res = oracle_sat(phi, budget=args.budget)
    out.line(res.status.value)
    if res.witness is not None:
        _model_lines(out, res.witness)
    out.payload = {"status": res.status.value, "witness": _model_json(res.witness),
                   "candidates_checked": res.candidates_checked}
    return 0 if res.status is Status.SAT else 1


def cmd_eval(args, out: _Out) -> int:
    phi = parse(_read(args.file))
    interp = parse_interpretation(_read(args.interp))
    v = evaluate(phi, interp)
    out.line(str(v))
    out.payload = {"value": v}
    return 0


def cmd_lp_query(args, out: _Out) -> int:
    facts, program = parse_program(_read(args.program))
    query = parse(args.query)
    res = entails(facts, program, query)
    out.line(res.answer.value)
    out.line(f"semantics={res.semantics}")
    out.payload = {"answer": res.answer.value, "semantics": res.semantics,
                   "model": _model_json(res.model)}
    return {Answer.TRUE: 0, Answer.FALSE: 1, Answer.UNSAT_PROGRAM: 3}[res.answer]


def cmd_gen(args, out: _Out) -> int:
    cfg = GenConfig(seed=args.seed, props=args.props, depth=args.depth, arity=args.arity,
                    k=args.k, mode=Mode(args.mode), literals=args.literals, exact=args.exact,
                    positive_rate=args.positive_rate)
    phi = gen_random(cfg)
    out.line(str(phi))
    out.payload = {"formula": str(phi), "config": {**asdict(cfg), "mode": cfg.mode.value}}
    return 0


def cmd_bench(args, out: _Out) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    report = bench(sizes, GenConfig(seed=args.seed, k=args.k), family=args.family)
    out.line("n\tseconds\trecognize_seconds\tsteps\trur_steps\tstatus")
    for r in report.rows:
        out.line(f"{r.n}\t{r.seconds:.4f}\t{r.recognize_seconds:.4f}\t{r.steps}\t{r.rur_steps}\t{r.status}")
    exp = "absent" if report.exponent is None else f"{report.exponent:.3f}"
    out.line(f"exponent={exp}")
    out.payload = {"rows": [asdict(r) for r in report.rows], "exponent": report.exponent}
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")

    p = argparse.ArgumentParser(prog="regnc", description="Regular non-clausal Horn formulas: "
                                "parsing, recognition, solving and logic programs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse a .rnc file and print it canonically")
    s.add_argument("file", help="formula file, '-' for stdin")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("recognize", parents=[common], help="decide membership in Horn-NC")
    s.add_argument("file")
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("solve", parents=[common], help="decide satisfiability of a Horn-NC formula")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true", help="print every rule application")
    s.add_argument("--extra-rules", action="store_true",
                   help="also use the tautology and negative-merge disjunction rules")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("clausal", parents=[common], help="print the distributive clausal form")
    s.add_argument("file")
    s.add_argument("--max-clauses", type=int, default=DEFAULT_MAX_CLAUSES)
    s.set_defaults(func=cmd_clausal)

    s = sub.add_parser("oracle", parents=[common], help="brute-force satisfiability on the candidate grid")
    s.add_argument("file")
    s.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula under an interpretation file")
    s.add_argument("file")
    s.add_argument("--interp", required=True, help="file of NAME=VALUE lines")
    s.set_defaults(func=cmd_eval)

    lp = sub.add_parser("lp", help="Horn-NC logic programs")
    lsub = lp.add_subparsers(dest="lp_command", required=True)
    s = lsub.add_parser("query", parents=[common], help="answer a query against a .rlp program")
    s.add_argument("--program", required=True)
    s.add_argument("--query", required=True, help="formula text")
    s.set_defaults(func=cmd_lp_query)

    s = sub.add_parser("gen", parents=[common], help="generate a random formula")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--props", type=int, default=4)
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--arity", type=int, default=3)
    s.add_argument("--k", type=int, default=10, help="threshold chain granularity")
    s.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.HNC.value)
    s.add_argument("--literals", type=int, default=12)
    s.add_argument("--exact", action="store_true", help="use exactly --literals literals")
    s.add_argument("--positive-rate", type=float, default=0.5)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", parents=[common], help="solver scaling benchmark")
    s.add_argument("--sizes", default="1000,10000,100000", help="comma-separated literal counts")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--k", type=int, default=20)
    s.add_argument("--family", choices=FAMILIES, default="cascade")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.format)
    try:
        code = args.func(args, out)
    except (RegncError, OSError, ValueError, AssertionError) as exc:
        if args.format == "json":
            print(json.dumps({"error": str(exc), "kind": type(exc).__name__}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
