"""Command-line entry point.

Exit codes: 0 pass, 1 a claim failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from typing import Sequence

import numpy as np

from . import claims, cprotocols, functions, qprotocols
from .claims import DEFAULT_SEED, Report, fmt_frac, fmt_prob

FORMAT_ENV = "ENTCOMM_FORMAT"
SHOW_RUNS_MAX = 20
F_MAX_DEPTH = 5
G_MAX_DEPTH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.entropy:
        return int(np.random.SeedSequence().entropy % 2**63)
    return args.seed


def cmd_verify(args: argparse.Namespace) -> Report:
    seed = _resolve_seed(args)
    if args.claim == "all":
        return claims.verify_all(seed=seed)
    rep = claims.CLAIMS[args.claim](seed=seed)
    rep.params.setdefault("seed", seed)
    return rep


def _parse_input(protocol: str, values: Sequence[int]):
    want = 3 if protocol == "ghz" else 2
    if len(values) != want:
        raise UsageError(f"{protocol} takes {want} input values, got {len(values)}")
    if any(not 0 <= v <= 3 for v in values):
        raise UsageError(f"input values must be in 0..3, got {list(values)}")
    if protocol == "ghz":
        t = functions.TripleInput(*values)
        if not functions.promise_f(t):
            raise UsageError(f"ghz input {list(values)} violates the even-sum promise")
        return t
    return functions.PairInput(*values)


def cmd_simulate(args: argparse.Namespace) -> Report:
    if args.shots < 1:
        raise UsageError(f"--shots must be >= 1, got {args.shots}")
    inp = _parse_input(args.protocol, args.input)
    seed = _resolve_seed(args)
    rep = Report(f"simulate {args.protocol}",
                 {"input": " ".join(map(str, inp)), "shots": args.shots, "seed": seed})
    if args.protocol == "ghz":
        target, exact = functions.f(inp), 1.0
        run = qprotocols.run_ghz
    else:
        target, exact = functions.g(inp), qprotocols.chsh_success_probability(inp)
        run = qprotocols.run_chsh
    if args.shots <= SHOW_RUNS_MAX:
        rng = np.random.default_rng(seed)
        for i in range(args.shots):
            r = run(inp, rng)
            bits = " ".join(f"{s}:{b}" for s, b in r.transcript)
            rep.add(f"run[{i}]", f"transcript=[{bits}] output={r.output}")
    rate = qprotocols.estimate_success(args.protocol, inp, args.shots, seed)
    correct = round(rate * args.shots)
    rep.add("target", target)
    rep.add("correct", f"{correct}/{args.shots}")
    rep.add("success_rate", fmt_prob(rate))
    rep.add("exact", fmt_prob(exact))
    sigma = math.sqrt(exact * (1 - exact) / args.shots)
    rep.check("within_3sigma_of_exact", abs(rate - exact) <= 3 * sigma + 1e-12)
    return rep


def cmd_enumerate(args: argparse.Namespace) -> Report:
    limit = F_MAX_DEPTH if args.function == "f" else G_MAX_DEPTH
    if not 0 <= args.depth <= limit:
        raise UsageError(f"depth for {args.function} must be in 0..{limit}, got {args.depth}")
    rep = Report(f"enumerate {args.function}", {"depth": args.depth})
    if args.function == "f":
        res = cprotocols.feasible(functions.f, functions.promise_triples(), args.depth, 3)
        rep.add("feasible", "feasible" if res.feasible else "infeasible")
        rep.add("memo_entries", res.explored)
        if res.witness is not None:
            rep.add("witness", res.witness)
        rep.check("search_complete", True)
        return rep
    best = cprotocols.optimal_success(args.depth)
    rep.add("max_success", fmt_frac(best))
    if args.depth == 2:
        report = cprotocols.max_success_two_bit()
        rep.add("trees_enumerated", 2 * 16 * (2 * 16) ** 2)
        rep.add("argmax_tree", report.tree)
        rep.check("enumeration_agrees", report.best == best)
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entcomm", description="Entanglement vs classical communication checks")
    parser.add_argument("--format", choices=("text", "kv"), default=None,
                        help=f"report style (default: ${FORMAT_ENV} or text)")
    seeds = argparse.ArgumentParser(add_help=False)
    seeds.add_argument("--seed", type=int, default=DEFAULT_SEED)
    seeds.add_argument("--entropy", action="store_true", help="draw a fresh seed from the OS")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[seeds], help="run an exact/exhaustive check")
    v.add_argument("claim", choices=sorted(claims.CLAIMS) + ["all"])
    v.set_defaults(handler=cmd_verify)

    s = sub.add_parser("simulate", parents=[seeds], help="sample protocol runs")
    s.add_argument("protocol", choices=("ghz", "chsh"))
    s.add_argument("--input", type=int, nargs="+", required=True)
    s.add_argument("--shots", type=int, default=1000)
    s.set_defaults(handler=cmd_simulate)

    e = sub.add_parser("enumerate", help="search classical protocols")
    e.add_argument("function", choices=("f", "g"))
    e.add_argument("--depth", type=int, required=True)
    e.set_defaults(handler=cmd_enumerate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        style = args.format or os.environ.get(FORMAT_ENV, "text")
        if style not in ("text", "kv"):
            raise UsageError(f"unknown format {style!r}")
        start = time.perf_counter()
        report = args.handler(args)
        if args.command != "verify":
            report.duration = time.perf_counter() - start
    except UsageError as exc:
        print(f"entcomm: error: {exc}", file=sys.stderr)
        return 2
    print("\n".join(report.lines(style)))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
