"""Command-line front end.

Exit codes: 0 satisfied, 1 violated, 2 unknown, and for errors
3 usage, 4 file I/O, 5 parse, 6 evaluation (including stuck programs and
out-of-range bounds), 7 undecided nested p-box, 8 simulation step cap.
``simulate`` exits 0 when the estimate agrees with the interval and 1
when it does not.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import data_file
from .errors import EvalError, InnerUnknown, ParseError, PdlError, StepCapExceeded
from .evaluate import Valuation
from .expectation import (
    DEFAULT_BUDGET,
    AlwaysLeft,
    AlwaysRight,
    UniformRandom,
    expected_value_under_policy,
    monte_carlo,
)
from .laws import joni_interval
from .logic import Status, Verdict, box_bounds, check_valid, embed_reward, eval_bound
from .semantics import State, dump_mdp
from .syntax import Not, PBox, file_resolver, parse_formula, parse_program, parse_valuation, parse_value
from .syntax import program_vars as stmt_vars

EXIT_CODES = {Status.SATISFIED: 0, Status.VIOLATED: 1, Status.UNKNOWN: 2}
EXIT_USAGE = 3
EXIT_IO = 4
EXIT_PARSE = 5
EXIT_EVAL = 6
EXIT_INNER_UNKNOWN = 7
EXIT_STEP_CAP = 8

STDERR_FACTOR = 5
_DECIMAL = Context(prec=6, rounding=ROUND_HALF_EVEN)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exact_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x) -> str:
    x = Fraction(x)
    d = _DECIMAL.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(d, "f")


def _rational(text: str) -> Fraction:
    try:
        v = parse_value(text)
    except ParseError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if isinstance(v, bool):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return Fraction(v)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {n}")
    return n


def _load(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _parse_in(what: str, parse, *a, **kw):
    try:
        return parse(*a, **kw)
    except ParseError as exc:
        raise ParseError(f"{what}: {exc}", exc.line, exc.col, exc.expected) from exc


def _inputs(args, need_formula: bool = True):
    program = _parse_in(args.program, parse_program, _load(args.program))
    envs = [_parse_in("--val", parse_valuation, v) for v in (args.val or [""])]
    if not need_formula:
        return program, envs, None
    declared = stmt_vars(program).union(*(set(e) for e in envs))
    phi = _parse_in(
        args.formula,
        parse_formula,
        _load(args.formula),
        resolver=file_resolver(Path(args.formula).parent, program),
        program_vars=declared,
    )
    return program, envs, phi


# --------------------------------------------------------------------------
# reports


def _bounds_report(verdict: Verdict) -> dict:
    b = verdict.bounds
    if b is None:
        return {"expectation": None, "exact": None, "steps_used": 0, "truncated_states": 0}
    return {
        "expectation": {
            "lo": {"exact": exact_str(b.lo), "decimal": decimal_str(b.lo)},
            "hi": {"exact": exact_str(b.hi), "decimal": decimal_str(b.hi)},
        },
        "exact": b.exact,
        "steps_used": b.steps_used,
        "truncated_states": b.truncated_states,
    }


def check_report(verdict: Verdict, wall_ms: float) -> dict:
    report = {
        "verdict": verdict.status.value,
        "bound_evaluated": None if verdict.bound is None else exact_str(verdict.bound),
        "cause": verdict.cause or None,
        "witness": None if verdict.witness is None else str(verdict.witness),
        "wall_time_ms": round(wall_ms, 3),
    }
    report.update(_bounds_report(verdict))
    return report


def _print_check_text(report: dict, out) -> None:
    print(f"verdict: {report['verdict']}", file=out)
    if report["bound_evaluated"] is not None:
        print(f"bound: {report['bound_evaluated']}", file=out)
    e = report["expectation"]
    if e is not None:
        lo, hi = e["lo"], e["hi"]
        if report["exact"]:
            print(f"expectation: {Fraction(lo['exact'])} ({lo['decimal']})", file=out)
        else:
            print(
                f"expectation: [{Fraction(lo['exact'])}, {Fraction(hi['exact'])}]"
                f" ({lo['decimal']} .. {hi['decimal']})",
                file=out,
            )
        print(f"exact: {str(report['exact']).lower()}", file=out)
        print(f"steps: {report['steps_used']}, truncated states: {report['truncated_states']}", file=out)
    if report["witness"] is not None:
        print(f"witness: {report['witness']}", file=out)
    if report["cause"]:
        print(f"cause: {report['cause']}", file=out)
    print(f"time: {report['wall_time_ms']} ms", file=out)


def _emit(report: dict, fmt: str, text_printer, out) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        text_printer(report, out)


# --------------------------------------------------------------------------
# commands


def cmd_check(args, out) -> int:
    program, envs, phi = _inputs(args)
    if args.dump_mdp:
        lines = dump_mdp(State(envs[0], program), args.budget)
        Path(args.dump_mdp).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    started = time.perf_counter()
    verdict = check_valid(phi, envs, args.budget)
    wall = (time.perf_counter() - started) * 1000
    _emit(check_report(verdict, wall), args.format, _print_check_text, out)
    return EXIT_CODES[verdict.status]


def bernoulli_rows(mu: Fraction, deltas: Sequence[Fraction], n_max: int, budget: int = DEFAULT_BUDGET):
    """Yield ``(n, delta, probability)`` for the deviation event after n trials."""
    program = parse_program(data_file("bernoulli.pgcl").read_text(encoding="utf-8"))
    box = parse_formula(
        data_file("bernoulli.pdl").read_text(encoding="utf-8"),
        resolver=file_resolver(".", program),
        program_vars={"n", "mu", "delta"},
    )
    if not isinstance(box, PBox):
        raise ParseError("bernoulli.pdl must be a single p-box")
    for n in range(1, n_max + 1):
        for delta in deltas:
            env = Valuation({"n": n, "mu": mu, "delta": delta})
            b = box_bounds(env, box, budget)
            if not b.exact:
                raise EvalError(f"budget {budget} too small for n = {n}")
            yield n, delta, b.lo


def cmd_bernoulli(args, out) -> int:
    if not 0 <= args.mu <= 1:
        raise UsageError(f"--mu must lie in [0,1], got {args.mu}")
    deltas = args.delta or [Fraction(1, 10), Fraction(1, 5)]
    if any(d < 0 for d in deltas):
        raise UsageError("--delta must be nonnegative")
    out.write("n,delta,probability_exact,probability_decimal\n")
    for n, delta, p in bernoulli_rows(args.mu, deltas, args.n_max, args.budget):
        out.write(f"{n},{decimal_str(delta)},{exact_str(p)},{decimal_str(p)}\n")
    return 0


POLICIES = {
    "left": lambda seed: AlwaysLeft(),
    "right": lambda seed: AlwaysRight(),
    "random": lambda seed: UniformRandom(seed),
}


def _print_simulate_text(report: dict, out) -> None:
    lo, hi = report["interval"]["lo"], report["interval"]["hi"]
    print(f"estimate: {report['estimate']:.6f} +- {report['stderr']:.6f} ({report['trials']} trials)", file=out)
    print(
        f"interval: [{Fraction(lo['exact'])}, {Fraction(hi['exact'])}] ({lo['decimal']} .. {hi['decimal']})",
        file=out,
    )
    pv = report["policy_value"]
    print(f"policy value: {Fraction(pv['exact'])} ({pv['decimal']})", file=out)
    print("inside" if report["inside"] else "OUTSIDE interval", file=out)


def cmd_simulate(args, out) -> int:
    program, envs, phi = _inputs(args)
    if len(envs) != 1:
        raise UsageError("simulate takes exactly one --val")
    if not isinstance(phi, PBox):
        raise UsageError("simulate needs a formula that is a single p-box")
    env = envs[0]
    eval_bound(env, phi.bound)
    lo_phi = box_bounds(env, phi, args.budget).lo
    lo_not = box_bounds(env, PBox(phi.program, phi.bound, Not(phi.body)), args.budget).lo
    lo, hi = joni_interval(lo_phi, lo_not)
    policy = POLICIES[args.policy](args.seed)
    start = State(env, phi.program)
    reward = embed_reward(phi.body, args.budget)
    estimate, stderr = monte_carlo(start, reward, policy, args.trials, args.seed)
    exact = expected_value_under_policy(start, reward, policy, args.budget)
    slack = STDERR_FACTOR * stderr
    inside = float(lo) - slack <= estimate <= float(hi) + slack
    report = {
        "estimate": estimate,
        "stderr": stderr,
        "trials": args.trials,
        "seed": args.seed,
        "policy": args.policy,
        "interval": {
            "lo": {"exact": exact_str(lo), "decimal": decimal_str(lo)},
            "hi": {"exact": exact_str(hi), "decimal": decimal_str(hi)},
        },
        "policy_value": {"exact": exact_str(exact.lo), "decimal": decimal_str(exact.lo)},
        "inside": inside,
    }
    _emit(report, args.format, _print_simulate_text, out)
    return 0 if inside else 1


def cmd_dump_mdp(args, out) -> int:
    program, envs, _ = _inputs(args, need_formula=False)
    if len(envs) != 1:
        raise UsageError("dump-mdp takes exactly one --val")
    for line in dump_mdp(State(envs[0], program), args.budget):
        out.write(line + "\n")
    return 0


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdlcheck", description="Model-check pDL formulas against pGCL programs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formula: bool = True):
        p.add_argument("program", help="pGCL program file")
        if formula:
            p.add_argument("formula", help="pDL formula file; a bare @ names the program")
        p.add_argument("--val", action="append", help="initial valuation, e.g. 'switch=true'")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="successor expansions per p-box")

    check = sub.add_parser("check", help="check a formula")
    common(check)
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--dump-mdp", metavar="FILE", help="also write the program's state graph to FILE")
    check.set_defaults(run=cmd_check)

    bern = sub.add_parser("bernoulli", help="deviation probabilities of the Bernoulli program as CSV")
    bern.add_argument("--mu", type=_rational, default=Fraction(1, 2))
    bern.add_argument("--delta", type=_rational, action="append")
    bern.add_argument("--n-max", type=_positive, default=20)
    bern.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    bern.set_defaults(run=cmd_bernoulli)

    sim = sub.add_parser("simulate", help="compare sampling under a policy with the exact interval")
    common(sim)
    sim.add_argument("--format", choices=("text", "json"), default="text")
    sim.add_argument("--policy", choices=tuple(POLICIES), default="random")
    sim.add_argument("--trials", type=_positive, default=10_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.set_defaults(run=cmd_simulate)

    dump = sub.add_parser("dump-mdp", help="print the reachable state graph")
    common(dump, formula=False)
    dump.set_defaults(run=cmd_dump_mdp)
    return parser


def _error_code(exc: Exception) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, InnerUnknown):
        return EXIT_INNER_UNKNOWN
    if isinstance(exc, StepCapExceeded):
        return EXIT_STEP_CAP
    return EXIT_EVAL


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except UsageError as exc:
        print(f"pdlcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pdlcheck: {exc}", file=sys.stderr)
        return EXIT_IO
    except PdlError as exc:
        print(f"pdlcheck: {exc}", file=sys.stderr)
        return _error_code(exc)
