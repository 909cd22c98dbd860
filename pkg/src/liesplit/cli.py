"""Command-line entry point: ``liesplit grade|check|sweep|quadric``.

Exit codes: 0 all checks pass, 1 usage error, 2 an expected invariant was
violated, 3 the case lies outside the checked depth range.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from . import report
from .grading import grade_type
from .quadric import TangentRow, classify_tangent_candidates
from .rootsys import build_root_system
from .splitcheck import CaseReport, all_cases, verify_case

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_OUT_OF_RANGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive, default=20)
    common.add_argument("--jobs", type=_positive, default=1)

    parser = _Parser(prog="liesplit", description="Exact checks of splitting criteria for parabolic gradations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("grade", parents=[common], help="print the gradation of one marked root")
    _case_args(p)
    p = sub.add_parser("check", parents=[common], help="verify one case")
    _case_args(p)
    p = sub.add_parser("sweep", parents=[common], help="verify every case of depth <= 2")
    p.add_argument("max_rank", nargs="?", type=int, default=8)
    p = sub.add_parser("quadric", parents=[common], help="classify tangent candidates on a quadric")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--cross-check", action="store_true", help="also compute kernels from brackets")
    return parser


def _case_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("family")
    p.add_argument("rank", type=int)
    p.add_argument("marked", type=int)


def _header(args, command: str) -> dict:
    return {"kind": "header", "command": command, "seed": args.seed, "trials": args.trials}


def _emit(out, args, command: str, machine: Iterable[dict], text: str) -> None:
    if args.format == "machine":
        out.write(report.dumps(_header(args, command)) + "\n")
        for rec in machine:
            out.write(report.dumps(rec) + "\n")
    else:
        out.write(f"# liesplit {command} seed={args.seed} trials={args.trials}\n")
        out.write(text + "\n")


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Results in input order regardless of completion order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# commands --------------------------------------------------------------

def cmd_grade(args, out) -> int:
    grad = grade_type(args.family, args.rank, args.marked)
    _emit(out, args, f"grade {grad.sys.family} {grad.sys.rank} {grad.marked}",
          [report.gradation_record(grad)], report.render_gradation(grad))
    return EXIT_OK


def _status_code(rep: CaseReport) -> int:
    return {"verified": EXIT_OK, "out_of_range": EXIT_OUT_OF_RANGE}.get(rep.status, EXIT_VIOLATION)


def cmd_check(args, out) -> int:
    sysm = build_root_system(args.family, args.rank)
    rep = verify_case(sysm.family, sysm.rank, args.marked, trials=args.trials, seed=args.seed)
    _emit(out, args, f"check {rep.family} {rep.rank} {rep.marked}",
          [report.case_record(rep, sysm)], report.render_case(rep, sysm))
    return _status_code(rep)


class _CaseJob:
    def __init__(self, trials: int, seed: int):
        self.trials, self.seed = trials, seed

    def __call__(self, key):
        return verify_case(*key, trials=self.trials, seed=self.seed)


def cmd_sweep(args, out) -> int:
    if not 1 <= args.max_rank <= 8:
        raise ValueError(f"max_rank must be in 1..8, got {args.max_rank}")
    keys = all_cases(args.max_rank)
    in_range = [k for k in keys if grade_type(*k).depth <= 2]
    reports = _parallel_map(_CaseJob(args.trials, args.seed), in_range, args.jobs)
    skipped = len(keys) - len(in_range)
    bad = sum(r.status == "violation" for r in reports)
    records = [report.case_record(r, build_root_system(r.family, r.rank)) for r in reports]
    records.append({"kind": "summary", "cases": len(reports), "violations": bad, "skipped": skipped})
    _emit(out, args, f"sweep {args.max_rank}", records, report.render_sweep(reports, skipped))
    return EXIT_VIOLATION if bad else EXIT_OK


def quadric_violations(rows: Sequence[TangentRow]) -> list[str]:
    """Departures from the expected rank dichotomy in a classification table."""
    problems = []
    for r in rows:
        expect = r.k in (0, r.m)
        if r.admissible != expect:
            problems.append(f"k={r.k}: admissible={r.admissible}, expected {expect}")
        if r.k == r.m:
            if r.annihilator_dim != r.bound:
                problems.append(f"k={r.k}: annihilator gives {r.annihilator_dim}, expected {r.bound}")
            # candidates after the annihilator and the (equal) standard complement are random
            if any(d >= r.bound for d in r.dims[2:]):
                problems.append(f"k={r.k}: a non-annihilator complement reaches n-m")
        if r.bracket_agree is not None and r.bracket_agree != r.candidates:
            problems.append(f"k={r.k}: bracket model disagrees on {r.candidates - r.bracket_agree} candidates")
    return problems


def cmd_quadric(args, out) -> int:
    n, m = args.n, args.m
    if not (3 <= n <= 12 and 2 <= m <= n - 1):
        raise ValueError(f"need 3 <= n <= 12 and 2 <= m <= n-1, got n={n}, m={m}")
    rows = classify_tangent_candidates(n, m, trials=args.trials, seed=args.seed, cross_check=args.cross_check)
    problems = quadric_violations(rows)
    records = [report.tangent_record(r) for r in rows]
    records.append({"kind": "summary", "n": n, "m": m, "admissible": [r.k for r in rows if r.admissible],
                    "problems": problems})
    text = report.render_quadric(rows) + "".join(f"\nPROBLEM: {p}" for p in problems)
    _emit(out, args, f"quadric {n} {m}", records, text)
    return EXIT_VIOLATION if problems else EXIT_OK


COMMANDS = {"grade": cmd_grade, "check": cmd_check, "sweep": cmd_sweep, "quadric": cmd_quadric}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ValueError as exc:
        print(f"liesplit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
