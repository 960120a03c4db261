"""Command-line entry point (``dynsat``).

Exit status: 0 on success, 1 when the library fails while solving (for
example a script removes an unknown clause id), 2 for usage errors, missing
files and malformed input.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import anytime, bench, graphdot, wcnf
from .dwcsp import generate_sequence
from .dynamic import DynamicSolver, ScriptError, parse_script, run_script
from .model import InputError
from .solver import SolveReport, SolverParams, solve

SEED_ENV = "DYNSAT_SEED"


class UsageError(Exception):
    pass


def _fractions(text: str) -> list[float]:
    try:
        out = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not out or any(not 0.0 <= x <= 1.0 for x in out):
        raise argparse.ArgumentTypeError("fractions must lie in [0, 1]")
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _solver_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("solver")
    g.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV} or 0)")
    g.add_argument("--max-flips", type=int, default=100_000)
    g.add_argument("--max-tries", type=int, default=10)
    g.add_argument("--noise", type=float, default=0.5)
    g.add_argument("--target", type=int, default=0, help="stop once cost drops below this")
    g.add_argument("--hard-limit", type=int, default=None,
                   help="weight at or above which a clause is hard (default: wcnf top)")
    g.add_argument("--restart-each-try", action="store_true",
                   help="draw a fresh random assignment at the start of every try")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _solver_options()
    ap = argparse.ArgumentParser(prog="dynsat", description="Weighted MAX-SAT local search.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="run MaxWalkSat on a wcnf file")
    s.add_argument("file")
    s.add_argument("--timing", action="store_true", help="also print elapsed seconds")

    s = sub.add_parser("dynamic", parents=[common], help="replay an add/remove/solve script")
    s.add_argument("file", help="initial formula (wcnf)")
    s.add_argument("script")

    s = sub.add_parser("anytime", parents=[common], help="sample the anytime solver")
    s.add_argument("file")
    s.add_argument("--sample-at", type=_fractions, default=[0.0, 0.25, 0.5, 0.75])
    s.add_argument("--basis", choices=("flips", "time"), default="flips",
                   help="fractions of the flip budget (deterministic) or of a baseline time")
    s.add_argument("--baseline", type=float, default=None,
                   help="baseline seconds for --basis time (default: time one MaxWalkSat run)")

    s = sub.add_parser("bench", parents=[common], help="run the measurement harness")
    s.add_argument("files", nargs="*", help="wcnf problems (default: generated instances)")
    s.add_argument("--trials", type=_positive, default=30)
    s.add_argument("--out", required=True, help="output directory for the CSV files")
    s.add_argument("--problems", type=_positive, default=3,
                   help="number of generated problems when no files are given")
    s.add_argument("--num-vars", type=_positive, default=60)
    s.add_argument("--num-clauses", type=_positive, default=400)
    s.add_argument("--batch-size", type=_positive, default=100)
    s.add_argument("--seeds-per-sequence", type=_positive, default=3)
    s.add_argument("--jobs", type=_positive, default=1)

    d = sub.add_parser("dwcsp", help="dynamic benchmark sequences")
    dsub = d.add_subparsers(dest="dwcsp_command", required=True)
    s = dsub.add_parser("gen", help="split a wcnf file into an initial formula and a script")
    s.add_argument("file")
    s.add_argument("--batch-size", type=_positive, required=True)
    s.add_argument("--out", default=None, help="script path (default: stdout)")
    s.add_argument("--initial-out", default=None,
                   help="where to write the initial formula (default: next to --out)")

    s = sub.add_parser("graph", help="export the constraint graph")
    s.add_argument("file")
    s.add_argument("--dot", required=True, help="output path, or - for stdout")

    s = sub.add_parser("generate", help="write a random weighted partial 2-SAT instance")
    s.add_argument("--num-vars", type=_positive, default=60)
    s.add_argument("--num-clauses", type=_positive, default=400)
    s.add_argument("--hard-fraction", type=float, default=0.1)
    s.add_argument("--max-weight", type=_positive, default=10)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", default="-")
    return ap


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} is not an integer: {env!r}")


def _params(args) -> SolverParams:
    try:
        return SolverParams(
            max_flips=args.max_flips, max_tries=args.max_tries, target=args.target,
            noise=args.noise, seed=_seed(args) % 2**64, hard_limit=args.hard_limit,
            restart_each_try=args.restart_each_try,
        )
    except InputError as exc:
        raise UsageError(str(exc))


def _load(path: str):
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    return wcnf.load(path)


def _report_lines(rep: SolveReport) -> list[str]:
    return [
        f"Solution: {rep.final_assignment.bits()}",
        f"Cost: {rep.final_cost}",
        f"Best-Solution: {rep.best_assignment.bits()}",
        f"Best-Cost: {rep.best_cost}",
        f"Terminated-By: {rep.terminated_by}",
        f"Flips: {rep.flips_performed}",
        f"Tries: {rep.tries_performed}",
    ]


def cmd_solve(args, out) -> int:
    f = _load(args.file)
    rep = solve(f, _params(args))
    lines = _report_lines(rep)
    if args.timing:
        lines.append(f"Elapsed: {rep.elapsed:.6f}")
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_dynamic(args, out) -> int:
    f = _load(args.file)
    if not Path(args.script).is_file():
        raise UsageError(f"no such file: {args.script}")
    events = parse_script(Path(args.script).read_text(encoding="utf-8"))
    solver = DynamicSolver(f, _params(args))
    reports = run_script(solver, events)
    for k, rep in enumerate(reports, start=1):
        out.write(f"# solve {k}\n" + "\n".join(_report_lines(rep)) + "\n")
    return 0


def cmd_anytime(args, out) -> int:
    f = _load(args.file)
    p = _params(args)
    h = anytime.start(f, p)
    h.wait()
    fractions = sorted(args.sample_at)
    out.write("fraction,at,cost,score,flips_at,solution\n")
    if args.basis == "flips":
        budget = p.max_tries * p.max_flips
        points = [(x, round(x * budget), h.best_at_flips(round(x * budget))) for x in fractions]
    else:
        base = args.baseline if args.baseline is not None else solve(f, p).elapsed
        points = [(x, f"{x * base:.6f}", h.best_at(x * base)) for x in fractions]
    final = h.snapshot()
    points.append(("final", final.flips_at if args.basis == "flips" else f"{final.found_at:.6f}",
                   final))
    for x, at, rec in points:
        out.write(f"{x},{at},{rec.cost},{rec.score},{rec.flips_at},{rec.assignment.bits()}\n")
    return 0


def cmd_bench(args, out) -> int:
    p = _params(args)
    cfg = bench.BenchConfig(
        problems=args.problems, trials=args.trials, num_vars=args.num_vars,
        num_clauses=args.num_clauses, batch_size=args.batch_size,
        seeds_per_sequence=args.seeds_per_sequence, jobs=args.jobs,
    )
    problems = {Path(x).stem: _load(x) for x in args.files} or None
    paths = bench.run_bench(args.out, p, cfg, problems)
    for name in ("runtimes", "velocities", "thresholds"):
        out.write(f"{name}: {paths[name]}\n")
    return 0


def cmd_dwcsp(args, out) -> int:
    f = _load(args.file)
    seq = generate_sequence(f, args.batch_size)
    initial_path = args.initial_out
    if initial_path is None and args.out is not None:
        initial_path = str(Path(args.out).with_suffix(".initial.wcnf"))
    comments = []
    if initial_path is not None:
        wcnf.dump(seq.initial, initial_path)
        comments.append(f"initial: {Path(initial_path).name}")
    script = "".join(f"c {c}\n" for c in comments) + seq.to_script()
    if args.out is None:
        out.write(script)
    else:
        Path(args.out).write_text(script, encoding="utf-8", newline="\n")
    return 0


def cmd_graph(args, out) -> int:
    dot = graphdot.to_dot(_load(args.file))
    if args.dot == "-":
        out.write(dot)
    else:
        Path(args.dot).write_text(dot, encoding="utf-8", newline="\n")
    return 0


def cmd_generate(args, out) -> int:
    if not 0.0 <= args.hard_fraction <= 1.0:
        raise UsageError("--hard-fraction must lie in [0, 1]")
    f = bench.random_instance(args.num_vars, args.num_clauses, 2, args.max_weight,
                              args.hard_fraction, _seed(args))
    text = wcnf.write_wcnf(f)
    if args.out == "-":
        out.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "dynamic": cmd_dynamic,
    "anytime": cmd_anytime,
    "bench": cmd_bench,
    "dwcsp": cmd_dwcsp,
    "graph": cmd_graph,
    "generate": cmd_generate,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, wcnf.WcnfParseError, ScriptError, InputError, OSError) as exc:
        err.write(f"dynsat: error: {exc}\n")
        return 2
    except (KeyError, ValueError, RuntimeError) as exc:
        err.write(f"dynsat: solve failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
