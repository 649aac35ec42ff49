"""Command line front end: ``resched {generate,solve,verify,bench}``.

Exit codes: 0 success (verify: Robust), 1 verify found a violation, 2 bad
arguments or invalid input, 3 infeasible, 4 timed out without a schedule,
5 LBBD requested but no MILP adapter is available.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import io
from .bb import bb_solve
from .core import InvalidInstance, InvalidSchedule, SolveResult, Status
from .generator import GenConfig, generate_instance, paper_grid
from .heuristics import TabuParams, edf_schedule, greedy_schedule, tabu_search
from .lbbd import AdapterUnavailable, get_adapter, lbbd_solve
from .verification import brute_force_is_robust, is_robust

EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_TIMED_OUT = 4
EXIT_NO_ADAPTER = 5

ALGORITHMS = ("edf", "greedy", "tabu", "bb", "lbbd")
CSV_HEADER = [
    "group_alpha3", "group_dmax", "algorithm", "obj_mean", "obj_std",
    "time_mean_s", "time_std_s", "proven_opt_pct", "count",
]


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def run_algorithm(inst, algorithm: str, time_limit: Optional[float] = None, seed: int = 0,
                  stop_no_improve: Optional[int] = None, warm_start: bool = False) -> SolveResult:
    if algorithm == "edf":
        return edf_schedule(inst)
    if algorithm == "greedy":
        return greedy_schedule(inst)
    if algorithm == "tabu":
        return tabu_search(inst, TabuParams(stop_no_improve=stop_no_improve, seed=seed))
    if algorithm == "bb":
        ub = None
        if warm_start:
            ub = tabu_search(inst, TabuParams(seed=seed))
            ub = ub if ub.schedule is not None else None
        return bb_solve(inst, initial_upper_bound=ub, time_limit=time_limit)
    if algorithm == "lbbd":
        return lbbd_solve(inst, get_adapter(), time_limit=time_limit)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# generate ------------------------------------------------------------------

def cmd_generate(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    if args.preset == "paper-grid":
        if args.n is None:
            raise UsageError("--preset paper-grid needs --n")
        for k, (cfg, inst) in enumerate(paper_grid(args.n, seed=args.seed or 0, samples=args.samples)):
            name = f"grid_n{cfg.n}_{k:03d}_a3-{io.rational_text(cfg.alpha3)}_d{cfg.max_deviation}.json".replace("/", "_")
            io.write_instance(inst, out / name)
            entries.append(io.manifest_entry(name, cfg))
    else:
        missing = [f for f in ("n", "alpha1", "alpha2", "alpha3", "dmax", "seed") if getattr(args, f) is None]
        if missing:
            raise UsageError("missing " + ", ".join("--" + m for m in missing))
        try:
            cfg = GenConfig(args.n, args.alpha1, args.alpha2, args.alpha3, args.dmax, args.seed,
                            args.interval_length, args.intervals_per_op, args.energy_limit)
        except ValueError as exc:
            raise UsageError(str(exc))
        inst = generate_instance(cfg)
        name = f"inst_n{cfg.n}_d{cfg.max_deviation}_s{cfg.seed}.json"
        io.write_instance(inst, out / name)
        entries.append(io.manifest_entry(name, cfg))
    text = io.dumps_manifest(entries)
    (out / "manifest.json").write_text(text)
    sys.stdout.write(text)
    return 0


# solve ---------------------------------------------------------------------

def cmd_solve(args) -> int:
    inst = io.read_instance(args.instance)
    try:
        res = run_algorithm(inst, args.algorithm, args.time_limit, args.seed,
                            args.stop_no_improve, args.warm_start)
    except AdapterUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ADAPTER
    if res.status is Status.INFEASIBLE:
        print("Infeasible: no robust schedule found", file=sys.stderr)
        return EXIT_INFEASIBLE
    if res.schedule is None:
        print("TimedOut: no schedule found within the time limit", file=sys.stderr)
        return EXIT_TIMED_OUT
    verdict = is_robust(inst, res.schedule)
    if not verdict.robust:
        raise RuntimeError(f"{args.algorithm} returned a non-robust schedule: {verdict}")
    text = io.dumps_result(args.algorithm, res, include_runtime=not args.no_runtime)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    inst = io.read_instance(args.instance)
    base = io.read_schedule(args.schedule)
    if len(base.starts) != inst.n:
        raise InvalidSchedule(f"schedule has {len(base.starts)} starts, instance has {inst.n} operations")
    verdict = brute_force_is_robust(inst, base) if args.brute_force else is_robust(inst, base)
    if verdict.robust:
        print("Robust")
        return 0
    parts = [f"interval={verdict.interval + 1}"]
    if verdict.position is not None:
        parts.append(f"position={verdict.position + 1}")
        parts.append(f"shift_time={verdict.shift_time}")
    parts.append("scenario=" + ",".join(map(str, verdict.scenario)))
    print("Violated " + " ".join(parts))
    return EXIT_VIOLATED


# bench ---------------------------------------------------------------------

def _bench_one(job):
    path, algorithm, time_limit, seed = job
    inst = io.read_instance(path)
    try:
        res = run_algorithm(inst, algorithm, time_limit, seed)
    except AdapterUnavailable:
        return None
    return res.objective, res.runtime, res.proven_optimal


def _group_key(entry: dict, inst_path: Path):
    alpha3 = entry.get("alpha3", "")
    dmax = entry.get("max_deviation")
    if dmax is None:
        dmax = io.read_instance(inst_path).max_deviation
    return str(alpha3), int(dmax)


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.6g}"


def aggregate(records: list[tuple]) -> list[list[str]]:
    """``records`` are (alpha3, dmax, algorithm, objective|None, runtime, proven)."""
    groups = defaultdict(list)
    for a3, dmax, alg, obj, rt, proven in records:
        groups[(a3, dmax, alg)].append((obj, rt, proven))
    rows = []
    for (a3, dmax, alg) in sorted(groups, key=lambda k: (Fraction(k[0]) if k[0] else -1, k[1], ALGORITHMS.index(k[2]))):
        items = groups[(a3, dmax, alg)]
        objs = [o for o, _, _ in items if o is not None]
        times = [t for _, t, _ in items]
        rows.append([
            a3, str(dmax), alg,
            _fmt(statistics.fmean(objs) if objs else None),
            _fmt(statistics.pstdev(objs) if objs else None),
            _fmt(statistics.fmean(times)),
            _fmt(statistics.pstdev(times)),
            _fmt(100.0 * sum(p for _, _, p in items) / len(items)),
            str(len(items)),
        ])
    return rows


def cmd_bench(args) -> int:
    base_dir, entries = io.read_manifest(args.manifest)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    bad = [a for a in algorithms if a not in ALGORITHMS]
    if bad:
        raise UsageError(f"--algorithms: unknown algorithm(s) {', '.join(bad)}")
    if "lbbd" in algorithms:
        try:
            get_adapter()
        except AdapterUnavailable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_ADAPTER
    jobs, keys = [], []
    for entry in entries:
        path = base_dir / entry["file"]
        key = _group_key(entry, path)
        for alg in algorithms:
            jobs.append((str(path), alg, args.time_limit, args.seed))
            keys.append((*key, alg))

    records = []
    raw = open(args.raw, "w", newline="") if args.raw else None
    raw_writer = csv.writer(raw) if raw else None
    if raw_writer:
        raw_writer.writerow(["file", "algorithm", "objective", "runtime_s", "proven_optimal"])
        raw.flush()
    interrupted = False
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                results = pool.map(_bench_one, jobs)
                for job, key, res in zip(jobs, keys, results):
                    _record(records, raw_writer, raw, job, key, res)
        else:
            for job, key in zip(jobs, keys):
                _record(records, raw_writer, raw, job, key, _bench_one(job))
    except KeyboardInterrupt:
        interrupted = True
    finally:
        if raw:
            raw.close()

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(aggregate(records))
        out.flush()
    finally:
        if args.output:
            out.close()
    return 130 if interrupted else 0


def _record(records, writer, handle, job, key, res):
    if res is None:
        return
    obj, rt, proven = res
    records.append((*key, obj, rt, proven))
    if writer:
        writer.writerow([job[0], job[1], "" if obj is None else obj, f"{rt:.6f}", int(proven)])
        handle.flush()


# entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resched", description="Robust scheduling under energy consumption limits.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate random instances")
    g.add_argument("--preset", choices=["paper-grid"])
    g.add_argument("--n", type=int)
    g.add_argument("--alpha1", type=_rational)
    g.add_argument("--alpha2", type=_rational)
    g.add_argument("--alpha3", type=_rational)
    g.add_argument("--dmax", type=_nonneg)
    g.add_argument("--seed", type=_nonneg)
    g.add_argument("--samples", type=int, default=10, help="draws per alpha combination (preset only)")
    g.add_argument("--interval-length", type=int, default=15)
    g.add_argument("--intervals-per-op", type=int, default=3)
    g.add_argument("--energy-limit", type=_rational, default=Fraction(100))
    g.add_argument("--output-dir", default=".")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--seed", type=_nonneg, default=0)
    s.add_argument("--stop-no-improve", type=int)
    s.add_argument("--warm-start", action="store_true", help="seed bb with a tabu upper bound")
    s.add_argument("--output", "-o")
    s.add_argument("--no-runtime", action="store_true", help="write runtime_ms as null")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a schedule for robustness")
    v.add_argument("instance")
    v.add_argument("schedule")
    v.add_argument("--brute-force", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="aggregate results over a manifest")
    b.add_argument("manifest")
    b.add_argument("--algorithms", default="edf,greedy,tabu")
    b.add_argument("--time-limit", type=float)
    b.add_argument("--seed", type=_nonneg, default=0)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--output", "-o")
    b.add_argument("--raw", help="per-run CSV, flushed after every run")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (InvalidInstance, InvalidSchedule, ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
