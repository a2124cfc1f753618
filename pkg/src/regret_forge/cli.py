"""Benchmark harness: generate instances, run algorithms, aggregate tables.

Result store is an append-only CSV (RFC-4180 via the csv module) with a
versioned schema.  Runs are deterministic for a given instance file; the
--seed flag is recorded for provenance.  REGRET_FORGE_THREADS caps the
worker pool used when several instances are passed to ``run``.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import math
import os
import sys
import time
from pathlib import Path

from .core import Direction, TimeBudget
from .errors import (
    EmptyFeasibleRegion,
    NumericalBreakdown,
    ParseError,
    RegretForgeError,
    TooLarge,
)
from .instances import (
    Rng,
    gen_desk_instance,
    gen_gap,
    gen_kp,
    gen_scp_intervals,
    overlay_intervals,
    parse_chubeasley_mkp,
    parse_native,
    parse_orlib_scp,
    serialize_native,
)
from .mmr import (
    AlgStatus,
    BinarySolution,
    BipInstance,
    CutFlavor,
    IdsConfig,
    best_scenario_cut,
    branch_and_cut,
    dominance_holds,
    dual_substitution,
    evaluate_max_regret,
    fixed_scenario,
    iterated_ds,
)
from .oracle import brute_force_max_regret, brute_force_mmr, enumerate_feasible
from .problems import encode_gap, encode_kp, encode_mkp, encode_scp
from dataclasses import replace

SCHEMA_VERSION = 1
CSV_FIELDS = [
    "schema_version", "instance", "algorithm", "obj", "time_s", "iterations",
    "lower_bound", "gap_percent", "status", "seed",
]
ALGORITHMS = ("fix", "ds", "ids-h", "ids-b", "bc", "oracle")

EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3


def gap_percent(obj, lb) -> float | None:
    if obj is None:
        return None
    if obj == lb:
        return 0.0
    if obj > 0:
        return 100.0 * (obj - lb) / obj
    return 0.0


def run_algorithm(inst: BipInstance, alg: str, time_limit: float | None,
                  d: int, cut: str | None, local_exact: bool):
    budget = TimeBudget(time_limit) if time_limit else TimeBudget.unlimited()
    if alg == "fix":
        return fixed_scenario(inst, budget)
    if alg == "ds":
        return dual_substitution(inst, budget)
    if alg in ("ids-h", "ids-b"):
        default = CutFlavor.HAMMING if alg == "ids-h" else CutFlavor.BEST_SCENARIO
        flavor = {None: default,
                  "hamming": CutFlavor.HAMMING,
                  "best-scenario": CutFlavor.BEST_SCENARIO}[cut]
        cfg = IdsConfig(cut_flavor=flavor, d=d, local_exact=local_exact, budget=budget)
        return iterated_ds(inst, cfg)
    if alg == "bc":
        return branch_and_cut(inst, budget)
    if alg == "oracle":
        return brute_force_mmr(inst)
    raise ValueError(f"unknown algorithm {alg!r}")


def report_to_record(inst_name, report, seed) -> dict:
    obj = report.max_regret
    best_iter = report.best_iteration()
    return {
        "schema_version": SCHEMA_VERSION,
        "instance": inst_name,
        "algorithm": report.algorithm.value,
        "obj": "" if obj is None else obj,
        "time_s": f"{report.elapsed:.4f}",
        "iterations": best_iter if best_iter is not None else report.iterations,
        "lower_bound": report.lower_bound,
        "gap_percent": "" if obj is None else f"{gap_percent(obj, report.lower_bound):.4f}",
        "status": report.status.value,
        "seed": seed,
    }


def _run_one(path: str, alg: str, time_limit, d, cut, local_exact, seed) -> dict:
    inst = parse_native(Path(path).read_text())
    report = run_algorithm(inst, alg, time_limit, d, cut, local_exact)
    return report_to_record(inst.name, report, seed)


def _append_records(out_path: Path, records):
    new_file = not out_path.exists() or out_path.stat().st_size == 0
    with out_path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        if new_file:
            writer.writeheader()
        for rec in records:
            writer.writerow(rec)


def cmd_run(args) -> int:
    paths = [p for group in args.instance for p in ([group] if isinstance(group, str) else group)]
    workers = max(1, int(os.environ.get("REGRET_FORGE_THREADS", "1")))
    jobs = [(p, args.alg, args.time_limit, args.d, args.cut, args.local_exact, args.seed)
            for p in paths]
    records = []
    if workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, *job) for job in jobs]
            records = [f.result() for f in futures]  # submission order
    else:
        records = [_run_one(*job) for job in jobs]
    _append_records(Path(args.out), records)
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for rec in records:
            writer.writerow(rec)
    else:
        for rec in records:
            print(
                f"{rec['instance']} {rec['algorithm']}: obj={rec['obj'] or '-'} "
                f"lb={rec['lower_bound']} gap={rec['gap_percent'] or '-'}% "
                f"iter={rec['iterations']} time={rec['time_s']}s status={rec['status']}"
            )
    if any(rec["status"] == AlgStatus.INFEASIBLE.value for rec in records):
        return EXIT_INFEASIBLE
    return 0


def _family(instance_name: str) -> str:
    head, sep, tail = instance_name.rpartition("-")
    return head if sep else instance_name


def load_store(path: Path) -> list[dict]:
    if not path.exists():
        return []
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def aggregate_table(rows):
    """Per (family, algorithm) averages and counts against best-known bounds.

    The lower bound per instance is the max over every recorded run of it;
    #best counts records matching the minimum objective across algorithms.
    """
    by_instance_lb: dict[str, int] = {}
    by_instance_best: dict[str, float] = {}
    for r in rows:
        name = r["instance"]
        lb = int(r["lower_bound"] or 0)
        by_instance_lb[name] = max(by_instance_lb.get(name, 0), lb)
        if r["obj"] != "":
            obj = int(r["obj"])
            cur = by_instance_best.get(name)
            by_instance_best[name] = obj if cur is None else min(cur, obj)

    groups: dict[tuple[str, str], dict] = {}
    for r in rows:
        if r["obj"] == "":
            continue
        name = r["instance"]
        key = (_family(name), r["algorithm"])
        g = groups.setdefault(key, {"time": 0.0, "gap": 0.0, "n": 0, "opt": 0, "best": 0})
        obj = int(r["obj"])
        lb = by_instance_lb[name]
        g["n"] += 1
        g["time"] += float(r["time_s"])
        g["gap"] += gap_percent(obj, min(lb, obj))
        if obj <= lb:
            g["opt"] += 1
        if obj == by_instance_best[name]:
            g["best"] += 1

    out = []
    for (family, alg) in sorted(groups):
        g = groups[(family, alg)]
        out.append({
            "family": family,
            "algorithm": alg,
            "runs": g["n"],
            "avg_time_s": g["time"] / g["n"],
            "avg_gap_percent": g["gap"] / g["n"],
            "num_opt": g["opt"],
            "num_best": g["best"],
        })
    # mark the winners (minimum average gap) per family
    best_gap: dict[str, float] = {}
    for row in out:
        fam = row["family"]
        best_gap[fam] = min(best_gap.get(fam, math.inf), row["avg_gap_percent"])
    for row in out:
        row["winner"] = "*" if row["avg_gap_percent"] <= best_gap[row["family"]] + 1e-12 else ""
    return out


def cmd_table(args) -> int:
    rows = load_store(Path(args.out))
    if not rows:
        print("result store is empty", file=sys.stderr)
        return 1
    table = aggregate_table(rows)
    fields = ["family", "algorithm", "runs", "avg_time_s", "avg_gap_percent",
              "num_opt", "num_best", "winner"]
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=fields)
        writer.writeheader()
        for row in table:
            row = dict(row)
            row["avg_time_s"] = f"{row['avg_time_s']:.2f}"
            row["avg_gap_percent"] = f"{row['avg_gap_percent']:.2f}"
            writer.writerow(row)
    else:
        header = f"{'family':<20} {'alg':<8} {'runs':>5} {'time':>9} {'%gap':>8} {'#opt':>5} {'#best':>6} {'':<2}"
        print(header)
        print("-" * len(header))
        for row in table:
            print(
                f"{row['family']:<20} {row['algorithm']:<8} {row['runs']:>5} "
                f"{row['avg_time_s']:>9.2f} {row['avg_gap_percent']:>8.2f} "
                f"{row['num_opt']:>5} {row['num_best']:>6} {row['winner']:<2}"
            )
    return 0


def cmd_gen(args) -> int:
    rng = Rng(args.seed)
    if args.problem == "kp":
        spec = gen_kp(args.type_num, args.n, args.rbar, args.gamma, args.delta, rng,
                      name=args.name or f"kp{args.type_num}-{args.n}-{args.seed}")
        inst = encode_kp(spec)
    elif args.problem == "gap":
        spec = gen_gap(args.gap_type, args.m, args.n, args.delta, rng,
                       name=args.name or f"gap{args.gap_type.lower()}-{args.m}x{args.n}-{args.seed}")
        inst = encode_gap(spec)
    elif args.problem == "scp":
        spec = parse_orlib_scp(Path(args.source).read_text())
        lo, hi = gen_scp_intervals(spec.c_lo, args.flavor, args.delta, rng)
        spec = replace(spec, c_lo=lo, c_hi=hi,
                       name=args.name or f"scp{args.flavor}-{args.seed}")
        inst = encode_scp(spec)
    elif args.problem == "mkp":
        spec = parse_chubeasley_mkp(Path(args.source).read_text())
        lo, hi = overlay_intervals(spec.c_lo, args.delta, rng)
        spec = replace(spec, c_lo=lo, c_hi=hi,
                       name=args.name or f"mkp-{args.seed}")
        inst = encode_mkp(spec)
    elif args.problem == "random":
        direction = Direction.MAX if args.direction == "max" else Direction.MIN
        inst = gen_desk_instance(direction, args.seed, args.delta,
                                 name=args.name or f"rand-{args.direction}-{args.seed}")
    else:
        raise ValueError(f"unknown problem family {args.problem!r}")
    out = Path(args.out)
    out.write_text(serialize_native(inst))
    print(f"wrote {out} ({inst.name}: n={inst.num_vars}, m={len(inst.constraints)}, "
          f"{inst.direction.value})")
    return 0


def cmd_verify(args) -> int:
    """Oracle-equivalence and lemma-property suites on seeded tiny instances."""
    failures = []
    checks = 0

    def check(label, ok):
        nonlocal checks
        checks += 1
        if not ok:
            failures.append(label)

    budget = args.time_limit
    pair_rng = Rng(args.seed ^ 0xD1CE)
    for idx in range(args.count):
        for direction in (Direction.MAX, Direction.MIN):
            inst = gen_desk_instance(direction, args.seed + idx, delta=0.3 if idx % 2 else 0.1)
            oracle = brute_force_mmr(inst)
            if oracle.status is not AlgStatus.OPTIMAL:
                continue
            opt = oracle.max_regret
            tag = f"{inst.name}"

            rep = branch_and_cut(inst, TimeBudget(budget))
            check(f"bc-exact {tag}", rep.status is AlgStatus.OPTIMAL and rep.max_regret == opt)
            rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.BEST_SCENARIO,
                                              budget=TimeBudget(budget)))
            check(f"ids-b-exact {tag}", rep.status is AlgStatus.OPTIMAL and rep.max_regret == opt)
            rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.HAMMING, d=1,
                                              budget=TimeBudget(budget)))
            check(f"ids-h-exact {tag}", rep.status is AlgStatus.OPTIMAL and rep.max_regret == opt)

            fix = fixed_scenario(inst, TimeBudget(budget))
            check(f"fix-2approx {tag}", fix.max_regret <= 2 * opt and fix.lower_bound <= opt)

            ds = dual_substitution(inst, TimeBudget(budget))
            mobj = ds.trace[0].model_objective
            slack = 1e-6 * (1 + abs(mobj))
            check(f"ds-remarks {tag}",
                  mobj >= opt - slack and ds.max_regret <= mobj + slack and ds.max_regret >= opt)

            feas = enumerate_feasible(inst)
            for _ in range(4):
                i = pair_rng.randint(0, len(feas) - 1)
                j = pair_rng.randint(0, len(feas) - 1)
                xbar = BinarySolution(tuple(int(b) for b in feas[i]))
                xhat = BinarySolution(tuple(int(b) for b in feas[j]))
                if dominance_holds(inst, xbar, xhat):
                    check(f"dominance {tag}",
                          brute_force_max_regret(inst, xhat).max_regret
                          <= brute_force_max_regret(inst, xbar).max_regret)
            if inst.num_vars <= 10 and len(feas):
                xhat = BinarySolution(tuple(int(b) for b in feas[0]))
                cut = best_scenario_cut(inst, xhat)
                removed = {tuple(int(b) for b in v) for v in feas
                           if not cut.satisfied_by(v.astype(float))}
                dominated = {tuple(int(b) for b in v) for v in feas
                             if dominance_holds(inst, BinarySolution(tuple(int(b) for b in v)), xhat)}
                check(f"cut-soundness {tag}", removed == dominated)

    print(f"verify: {checks - len(failures)}/{checks} checks passed")
    for label in failures[:20]:
        print(f"  FAIL {label}")
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regret-forge",
        description="Interval min-max regret toolkit for binary programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one algorithm over instance files")
    p_run.add_argument("--instance", action="append", required=True,
                       help="native-format instance file (repeatable)")
    p_run.add_argument("--alg", choices=ALGORITHMS, required=True)
    p_run.add_argument("--time-limit", type=float, default=3600.0)
    p_run.add_argument("--seed", type=int, default=0, help="recorded for provenance")
    p_run.add_argument("--d", type=int, default=1, help="Hamming radius for ids-h")
    p_run.add_argument("--cut", choices=("hamming", "best-scenario"), default=None)
    p_run.add_argument("--local-exact", action="store_true")
    p_run.add_argument("--out", default="results.csv", help="result store (append-only CSV)")
    p_run.add_argument("--format", choices=("csv", "text"), default="text")
    p_run.set_defaults(func=cmd_run)

    p_table = sub.add_parser("table", help="aggregate the result store")
    p_table.add_argument("--out", default="results.csv", help="result store to read")
    p_table.add_argument("--format", choices=("csv", "text"), default="text")
    p_table.set_defaults(func=cmd_table)

    p_gen = sub.add_parser("gen", help="generate instance files (native format)")
    gen_sub = p_gen.add_subparsers(dest="problem", required=True)

    g_kp = gen_sub.add_parser("kp", help="knapsack families 1-9")
    g_kp.add_argument("--type", dest="type_num", type=int, required=True, choices=range(1, 10))
    g_kp.add_argument("--n", type=int, required=True)
    g_kp.add_argument("--rbar", type=int, default=1000)
    g_kp.add_argument("--gamma", default="0.5")
    g_kp.add_argument("--delta", default="0.1")

    g_gap = gen_sub.add_parser("gap", help="assignment types A/B/C/E")
    g_gap.add_argument("--type", dest="gap_type", required=True, choices=list("ABCE"))
    g_gap.add_argument("--m", type=int, required=True)
    g_gap.add_argument("--n", type=int, required=True)
    g_gap.add_argument("--delta", default="0.1")

    g_scp = gen_sub.add_parser("scp", help="interval overlay on an OR-Library covering file")
    g_scp.add_argument("--from", dest="source", required=True)
    g_scp.add_argument("--flavor", choices=list("BMK"), default="B")
    g_scp.add_argument("--delta", default="0.1")

    g_mkp = gen_sub.add_parser("mkp", help="interval overlay on a Chu-Beasley instance")
    g_mkp.add_argument("--from", dest="source", required=True)
    g_mkp.add_argument("--delta", default="0.1")

    g_rand = gen_sub.add_parser("random", help="small seeded instance for testing")
    g_rand.add_argument("--direction", choices=("max", "min"), required=True)
    g_rand.add_argument("--delta", default="0.1")

    for g in (g_kp, g_gap, g_scp, g_mkp, g_rand):
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--out", required=True)
        g.add_argument("--name", default=None)
        g.set_defaults(func=cmd_gen)

    p_verify = sub.add_parser("verify", help="oracle-equivalence and lemma checks")
    p_verify.add_argument("--count", type=int, default=10, help="instances per orientation")
    p_verify.add_argument("--seed", type=int, default=20240601)
    p_verify.add_argument("--time-limit", type=float, default=120.0)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EmptyFeasibleRegion,) as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NumericalBreakdown, TooLarge, RegretForgeError) as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
