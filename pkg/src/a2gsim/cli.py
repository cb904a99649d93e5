"""Command-line front end: run, compare, cache-cdf."""

import argparse
import csv
import json
import os
import sys
from dataclasses import replace
from multiprocessing import Pool

from .cache import UNSATISFIABLE, hit_rate_cdf, hit_rate_grid, min_hit_rate
from .errors import ConfigError
from .metrics import CSV_HEADER
from .scenario import Scenario, load_scenario, scenario_from_dict
from .simulate import run_simulation


def _build_parser():
    parser = argparse.ArgumentParser(prog="a2gsim",
                                     description="In-flight traffic management simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON scenario configuration file")
        p.add_argument("--seed", type=int)
        p.add_argument("--scheme", type=int)
        p.add_argument("--horizon", type=float, dest="horizon_s",
                       help="simulation horizon in seconds")
        p.add_argument("--hit-rate", type=float, dest="hit_rate")
        p.add_argument("--out-dir", default=".")

    p_run = sub.add_parser("run", help="one simulation run")
    common(p_run)
    p_run.add_argument("--trace", action="store_true",
                       help="also write a JSON-lines event trace")

    p_cmp = sub.add_parser("compare", help="all three schemes on one seed")
    common(p_cmp)

    p_cdf = sub.add_parser("cache-cdf", help="minimal hit-rate CDF over seeds")
    common(p_cdf)
    p_cdf.add_argument("--runs", type=int, default=295, help="number of seeds")
    p_cdf.add_argument("--workers", type=int, default=1)
    p_cdf.add_argument("--grid-step", type=float, dest="grid_step")
    return parser


def _scenario_from_args(args) -> Scenario:
    overrides = {}
    for key in ("seed", "scheme", "horizon_s", "hit_rate", "grid_step"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.config:
        return load_scenario(args.config, overrides)
    return scenario_from_dict(overrides)


def _write_report(report, out_dir, suffix=""):
    json_path = os.path.join(out_dir, "report%s.json" % suffix)
    with open(json_path, "w") as fh:
        fh.write(report.to_json())
    csv_path = os.path.join(out_dir, "report%s.csv" % suffix)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(report.csv_rows())
    return json_path, csv_path


def cmd_run(args) -> int:
    sc = _scenario_from_args(args)
    os.makedirs(args.out_dir, exist_ok=True)
    trace = [] if args.trace else None
    report = run_simulation(sc, trace=trace)
    _write_report(report, args.out_dir)
    if trace is not None:
        with open(os.path.join(args.out_dir, "trace.jsonl"), "w") as fh:
            for line in trace:
                fh.write(json.dumps(line, sort_keys=True) + "\n")
    print("run seed=%d scheme=%d satisfied_all=%s"
          % (sc.seed, sc.scheme, report.satisfied_all()))
    return 0


def cmd_compare(args) -> int:
    sc = _scenario_from_args(args)
    os.makedirs(args.out_dir, exist_ok=True)
    rows = []
    for scheme in (1, 2, 3):
        report = run_simulation(replace(sc, scheme=scheme))
        _write_report(report, args.out_dir, suffix="_scheme%d" % scheme)
        rows.extend(report.csv_rows(scheme=scheme))
    path = os.path.join(args.out_dir, "compare.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)
    print("compare seed=%d -> %s" % (sc.seed, path))
    return 0


def _cdf_worker(task):
    scheme, seed, sc_args = task
    sc = Scenario(**sc_args)
    return scheme, seed, min_hit_rate(replace(sc, scheme=scheme, seed=seed))


def _load_checkpoint(path):
    if os.path.exists(path):
        with open(path) as fh:
            raw = json.load(fh)
        return {tuple(json.loads(k)): (UNSATISFIABLE if v == "unsat" else v)
                for k, v in raw.items()}
    return {}


def _save_checkpoint(path, done):
    raw = {json.dumps(list(k)): ("unsat" if v == UNSATISFIABLE else v)
           for k, v in done.items()}
    with open(path, "w") as fh:
        json.dump(raw, fh, sort_keys=True)


def cmd_cache_cdf(args) -> int:
    sc = _scenario_from_args(args)
    if args.runs < 1:
        raise ConfigError("runs must be at least 1")
    os.makedirs(args.out_dir, exist_ok=True)
    schemes = [args.scheme] if args.scheme is not None else [1, 2, 3]
    seeds = list(range(sc.seed, sc.seed + args.runs))
    checkpoint_path = os.path.join(args.out_dir, "cdf_checkpoint.json")
    done = _load_checkpoint(checkpoint_path)

    tasks = [(scheme, seed, sc.__dict__) for scheme in schemes for seed in seeds
             if (scheme, seed) not in done]
    if tasks:
        if args.workers > 1:
            with Pool(args.workers) as pool:
                for i, (scheme, seed, mhr) in enumerate(pool.imap_unordered(_cdf_worker, tasks)):
                    done[(scheme, seed)] = mhr
                    if (i + 1) % 10 == 0:
                        _save_checkpoint(checkpoint_path, done)
        else:
            for i, task in enumerate(tasks):
                scheme, seed, mhr = _cdf_worker(task)
                done[(scheme, seed)] = mhr
                if (i + 1) % 10 == 0:
                    _save_checkpoint(checkpoint_path, done)
        _save_checkpoint(checkpoint_path, done)

    cdf_rows = []
    cdf_json = {}
    for scheme in schemes:
        rates = {seed: done[(scheme, seed)] for seed in seeds}
        cdf = hit_rate_cdf(rates, sc.grid_step)
        cdf_json[str(scheme)] = [[h, round(f, 6)] for h, f in cdf]
        cdf_rows.extend([scheme, "%.2f" % h, "%.6f" % f] for h, f in cdf)
    with open(os.path.join(args.out_dir, "cdf.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scheme", "hit_rate", "fraction_satisfied"])
        writer.writerows(cdf_rows)
    with open(os.path.join(args.out_dir, "cdf.json"), "w") as fh:
        json.dump(cdf_json, fh, sort_keys=True, indent=2)
    print("cache-cdf schemes=%s seeds=%d -> %s"
          % (schemes, len(seeds), os.path.join(args.out_dir, "cdf.csv")))
    return 0


_COMMANDS = {"run": cmd_run, "compare": cmd_compare, "cache-cdf": cmd_cache_cdf}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
