"""Command-line front end: ``aerialbs generate | plan | sweep | verify``.

Exit codes: 0 success, 1 verification failed, 2 config error, 3 planner misuse,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from aerialbs.config import ConfigError, RunConfig, load_config
from aerialbs.evaluation import covered_mask, expand_grid, run_sweep, to_csv
from aerialbs.planners import PLANNERS, Deployment, PlannerError, plan, robustify
from aerialbs.scenarios import UserSet, generate_users

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_PLANNER, EXIT_IO = 0, 1, 2, 3, 4


def atomic_write(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.output_path = args.out
    return cfg


def _read_json(path) -> dict:
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _read_users(path) -> UserSet:
    try:
        return UserSet.from_dict(_read_json(path))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad scenario file {path}: {exc}") from exc


def _read_deployment(path) -> Deployment:
    try:
        return Deployment.from_dict(_read_json(path))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad deployment file {path}: {exc}") from exc


def _require_out(cfg: RunConfig) -> str:
    if not cfg.output_path:
        raise ConfigError("no output path: pass --out or set output.path")
    return cfg.output_path


def cmd_generate(args) -> int:
    cfg = _config(args)
    out = _require_out(cfg)
    users = generate_users(cfg.scenario, cfg.seed)
    atomic_write(out, users.dumps())
    print(f"{len(users)} users ({cfg.scenario.process}, side {cfg.scenario.side_m:g} m, "
          f"seed {cfg.seed}) -> {out}")
    return EXIT_OK


def _print_summary(dep: Deployment, users: UserSet):
    mask = covered_mask(dep, users.true_positions)
    cov = float(mask.mean()) if len(mask) else 0.0
    mw, dbm = dep.total_power()
    print(f"planner {dep.planner}: {dep.k_used} stations, coverage {cov:.4f} "
          f"({int(mask.sum())}/{len(mask)}), total power {mw:.3f} mW ({dbm:.3f} dBm)")


def cmd_plan(args) -> int:
    cfg = _config(args)
    out = _require_out(cfg)
    users = _read_users(args.scenario)
    seed = cfg.seed if args.seed is not None or args.config else users.seed
    side = users.config.side_m if users.config else cfg.scenario.side_m
    if args.deployment:
        if not args.planner.startswith("robust-"):
            raise PlannerError("--deployment only combines with a robust-* planner")
        base = _read_deployment(args.deployment)
        R = base.radius_m
        d_th = cfg.planner.uli_bound_m
        if d_th is None:
            d_th = 3.0 * (users.config.uli_sigma_m if users.config else 0.0)
        dep = robustify(base, users.planning_positions, d_th, R, cfg.env,
                        cfg.planner.r_min_frac * R)
        dep.config = dict(base.config, robust_d_th=d_th)
    else:
        dep = plan(args.planner, users, side, cfg.env, cfg.planner, seed)
    if args.verify:
        errs = dep.check(cfg.env, users.planning_positions)
        if errs:
            for e in errs:
                print(f"invariant violated: {e}", file=sys.stderr)
            return EXIT_VERIFY
    atomic_write(out, dep.dumps())
    _print_summary(dep, users)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    out = _require_out(cfg)
    sw = cfg.sweep
    trials = args.trials if args.trials is not None else sw.trials
    if trials < 1:
        raise ConfigError("--trials must be at least 1")
    grid = expand_grid(cfg.scenario, sw.planners, sw.side_lengths_m, sw.processes)
    metrics, agg = run_sweep(grid, trials, cfg.seed, cfg.env, cfg.planner,
                             workers=cfg.workers, paired=sw.paired)
    timing = cfg.timing or args.timing
    atomic_write(out, to_csv(metrics, agg, timing=timing))
    print(f"{'planner':<16}{'L_s (m)':>10}{'process':>9}{'coverage':>10}{'stations':>10}"
          f"{'power (mW)':>13}")
    for row in agg:
        print(f"{row['planner']:<16}{row['ls_m']:>10.1f}{row['process']:>9}"
              f"{row['coverage_prob_mean']:>10.4f}{row['num_stations_mean']:>10.2f}"
              f"{row['total_power_mw_mean']:>13.2f}")
    print(f"{len(metrics)} trials -> {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    dep = _read_deployment(args.deployment)
    users = _read_users(args.scenario).planning_positions if args.scenario else None
    errs = dep.check(cfg.env, users)
    for e in errs:
        print(f"invariant violated: {e}")
    if errs:
        return EXIT_VERIFY
    print(f"{dep.k_used} stations: all invariants hold")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML or JSON run configuration")
    common.add_argument("--seed", type=int, metavar="U64", help="master seed")
    common.add_argument("--workers", type=int, metavar="N", help="worker processes")
    common.add_argument("--out", metavar="PATH", help="output file")

    p = argparse.ArgumentParser(prog="aerialbs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="draw a user scenario")
    g.set_defaults(func=cmd_generate)

    pl = sub.add_parser("plan", parents=[common], help="run one planner on a scenario")
    pl.add_argument("--scenario", required=True, metavar="PATH")
    pl.add_argument("--planner", required=True, choices=PLANNERS)
    pl.add_argument("--deployment", metavar="PATH",
                    help="robustify this existing deployment instead of planning anew")
    pl.add_argument("--verify", action="store_true", help="check invariants before writing")
    pl.set_defaults(func=cmd_plan)

    sw = sub.add_parser("sweep", parents=[common], help="Monte Carlo sweep to CSV")
    sw.add_argument("--trials", type=int)
    sw.add_argument("--timing", action="store_true",
                    help="record wall-clock times (output is then not byte-reproducible)")
    sw.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", parents=[common], help="check deployment invariants")
    v.add_argument("deployment", metavar="DEPLOYMENT")
    v.add_argument("--scenario", metavar="PATH")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None and args.seed < 0:
        parser.error("--seed must be nonnegative")
    if args.workers is not None and args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlannerError as exc:
        print(f"planner error: {exc}", file=sys.stderr)
        return EXIT_PLANNER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
