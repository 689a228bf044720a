"""Command-line front end.

Subcommands:
  rate-curve    rate records over a (distance, depth, mu, g) grid
  optimize      best (g, mu) per (distance, depth), JSON report
  memory-curve  rate records swept over memory coherence times
  capacity      benchmark capacities vs distance
  montecarlo    stochastic heralding audit, JSON report

Every command takes --config FILE (JSON) plus flag overrides, and writes
CSV (default for grids) or JSON (default for reports) to --out. Re-running
a command with identical inputs produces byte-identical output. Exit code:
0 on success, 1 on configuration errors, 2 when one or more grid points
errored (the emitted file still holds the per-point diagnostics).
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict

from . import plotting
from .config import ConfigError, ScenarioConfig, load_config
from .errors import DomainError
from .links import LinkSpec, basic_link_cm, nla_equivalent, transmittance_from_length
from .memory import MemoryParams, nla_success_probability
from .montecarlo import McConfig, mc_rate, simulate_heralding
from .output import (
    CAPACITY_COLUMNS,
    COLUMNS,
    read_csv,  # noqa: F401  (re-exported for consumers of emitted files)
    records_to_rows,
    render_csv,
    write_csv,
    write_json,
)
from .rates import plob_lossy, repeater_capacity
from .sweep import SweepGrid, evaluate_point, optimize_point, run_sweep
from .sweep import _error_record


def _eval_task(task):
    L, n, mu, g, xi, mem, alpha, c_speed = task
    try:
        return evaluate_point(L, n, mu, g, xi, mem, alpha, c_speed)
    except ValueError as exc:
        return _error_record(L, n, mu, g, exc)


def _sweep_records(cfg: ScenarioConfig, mem: MemoryParams):
    grid = SweepGrid(
        distances=tuple(cfg.distances),
        depths=tuple(cfg.depths),
        gains=tuple(cfg.gains),
        mus=tuple(cfg.mus),
        xi=cfg.xi,
        alpha=cfg.alpha,
        mem=mem,
        c_speed=cfg.c_speed,
    )
    if cfg.threads <= 1:
        return run_sweep(grid)
    tasks = [
        (L, n, mu, g, cfg.xi, mem, cfg.alpha, cfg.c_speed)
        for L in cfg.distances
        for n in cfg.depths
        for mu in cfg.mus
        for g in cfg.gains
    ]
    chunk = max(1, len(tasks) // (cfg.threads * 4))
    with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
        return list(ex.map(_eval_task, tasks, chunksize=chunk))


def _resolve(cfg: ScenarioConfig, command: str) -> tuple[str, str]:
    """(format, out path); reports default to json, grids to csv."""
    default_fmt = "json" if command in ("optimize", "montecarlo") else "csv"
    fmt = cfg.format or default_fmt
    if command in ("optimize", "montecarlo") and fmt == "csv":
        raise ConfigError(f"{command} emits a nested report; use --format json")
    out = cfg.out or f"{command.replace('-', '_')}.{fmt}"
    return fmt, out


def _finish_records(records, fmt, out, cfg, plot, figure_fn) -> int:
    if fmt == "csv":
        write_csv(out, records, cfg.echo())
    else:
        write_json(out, {"config": cfg.echo(), "records": records_to_rows(records)})
    if plot:
        figure_fn(records, _png_path(out))
    n_err = sum(1 for r in records if r.error is not None)
    print(f"wrote {len(records)} records to {out}" + (f" ({n_err} errored)" if n_err else ""))
    if n_err:
        print(f"{n_err} of {len(records)} points errored", file=sys.stderr)
        return 2
    return 0


def _png_path(out: str) -> str:
    base = out.rsplit(".", 1)[0] if "." in out else out
    return base + ".png"


def cmd_rate_curve(cfg: ScenarioConfig, plot: bool) -> int:
    mem = MemoryParams(cfg.tau_cs[0], cfg.xi_qm)
    fmt, out = _resolve(cfg, "rate-curve")
    records = _sweep_records(cfg, mem)
    return _finish_records(records, fmt, out, cfg, plot, plotting.rate_curve_figure)


def cmd_memory_curve(cfg: ScenarioConfig, plot: bool) -> int:
    fmt, out = _resolve(cfg, "memory-curve")
    records = []
    for tau in cfg.tau_cs:
        records.extend(_sweep_records(cfg, MemoryParams(tau, cfg.xi_qm)))
    return _finish_records(records, fmt, out, cfg, plot, plotting.memory_curve_figure)


def cmd_capacity(cfg: ScenarioConfig, plot: bool) -> int:
    fmt, out = _resolve(cfg, "capacity")
    rows = []
    for L in cfg.distances:
        for n in cfg.depths:
            N = 2**n
            row = {"L_km": L, "n": n, "N": N, "eta_total": None,
                   "plob": None, "repeater_cap": None, "error": None}
            try:
                eta = transmittance_from_length(L, cfg.alpha)
                row["eta_total"] = eta
                row["plob"] = plob_lossy(eta)
                row["repeater_cap"] = repeater_capacity(eta, N)
            except ValueError as exc:
                row["error"] = str(exc)
            rows.append(row)
    if fmt == "csv":
        text = render_csv(rows, CAPACITY_COLUMNS, cfg.echo())
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        write_json(out, {"config": cfg.echo(), "rows": rows})
    if plot:
        plotting.capacity_figure(rows, _png_path(out))
    n_err = sum(1 for r in rows if r["error"] is not None)
    print(f"wrote {len(rows)} rows to {out}")
    if n_err:
        print(f"{n_err} of {len(rows)} points errored", file=sys.stderr)
        return 2
    return 0


def cmd_optimize(cfg: ScenarioConfig, plot: bool) -> int:
    fmt, out = _resolve(cfg, "optimize")
    mem = MemoryParams(cfg.tau_cs[0], cfg.xi_qm)
    results = []
    for L in cfg.distances:
        for n in cfg.depths:
            res = optimize_point(
                L,
                n,
                xi=cfg.xi,
                mem=mem,
                g_bounds=(cfg.g_bounds[0], cfg.g_bounds[1]),
                mu_bounds=(cfg.mu_bounds[0], cfg.mu_bounds[1]),
                alpha=cfg.alpha,
                c_speed=cfg.c_speed,
                objective=cfg.objective,
            )
            results.append(
                {
                    "L_km": L,
                    "n": n,
                    "found": res.found,
                    "objective": res.objective,
                    "g_opt": res.g_opt,
                    "mu_opt": res.mu_opt,
                    "rate_opt": res.rate_opt,
                    "lambda_g": res.lambda_g,
                    "coarse_rate": res.coarse_rate,
                    "g_max_by_mu": {f"{k:g}": v for k, v in res.g_max_by_mu.items()},
                    "record": asdict(res.record) if res.record else None,
                    "evaluations": list(res.evaluations),
                }
            )
    write_json(out, {"config": cfg.echo(), "results": results})
    if plot:
        plotting.optimize_figure(results, _png_path(out))
    found = sum(1 for r in results if r["found"])
    print(f"wrote {len(results)} optimization reports to {out} ({found} found)")
    return 0


def cmd_montecarlo(cfg: ScenarioConfig, plot: bool) -> int:
    fmt, out = _resolve(cfg, "montecarlo")
    L, n = cfg.distances[0], cfg.depths[0]
    g, mu = cfg.gains[0], cfg.mus[0]
    N = 2**n
    L0 = L / N
    try:
        eta0 = transmittance_from_length(L0, cfg.alpha)
        eq = nla_equivalent(LinkSpec(mu, eta0, cfg.xi, g, L0=L0))
        link = basic_link_cm(eq)
        p = nla_success_probability(g)
        mem = MemoryParams(cfg.tau_cs[0], cfg.xi_qm)
        mc_cfg = McConfig(
            n_links=N,
            p_succ=p,
            round_time=2.0 * L0 / cfg.c_speed,
            trials=cfg.trials,
            seed=cfg.seed,
        )
        stats = mc_rate(mc_cfg, link, mem, n)
    except ValueError as exc:
        print(f"montecarlo point failed: {exc}", file=sys.stderr)
        return 2
    payload = {
        "config": cfg.echo(),
        "point": {"L_km": L, "n": n, "N": N, "mu": mu, "g": g,
                  "lambda_g": eq.lambda_g, "p_succ": p,
                  "round_time_s": mc_cfg.round_time},
        "herald": {
            "completion_mean_s": stats.completion_mean_s,
            "completion_expected_s": stats.completion_expected_s,
            "completion_stderr_s": stats.completion_stderr_s,
        },
        "rate": {
            "mean": stats.rate_mean,
            "median": stats.rate_median,
            "p5": stats.rate_p5,
            "p95": stats.rate_p95,
            "uniform_model": stats.uniform_rate,
            "beats_uniform": stats.beats_uniform,
        },
        "trials": stats.trials,
        "seed": stats.seed,
    }
    write_json(out, payload)
    if plot:
        herald = simulate_heralding(mc_cfg)
        plotting.montecarlo_figure(herald.storage_s, _png_path(out))
    print(f"wrote montecarlo report to {out}")
    return 0


_COMMANDS = {
    "rate-curve": cmd_rate_curve,
    "optimize": cmd_optimize,
    "memory-curve": cmd_memory_curve,
    "capacity": cmd_capacity,
    "montecarlo": cmd_montecarlo,
}

# flag dest -> config key
_OVERRIDE_KEYS = {
    "distance": "distances",
    "depth": "depths",
    "gain": "gains",
    "mu": "mus",
    "tau_c": "tau_cs",
    "xi": "xi",
    "xi_qm": "xi_qm",
    "alpha": "alpha",
    "c_speed": "c_speed",
    "seed": "seed",
    "threads": "threads",
    "trials": "trials",
    "out": "out",
    "format": "format",
    "objective": "objective",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config file")
    common.add_argument("--out", metavar="PATH", help="output file path")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--c-speed", dest="c_speed", type=float,
                        help="signal speed, km/s")
    common.add_argument("--distance", help="km grid: '50,100' or 'lin:10:500:50'")
    common.add_argument("--depth", help="depth grid, e.g. '1,2'")
    common.add_argument("--gain", help="g grid: '1,10' or 'geom:1:50:60'")
    common.add_argument("--mu", help="variance grid")
    common.add_argument("--xi", type=float, help="channel excess noise, snu")
    common.add_argument("--tau-c", dest="tau_c",
                        help="coherence time grid, seconds or 'inf'")
    common.add_argument("--xi-qm", dest="xi_qm", type=float,
                        help="memory excess noise, snu")
    common.add_argument("--alpha", type=float, help="loss rate, dB/km")
    common.add_argument("--trials", type=int, help="montecarlo trials")
    common.add_argument("--objective", choices=("rate_weighted", "rci"))
    common.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to the output")

    parser = argparse.ArgumentParser(
        prog="cvrepeater",
        description="Rate simulator for amplifier-assisted CV repeater chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rate-curve", parents=[common],
                   help="sweep a parameter grid and emit rate records")
    sub.add_parser("optimize", parents=[common],
                   help="optimize (g, mu) per (distance, depth)")
    sub.add_parser("memory-curve", parents=[common],
                   help="sweep memory coherence times")
    sub.add_parser("capacity", parents=[common],
                   help="emit benchmark capacities vs distance")
    sub.add_parser("montecarlo", parents=[common],
                   help="stochastic heralding-time audit")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, dest)
        for dest, key in _OVERRIDE_KEYS.items()
        if getattr(args, dest, None) is not None
    }
    try:
        cfg = load_config(args.config, overrides)
        return _COMMANDS[args.command](cfg, args.plot)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
