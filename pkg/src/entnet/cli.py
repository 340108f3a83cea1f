"""Config-driven scenario runner emitting deterministic CSV.

Subcommands: sweep-loss, sweep-channels, compare-detectors, plan-network,
monthly-budget, optimize-chi, validate.  All rates are computed with the
squeezing parameter optimized per point.  Identical configs produce
byte-identical CSV (fixed 9-significant-digit formatting, no randomness);
sweep points are dispatched to a worker pool and reassembled in input order.

Exit codes: 0 success, 2 config error, 3 infeasible scenario.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import keyrate, netplan
from .config import ConfigError, InfeasibleError, ScenarioConfig, load_config, validate_report
from .detect import DetectorKind
from .keyrate import MultiplexMode, SkrResult
from .netplan import CapacityError, TopologyKind

_RATE_COLUMNS = (
    "loss_db",
    "n_channels",
    "mode",
    "chi_opt",
    "qber",
    "twofold_rate_cps",
    "skr_bps",
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    if value is None:
        return ""
    return str(value)


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _optimize_point(args) -> SkrResult:
    scenario, n_channels, mode, bounds, tolerance, grid_points = args
    return keyrate.optimize_chi(
        scenario,
        n_channels=n_channels,
        mode=mode,
        chi_bounds=bounds,
        tolerance=tolerance,
        grid_points=grid_points,
    )


def _run_points(points, jobs: int):
    """Evaluate optimization points, preserving input order."""
    if jobs <= 1 or len(points) <= 1:
        return [_optimize_point(p) for p in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_optimize_point, points))


def _optimizer_args(cfg: ScenarioConfig):
    opt = cfg.optimizer
    return (opt.chi_min, opt.chi_max), opt.tolerance, opt.grid_points


def _check_channel_capacity(cfg: ScenarioConfig, n_channels: int) -> None:
    capacity = cfg.channel_capacity()
    if n_channels > capacity:
        raise InfeasibleError(
            f"{n_channels} channels exceed the frequency-time capacity {capacity}"
        )


def _rate_row(loss_db: float, n_channels: int, mode: MultiplexMode, res: SkrResult):
    return (
        loss_db,
        n_channels,
        mode.value,
        res.chi_opt if res.chi_opt is not None else float("nan"),
        res.qber,
        res.twofold_rate_cps,
        res.skr_bps,
    )


def cmd_sweep_loss(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    _check_channel_capacity(cfg, cfg.n_channels)
    bounds, tol, grid = _optimizer_args(cfg)
    losses = cfg.sweep.loss_points()
    points = [
        (cfg.scenario_for_loss(loss), cfg.n_channels, cfg.mode, bounds, tol, grid)
        for loss in losses
    ]
    results = _run_points(points, jobs)
    rows = [
        _rate_row(loss, cfg.n_channels, cfg.mode, res)
        for loss, res in zip(losses, results)
    ]
    _write_csv(out, _RATE_COLUMNS, rows)
    positive = [r for r in results if r.skr_bps > 0]
    return [
        f"sweep-loss: {len(rows)} points ({losses[0]:g}..{losses[-1]:g} dB), "
        f"{len(positive)} with positive key rate -> {out}"
    ]


def cmd_sweep_channels(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    channels = cfg.sweep.channel_points()
    _check_channel_capacity(cfg, channels[-1])
    bounds, tol, grid = _optimizer_args(cfg)
    loss = cfg.operating_ground_loss_db()
    scenario = cfg.scenario_for_loss(loss)
    points = [(scenario, n, cfg.mode, bounds, tol, grid) for n in channels]
    results = _run_points(points, jobs)
    rows = [_rate_row(loss, n, cfg.mode, res) for n, res in zip(channels, results)]
    _write_csv(out, _RATE_COLUMNS, rows)
    return [
        f"sweep-channels: n = {channels[0]}..{channels[-1]} at {loss:g} dB ground loss, "
        f"mode {cfg.mode.value} -> {out}"
    ]


def cmd_compare_detectors(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    """Optimized rates with bucket vs number-resolving ground detectors."""
    _check_channel_capacity(cfg, cfg.n_channels)
    bounds, tol, grid = _optimizer_args(cfg)
    losses = cfg.sweep.loss_points()
    points = []
    for kind in (DetectorKind.BUCKET, DetectorKind.PNR):
        kind_cfg = dataclasses.replace(
            cfg, detector_ground=dataclasses.replace(cfg.detector_ground, kind=kind)
        )
        points.extend(
            (kind_cfg.scenario_for_loss(loss), cfg.n_channels, cfg.mode, bounds, tol, grid)
            for loss in losses
        )
    results = _run_points(points, jobs)
    header = ("loss_db", "detector_kind") + _RATE_COLUMNS[1:]
    rows = []
    for k, kind in enumerate((DetectorKind.BUCKET, DetectorKind.PNR)):
        for i, loss in enumerate(losses):
            res = results[k * len(losses) + i]
            rows.append((loss, kind.value) + _rate_row(loss, cfg.n_channels, cfg.mode, res)[1:])
    _write_csv(out, header, rows)
    return [f"compare-detectors: {len(losses)} loss points x 2 detector kinds -> {out}"]


def cmd_optimize_chi(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    _check_channel_capacity(cfg, cfg.n_channels)
    bounds, tol, grid = _optimizer_args(cfg)
    loss = cfg.operating_ground_loss_db()
    res = _optimize_point((cfg.scenario_for_loss(loss), cfg.n_channels, cfg.mode, bounds, tol, grid))
    _write_csv(out, _RATE_COLUMNS, [_rate_row(loss, cfg.n_channels, cfg.mode, res)])
    return [
        f"optimize-chi: chi_opt = {res.chi_opt:.6g}, skr = {res.skr_bps:.6g} bits/s, "
        f"qber = {res.qber:.4g} -> {out}"
    ]


def cmd_plan_network(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    """Emit the wavelength-pair plan for the configured topology.

    Both topologies share the network's channel budget of C(n_users, 2)
    wavelength pairs; the satellite pass redistributes them so that every
    user holds at least one and surplus channels go to the preferred
    (lowest-indexed) users.
    """
    n_users = cfg.network.n_users
    needed = n_users * (n_users - 1) // 2
    capacity = cfg.channel_capacity()
    if needed > capacity:
        raise InfeasibleError(
            f"{n_users} users need {needed} channels in the {cfg.topology.value} "
            f"topology; capacity is {capacity}"
        )
    topology = netplan.allocate(cfg.topology, n_users, needed)
    plan = netplan.build_channel_plan(
        topology, cfg.source.pump_center_nm, cfg.network.itu_start_channel
    )
    header = ("channel_index", "signal_nm", "idler_nm", "itu_channel", "time_slot",
              "user_a", "user_b")
    rows = [
        (p.index, p.signal_nm, p.idler_nm, p.itu_channel, p.time_slot, p.user_a, p.user_b)
        for p in plan
    ]
    _write_csv(out, header, rows)
    return [
        f"plan-network: {cfg.topology.value} topology, {n_users} users, "
        f"{len(plan)} channels (capacity {capacity}) -> {out}"
    ]


def cmd_monthly_budget(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    """Monthly key yield for the ground-pair and satellite configurations.

    The ground row runs both arms over fibre at the configured lengths and
    attenuations.  The satellite row evaluates one frequency-time channel at
    the satellite link budget and scales by the pass time and the full
    channel plan; a preferred user's share of those channels is also
    reported.
    """
    bounds, tol, grid = _optimizer_args(cfg)
    capacity = cfg.channel_capacity()
    n_users = cfg.network.n_users
    if n_users * (n_users - 1) // 2 > capacity:
        raise InfeasibleError(
            f"{n_users} users need {n_users * (n_users - 1) // 2} channels; "
            f"capacity is {capacity}"
        )
    idler_db = cfg.default_ground_loss_db()

    ground_cfg = dataclasses.replace(cfg, topology=TopologyKind.GROUND)
    ground_res = _optimize_point(
        (ground_cfg.scenario_for_loss(idler_db), 1, MultiplexMode.TIME_FREQUENCY,
         bounds, tol, grid)
    )
    sat_cfg = dataclasses.replace(cfg, topology=TopologyKind.SATELLITE_PASS)
    sat_res = _optimize_point(
        (sat_cfg.scenario_for_loss(idler_db), 1, MultiplexMode.TIME_FREQUENCY,
         bounds, tol, grid)
    )
    yields = netplan.monthly_key(
        skr_ground_pair_bps=ground_res.skr_bps,
        skr_satellite_channel_bps=sat_res.skr_bps,
        n_channels=capacity,
        n_users=n_users,
        assumptions=cfg.monthly,
    )
    header = ("configuration", "loss_db", "chi_opt", "qber", "skr_bps",
              "seconds_active", "n_channels", "total_bits", "per_user_bits")
    sat_seconds = cfg.monthly.passes * cfg.monthly.pass_duration_s
    ground_seconds = cfg.monthly.seconds_per_month * cfg.monthly.duty
    ground_loss = netplan.link_loss_db(cfg.link, TopologyKind.GROUND)
    sat_loss = netplan.link_loss_db(cfg.link, TopologyKind.SATELLITE_PASS)
    rows = [
        ("ground_pair", ground_loss, ground_res.chi_opt, ground_res.qber,
         ground_res.skr_bps, ground_seconds, 1, yields.ground_pair_bits,
         yields.ground_pair_bits),
        ("satellite", sat_loss, sat_res.chi_opt, sat_res.qber, sat_res.skr_bps,
         sat_seconds, capacity, yields.satellite_network_bits,
         yields.satellite_per_user_bits),
    ]
    _write_csv(out, header, rows)
    return [
        f"monthly-budget: ground pair {yields.ground_pair_bits:.3g} bits/month, "
        f"satellite network {yields.satellite_network_bits:.3g} bits/month "
        f"({yields.channels_per_preferred_user} channels per preferred user, "
        f"{yields.satellite_per_user_bits:.3g} bits) -> {out}",
    ]


def cmd_validate(cfg: ScenarioConfig, out: str, jobs: int) -> list[str]:
    lines, problems = validate_report(cfg)
    lines.append("[result]")
    if problems:
        lines.append(f"  status = infeasible ({len(problems)} problem(s))")
        lines.extend(f"  problem: {p}" for p in problems)
    else:
        lines.append("  status = valid")
    return lines


_COMMANDS = {
    "sweep-loss": cmd_sweep_loss,
    "sweep-channels": cmd_sweep_channels,
    "compare-detectors": cmd_compare_detectors,
    "plan-network": cmd_plan_network,
    "monthly-budget": cmd_monthly_budget,
    "optimize-chi": cmd_optimize_chi,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entnet",
        description="Entanglement-distribution QKD network simulator and planner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0] if fn.__doc__ else None)
        p.add_argument("--config", required=True, help="scenario INI file")
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="worker processes for sweep points")
        p.add_argument("--dim", type=int, default=None, help="Fock cutoff override")
        p.add_argument("--mode", choices=[m.value for m in MultiplexMode], default=None,
                       help="multiplexing mode override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.dim is not None:
            cfg = dataclasses.replace(cfg, dim=args.dim)
        if args.mode is not None:
            cfg = dataclasses.replace(cfg, mode=MultiplexMode(args.mode))
        out = args.out if args.out is not None else cfg.out_path
        summary = _COMMANDS[args.command](cfg, out, max(args.jobs, 1))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleError, CapacityError) as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        return 3
    for line in summary:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
