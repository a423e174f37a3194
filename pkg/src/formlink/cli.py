"""Command-line front end.

Subcommands mirror the analysis surfaces: ``radius`` (communication-radius
table), ``rates`` (feasible data rates), ``gains`` (feasible-gain grid),
``simulate`` (one closed-loop run), ``montecarlo`` (seeded rate sweep).
Every command emits CSV files plus a JSON manifest with SHA-256 checksums;
reruns with identical config and seeds are byte-identical.

Exit codes: 0 success, 2 invalid config, 3 empty feasible set,
4 runtime invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from formlink import __version__
from formlink.channel import comm_radius
from formlink.config import (
    ConfigError,
    channel_from,
    gain_grid_from,
    load_config,
    monte_carlo_from,
    radius_table_from,
    rate_plan_from,
    scenario_from,
)
from formlink.controller import gain_region_grid, laplacian_eigs
from formlink.rates import feasible_rates, psi1, psi2
from formlink.sim import monte_carlo, run_scenario

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_EMPTY_SET = 3
EXIT_INVARIANT = 4

_AXES = ("x", "y", "z")


def _fmt(value) -> str:
    """Decimal text with 12 significant digits (supports 1e-9 checks downstream)."""
    return format(float(value), ".12g")


def _write_csv(path: Path, header: list, rows) -> int:
    lines = [",".join(header)]
    count = 0
    for row in rows:
        lines.append(",".join(row))
        count += 1
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return count


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class _Manifest:
    """Record of one CLI run; reruns against it must be byte-identical."""

    def __init__(self, command: str, config_path: str, seeds: list):
        self.data = {
            "tool": f"formlink {__version__}",
            "schema_version": 1,
            "command": command,
            "config_path": str(config_path),
            "config_sha256": _sha256(Path(config_path)),
            "seeds": seeds,
            "outputs": [],
        }

    def add(self, name: str, path: Path, rows: int):
        self.data["outputs"].append(
            {"name": name, "path": path.name, "sha256": _sha256(path), "rows": rows}
        )

    def write(self, out_dir: Path):
        path = out_dir / "run_manifest.json"
        path.write_text(json.dumps(self.data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_seed_file(path: str) -> list:
    seeds = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            seeds.append(int(line))
    if not seeds:
        raise ConfigError(f"seed file {path} contains no seeds")
    return seeds


def cmd_radius(args, raw: dict) -> int:
    channel = channel_from(raw)
    tx_power, bandwidths, rates = radius_table_from(raw)
    out = _out_dir(args)
    rows = []
    for bw in bandwidths:
        chan = dataclasses.replace(channel, bandwidth_hz=bw)
        for rate_bps in rates:
            rows.append([_fmt(bw), _fmt(rate_bps), _fmt(comm_radius(tx_power, rate_bps, chan))])
    path = out / "radius.csv"
    count = _write_csv(path, ["bandwidth_hz", "rate_bps", "radius_m"], rows)
    manifest = _Manifest("radius", args.config, [])
    manifest.add("radius", path, count)
    manifest.write(out)
    return EXIT_OK


def cmd_rates(args, raw: dict) -> int:
    query = rate_plan_from(raw)
    out = _out_dir(args)
    feasible = feasible_rates(query)
    rows = [
        [str(tau), _fmt(rate_bps), _fmt(psi1(tau, query)), _fmt(psi2(tau, query))]
        for tau, rate_bps in feasible
    ]
    path = out / "rates.csv"
    count = _write_csv(path, ["tau", "rate_bps", "psi1", "psi2"], rows)
    manifest = _Manifest("rates", args.config, [])
    manifest.add("rates", path, count)
    manifest.write(out)
    if not feasible:
        print("no feasible data rate under the given accuracy bound", file=sys.stderr)
        return EXIT_EMPTY_SET
    return EXIT_OK


def cmd_gains(args, raw: dict) -> int:
    grid = gain_grid_from(raw)
    eigs = laplacian_eigs(grid["topology"])
    if not eigs[1] > 0:
        raise ConfigError("gain_region.topology must be connected")
    region = gain_region_grid(
        [float(v) for v in eigs[1:]],
        grid["step_s"],
        grid["tau"],
        grid["alpha_range"],
        grid["beta_range"],
        grid["resolution"],
    )
    out = _out_dir(args)
    rows = []
    for i, alpha in enumerate(region.alphas):
        for j, beta in enumerate(region.betas):
            rows.append([_fmt(alpha), _fmt(beta), str(int(region.mask[i, j]))])
    path = out / "gains.csv"
    count = _write_csv(path, ["alpha", "beta", "feasible"], rows)
    manifest = _Manifest("gains", args.config, [])
    manifest.add("gains", path, count)
    manifest.write(out)
    return EXIT_OK


def _write_trace(out: Path, trace, manifest: _Manifest) -> None:
    dim = trace.config.dim
    pos_cols = [f"pos_{_AXES[d]}_m" for d in range(dim)]
    vel_cols = [f"vel_{_AXES[d]}_mps" for d in range(dim)]

    state_rows = []
    for k in range(trace.positions.shape[0]):
        for a in range(trace.config.n_agents):
            state_rows.append(
                [str(k), _fmt(trace.times[k]), str(a + 1)]
                + [_fmt(v) for v in trace.positions[k, a]]
                + [_fmt(v) for v in trace.velocities[k, a]]
            )
    path = out / "states.csv"
    count = _write_csv(path, ["step", "time_s", "agent"] + pos_cols + vel_cols, state_rows)
    manifest.add("states", path, count)

    error_rows = [
        [str(k), _fmt(trace.times[k]), _fmt(trace.max_pos_error[k]), _fmt(trace.max_vel_error[k])]
        for k in range(trace.positions.shape[0])
    ]
    path = out / "errors.csv"
    count = _write_csv(path, ["step", "time_s", "max_pos_error_m", "max_vel_error_mps"], error_rows)
    manifest.add("errors", path, count)

    tau = trace.config.tau
    power_rows = []
    for m in range(trace.powers.shape[0]):
        k = m * tau
        for a in range(trace.config.n_agents):
            power_rows.append(
                [str(m), str(k), _fmt(trace.times[k]), str(a + 1),
                 _fmt(trace.powers[m, a]), _fmt(trace.comm_radii[m, a])]
            )
    path = out / "powers.csv"
    count = _write_csv(
        path, ["window", "step", "time_s", "agent", "power_w", "comm_radius_m"], power_rows
    )
    manifest.add("powers", path, count)

    edge_rows = []
    for m in range(trace.edges.shape[0]):
        for i, j in np.argwhere(trace.edges[m]):
            edge_rows.append([str(m), str(i + 1), str(j + 1)])
    path = out / "edges.csv"
    count = _write_csv(path, ["window", "from_agent", "to_agent"], edge_rows)
    manifest.add("edges", path, count)


def cmd_simulate(args, raw: dict) -> int:
    config = scenario_from(raw)
    out = _out_dir(args)
    trace = run_scenario(config, args.seed)
    manifest = _Manifest("simulate", args.config, [args.seed])
    _write_trace(out, trace, manifest)
    manifest.write(out)
    print(
        f"horizon {trace.n_steps} steps, steady-state error "
        f"{trace.steady_state_error():.3f} m, decode failures on control links: "
        f"{len(trace.decode_failures)}"
    )
    if trace.self_containment_violations:
        print(
            f"invariant violation: {trace.self_containment_violations} realized positions "
            "escaped their predicted ranges",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    if config.power_mode == "adaptive" and trace.decode_failures:
        print(
            "invariant violation: decode failures on control links despite adaptive power",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_montecarlo(args, raw: dict) -> int:
    config = scenario_from(raw)
    mc = monte_carlo_from(raw)
    runs = args.runs if args.runs is not None else mc["runs"]
    tau_values = (
        [int(t) for t in args.tau_sweep.split(",")] if args.tau_sweep else mc["tau_values"]
    )
    if runs is None or tau_values is None:
        raise ConfigError(
            "monte_carlo runs and tau_values must come from the config section or --runs/--tau-sweep"
        )
    seeds = _read_seed_file(args.seeds)[:runs] if args.seeds else [args.seed + r for r in range(runs)]
    if len(seeds) < runs:
        raise ConfigError(f"seed file provides {len(seeds)} seeds but {runs} runs requested")
    started = time.perf_counter()
    rows = monte_carlo(config, runs, tau_values, seeds=seeds, agent=mc["agent"])
    elapsed = time.perf_counter() - started
    out = _out_dir(args)
    csv_rows = [
        [str(r.tau), _fmt(r.rate_bps), str(r.n_runs), _fmt(r.mean_error_m), _fmt(r.mean_power_w)]
        for r in rows
    ]
    path = out / "montecarlo.csv"
    count = _write_csv(path, ["tau", "rate_bps", "n_runs", "mean_error_m", "mean_power_w"], csv_rows)
    manifest = _Manifest("montecarlo", args.config, seeds)
    manifest.add("montecarlo", path, count)
    manifest.write(out)
    print(f"{len(rows)} rate points x {runs} runs in {elapsed:.1f} s")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formlink",
        description="Communication-aware formation control toolkit",
    )
    parser.add_argument("--version", action="version", version=f"formlink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="YAML configuration file")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")

    p = sub.add_parser("radius", help="communication-radius table over bandwidth and rate")
    common(p)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("rates", help="feasible data rates under the accuracy bound")
    common(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("gains", help="feasible-gain grid for the control topology")
    common(p)
    p.set_defaults(func=cmd_gains)

    p = sub.add_parser("simulate", help="run one closed-loop scenario")
    common(p)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("montecarlo", help="seeded sweep of the data rate")
    common(p)
    p.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    p.add_argument("--seeds", help="file with one seed per line (overrides --seed)")
    p.add_argument("--runs", type=int, help="runs per rate (overrides config)")
    p.add_argument("--tau-sweep", help="comma-separated window lengths (overrides config)")
    p.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = load_config(args.config)
        return args.func(args, raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
