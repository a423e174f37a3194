"""YAML configuration schema and loaders.

All physical quantities carry explicit SI units in their key names
(``bandwidth_hz``, ``step_s``, ``pos_noise_radius_m``, ...) because unit
mistakes are the dominant failure mode in link-budget code.  Agent indices
in config files and CSV outputs are 1-based; internally everything is
0-based.
"""

from __future__ import annotations

from typing import Any, Optional

import numpy as np
import yaml

from formlink.channel import ChannelParams
from formlink.controller import ControlTopology, Gain
from formlink.rates import RatePlanQuery
from formlink.sim import ScenarioConfig

__all__ = [
    "ConfigError",
    "channel_from",
    "gain_grid_from",
    "load_config",
    "monte_carlo_from",
    "radius_table_from",
    "rate_plan_from",
    "scenario_from",
]

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Invalid or incomplete configuration."""


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a mapping at top level")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version} (expected {SCHEMA_VERSION})")
    return raw


def _section(raw: dict, name: str) -> dict:
    section = raw.get(name)
    if not isinstance(section, dict):
        raise ConfigError(f"missing or malformed config section '{name}'")
    return section


def _req(section: dict, key: str, where: str) -> Any:
    if key not in section:
        raise ConfigError(f"missing required key '{where}.{key}'")
    return section[key]


def _number(section: dict, key: str, where: str) -> float:
    value = _req(section, key, where)
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{where}.{key}' must be a number, got {value!r}") from exc


def channel_from(raw: dict) -> ChannelParams:
    sec = _section(raw, "channel")
    try:
        return ChannelParams(
            bandwidth_hz=_number(sec, "bandwidth_hz", "channel"),
            ref_distance_m=_number(sec, "ref_distance_m", "channel"),
            ref_gain=_number(sec, "ref_gain", "channel"),
            path_loss_exponent=_number(sec, "path_loss_exponent", "channel"),
            channel_noise_psd=_number(sec, "channel_noise_psd_w_per_hz", "channel"),
            jamming_noise_psd=_number(sec, "jamming_noise_psd_w_per_hz", "channel"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid channel parameters: {exc}") from exc


def radius_table_from(raw: dict) -> tuple[float, list, list]:
    sec = _section(raw, "radius_table")
    tx_power = _number(sec, "tx_power_w", "radius_table")
    bandwidths = [float(b) for b in _req(sec, "bandwidths_hz", "radius_table")]
    rates = [float(r) for r in _req(sec, "rates_bps", "radius_table")]
    if not bandwidths or not rates:
        raise ConfigError("radius_table needs at least one bandwidth and one rate")
    return tx_power, bandwidths, rates


def rate_plan_from(raw: dict) -> RatePlanQuery:
    sec = _section(raw, "rate_plan")
    try:
        return RatePlanQuery(
            packet_bits=int(_req(sec, "packet_bits", "rate_plan")),
            step_s=_number(sec, "step_s", "rate_plan"),
            delta_p_m=_number(sec, "delta_p_m", "rate_plan"),
            max_offset_m=_number(sec, "max_offset_m", "rate_plan"),
            self_pos_noise=_number(sec, "self_pos_noise_m", "rate_plan"),
            self_vel_noise=_number(sec, "self_vel_noise_mps", "rate_plan"),
            peer_pos_noise=_number(sec, "peer_pos_noise_m", "rate_plan"),
            peer_vel_noise=_number(sec, "peer_vel_noise_mps", "rate_plan"),
            tx_power_w=_number(sec, "tx_power_w", "rate_plan"),
            channel=channel_from(raw),
            tau_cap=int(sec.get("tau_cap", 100)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid rate_plan parameters: {exc}") from exc


def _topology_from(sec: dict, n_agents: int, where: str) -> ControlTopology:
    edges_raw = _req(sec, "edges", where)
    edges = []
    for entry in edges_raw:
        if len(entry) not in (2, 3):
            raise ConfigError(f"'{where}.edges' entries must be [i, j] or [i, j, weight]")
        i, j = int(entry[0]), int(entry[1])
        if not (1 <= i <= n_agents and 1 <= j <= n_agents) or i == j:
            raise ConfigError(f"edge [{i}, {j}] out of range for {n_agents} agents (1-based)")
        weight = float(entry[2]) if len(entry) == 3 else 1.0
        edges.append((i - 1, j - 1, weight))
    try:
        return ControlTopology.from_edges(n_agents, edges)
    except ValueError as exc:
        raise ConfigError(f"invalid topology: {exc}") from exc


def gain_grid_from(raw: dict) -> dict:
    sec = _section(raw, "gain_region")
    n_agents = int(_req(sec, "n_agents", "gain_region"))
    topology = _topology_from(_section(sec, "topology"), n_agents, "gain_region.topology")
    return {
        "step_s": _number(sec, "step_s", "gain_region"),
        "tau": int(_req(sec, "tau", "gain_region")),
        "alpha_range": (_number(sec, "alpha_min", "gain_region"), _number(sec, "alpha_max", "gain_region")),
        "beta_range": (_number(sec, "beta_min", "gain_region"), _number(sec, "beta_max", "gain_region")),
        "resolution": int(_req(sec, "resolution", "gain_region")),
        "topology": topology,
    }


def _array(sec: dict, key: str, where: str, shape: tuple) -> np.ndarray:
    value = np.asarray(_req(sec, key, where), dtype=float)
    if value.shape != shape:
        raise ConfigError(f"'{where}.{key}' must have shape {shape}, got {value.shape}")
    return value


def scenario_from(raw: dict) -> ScenarioConfig:
    sec = _section(raw, "scenario")
    n = int(_req(sec, "n_agents", "scenario"))
    dim = int(_req(sec, "spatial_dim", "scenario"))
    gain_sec = _section(sec, "gain")
    power_sec = sec.get("power", {})
    jamming = tuple(
        (float(_req(ev, "time_s", "scenario.jamming_events")), float(_req(ev, "multiplier", "scenario.jamming_events")))
        for ev in sec.get("jamming_events", [])
    )
    initial_edges = None
    if "initial_edges" in sec:
        initial_edges = np.zeros((n, n), dtype=bool)
        for i, j in sec["initial_edges"]:
            initial_edges[int(i) - 1, int(j) - 1] = True
    try:
        config = ScenarioConfig(
            n_agents=n,
            dim=dim,
            step_s=_number(sec, "step_s", "scenario"),
            horizon_steps=int(_req(sec, "horizon_steps", "scenario")),
            tau=int(_req(sec, "tau", "scenario")),
            packet_bits=int(_req(sec, "packet_bits", "scenario")),
            offsets=_array(sec, "formation_offsets_m", "scenario", (n, dim)),
            topology=_topology_from(_section(sec, "topology"), n, "scenario.topology"),
            gain=Gain(_number(gain_sec, "alpha", "scenario.gain"), _number(gain_sec, "beta", "scenario.gain")),
            pos_noise_radius=np.broadcast_to(
                np.asarray(_req(sec, "pos_noise_radius_m", "scenario"), dtype=float), (n,)
            ).copy(),
            vel_noise_radius=np.broadcast_to(
                np.asarray(_req(sec, "vel_noise_radius_mps", "scenario"), dtype=float), (n,)
            ).copy(),
            initial_positions=_array(sec, "initial_positions_m", "scenario", (n, dim)),
            initial_velocities=_array(sec, "initial_velocities_mps", "scenario", (n, dim)),
            channel=channel_from(raw),
            power_mode=str(power_sec.get("mode", "adaptive")),
            fixed_power_w=float(power_sec.get("fixed_power_w", 1.0)),
            epsilon_w=float(power_sec.get("epsilon_w", 1e-4)),
            jamming_events=jamming,
            delta_p_m=float(sec["delta_p_m"]) if "delta_p_m" in sec else None,
            delta_v_mps=float(sec["delta_v_mps"]) if "delta_v_mps" in sec else None,
            steady_fraction=float(sec.get("steady_fraction", 0.2)),
            initial_edges=initial_edges,
            require_rate_feasible=bool(sec.get("require_rate_feasible", False)),
        )
        config.validate()
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc
    return config


def monte_carlo_from(raw: dict) -> dict:
    """Sweep settings; the whole section may be absent when the CLI flags
    supply runs and window lengths."""
    sec = raw.get("monte_carlo") or {}
    if not isinstance(sec, dict):
        raise ConfigError("'monte_carlo' must be a mapping")
    agent = int(sec.get("agent", 1))
    if agent < 1:
        raise ConfigError("monte_carlo.agent is 1-based and must be >= 1")
    return {
        "runs": int(sec["runs"]) if "runs" in sec else None,
        "tau_values": [int(t) for t in sec["tau_values"]] if "tau_values" in sec else None,
        "agent": agent - 1,
    }
