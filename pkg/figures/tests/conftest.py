"""Synthetic, schema-conformant CSV fixtures."""

import json

import pytest


def write(path, header, rows):
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def sample_csvs(tmp_path):
    paths = {}
    paths["radius"] = write(
        tmp_path / "radius.csv",
        ["bandwidth_hz", "rate_bps", "radius_m"],
        [[1e3, 5120, 6.71], [1e3, 10240, 1.12], [1e6, 5120, 20.69], [1e6, 10240, 14.62]],
    )
    paths["rates"] = write(
        tmp_path / "rates.csv",
        ["tau", "rate_bps", "psi1", "psi2"],
        [[2, 5120, 2.617, 0.925]],
    )
    states = []
    for k in range(5):
        for agent in (1, 2):
            states.append([k, k * 0.05, agent, k * 0.1 + agent, agent * 2.0, 0.1, 0.0])
    paths["states"] = write(
        tmp_path / "states.csv",
        ["step", "time_s", "agent", "pos_x_m", "pos_y_m", "vel_x_mps", "vel_y_mps"],
        states,
    )
    powers = []
    for window in range(2):
        for agent in (1, 2):
            powers.append([window, window * 2, window * 0.1, agent, 1.0 + 0.1 * agent, 20.0])
    paths["powers"] = write(
        tmp_path / "powers.csv",
        ["window", "step", "time_s", "agent", "power_w", "comm_radius_m"],
        powers,
    )
    paths["errors"] = write(
        tmp_path / "errors.csv",
        ["step", "time_s", "max_pos_error_m", "max_vel_error_mps"],
        [[k, k * 0.05, 5.0 / (k + 1), 1.0 / (k + 1)] for k in range(10)],
    )
    paths["montecarlo"] = write(
        tmp_path / "montecarlo.csv",
        ["tau", "rate_bps", "n_runs", "mean_error_m", "mean_power_w"],
        [[2, 5120, 5, 1.8, 0.99], [3, 3413.3, 5, 2.0, 0.70], [4, 2560, 5, 2.2, 0.55]],
    )
    return paths


def make_spec(tmp_path, kind, inputs, output="figure.png", **extra):
    payload = {
        "kind": kind,
        "inputs": {name: str(path) for name, path in inputs.items()},
        "output": output,
        **extra,
    }
    path = tmp_path / f"{kind}_{output.replace('.png', '')}.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path
