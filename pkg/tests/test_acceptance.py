"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; the pinned tolerances and budgets live next to each check.
"""

import csv
import time

import numpy as np
import pytest

from formlink.balls import Ball, minkowski_sum
from formlink.channel import capacity, comm_radius, d2_sign, optimal_tau
from formlink.cli import main
from formlink.config import load_config, scenario_from
from formlink.controller import Gain, closed_loop_block, jury_phis, n_matrix, n_matrix_sum
from formlink.power import transmit_power
from formlink.sim import monte_carlo, run_scenario

from conftest import CONFIG_DIR

SEEDS = list(range(10))


def _report(name: str, ok: bool, detail: str = ""):
    print(f"\n[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def six_uav_traces():
    """Ten seeded closed-loop runs of the six-UAV scenario, with wall time."""
    config = scenario_from(load_config(CONFIG_DIR / "six_uav.yaml"))
    started = time.perf_counter()
    traces = [run_scenario(config, seed) for seed in SEEDS]
    elapsed = time.perf_counter() - started
    return traces, elapsed


def test_radius_table_reproduction(tmp_path):
    expected = {
        (1e3, 5120): 6.71, (1e3, 10240): 1.12,
        (1e4, 5120): 18.90, (1e4, 10240): 12.14,
        (1e5, 5120): 20.53, (1e5, 10240): 14.39,
        (1e6, 5120): 20.69, (1e6, 10240): 14.62,
    }
    out = tmp_path / "radius"
    started = time.perf_counter()
    code = main(["radius", "--config", str(CONFIG_DIR / "table1.yaml"), "--out", str(out)])
    elapsed = time.perf_counter() - started
    with open(out / "radius.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    deviations = [
        abs(float(r["radius_m"]) - expected[(float(r["bandwidth_hz"]), float(r["rate_bps"]))])
        for r in rows
    ]
    ok = code == 0 and len(rows) == 8 and max(deviations) <= 0.01 and elapsed < 1.0
    _report(
        "radius table (8 entries, +-0.01 m, < 1 s)",
        ok,
        f"max deviation {max(deviations):.4f} m in {elapsed:.2f} s",
    )


def test_feasible_rate_set(tmp_path):
    out = tmp_path / "rates"
    started = time.perf_counter()
    code = main(["rates", "--config", str(CONFIG_DIR / "rate_plan.yaml"), "--out", str(out)])
    elapsed = time.perf_counter() - started
    with open(out / "rates.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    ok = (
        code == 0
        and len(rows) == 1
        and rows[0]["tau"] == "2"
        and float(rows[0]["rate_bps"]) == 5120.0
        and elapsed < 1.0
    )
    _report(
        "feasible rate set == {(tau=2, 5120 bps)} (< 1 s)",
        ok,
        f"rows {[(r['tau'], r['rate_bps']) for r in rows]} in {elapsed:.2f} s",
    )


def test_jury_matches_spectral_radius_oracle():
    rng = np.random.default_rng(2024)
    checked = 0
    disagreements = 0
    started = time.perf_counter()
    while checked < 1000:
        lam = rng.uniform(1e-3, 10.0)
        gain = Gain(rng.uniform(1e-3, 5.0), rng.uniform(1e-3, 5.0))
        h = float(rng.choice([0.01, 0.02, 0.05, 0.1]))
        tau = int(rng.integers(1, 6))
        phis = jury_phis(lam, gain, h, tau)
        rho = float(np.abs(np.linalg.eigvals(closed_loop_block(lam, gain, h, tau))).max())
        if min(abs(v) for v in phis) < 1e-9 or abs(rho - 1.0) < 1e-9:
            continue  # boundary band excluded
        checked += 1
        if (min(phis) > 0.0) != (rho < 1.0):
            disagreements += 1
    elapsed = time.perf_counter() - started
    ok = disagreements == 0 and elapsed < 10.0
    _report(
        "Jury test vs spectral-radius oracle (1000 tuples, < 10 s)",
        ok,
        f"{checked} tuples, {disagreements} disagreements in {elapsed:.2f} s",
    )


def test_accumulated_block_closed_form():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        lam = rng.uniform(0.05, 10.0)
        gain = Gain(rng.uniform(0.05, 5.0), rng.uniform(0.05, 5.0))
        h = rng.uniform(0.005, 0.2)
        for s in range(1, 21):
            closed = n_matrix(s, lam, gain, h)
            summed = n_matrix_sum(s, lam, gain, h)
            worst = max(worst, float(np.abs(closed - summed).max() / np.abs(summed).max()))
    ok = worst <= 1e-9
    _report(
        "window-feedback block closed form vs sum (s in 1..20, 100 draws)",
        ok,
        f"worst relative error {worst:.2e}",
    )


def test_guaranteed_radius_concavity(channel):
    concave = all(d2_sign(tau, 512, 0.05, channel) < 0.0 for tau in range(1, 101))
    result = optimal_tau(1.0, 512, 0.05, channel, 0.5, 0.5, tau_max=100)
    second_diff = np.diff(result.gcr, 2)
    peak = result.tau - 1
    rising = bool(np.all(np.diff(result.gcr[: peak + 1]) > 0))
    falling = bool(np.all(np.diff(result.gcr[peak:]) < 0))
    ok = (
        concave
        and bool(np.all(second_diff <= 1e-12))
        and result.interior
        and rising
        and falling
    )
    _report(
        "guaranteed-radius concavity with single interior peak",
        ok,
        f"peak at window length {result.tau}, max second difference {second_diff.max():.2e}",
    )


def test_six_uav_closed_loop(six_uav_traces):
    traces, elapsed = six_uav_traces
    errors = [t.steady_state_error() for t in traces]
    failures = sum(len(t.decode_failures) for t in traces)
    connected = all(t.control_topology_connected() for t in traces)
    ok = max(errors) <= 3.0 and failures == 0 and connected and elapsed < 5.0
    _report(
        "six-UAV loop: error <= 3 m, links intact, 10 seeds, < 5 s",
        ok,
        f"errors {min(errors):.2f}..{max(errors):.2f} m, {failures} failures, {elapsed:.2f} s",
    )


def test_fixed_power_degrades_under_jamming():
    adaptive_cfg = scenario_from(load_config(CONFIG_DIR / "six_uav_jammed_adaptive.yaml"))
    fixed_cfg = scenario_from(load_config(CONFIG_DIR / "six_uav_jammed_fixed.yaml"))
    fail_counts = []
    margins = []
    for seed in SEEDS:
        adaptive = run_scenario(adaptive_cfg, seed)
        fixed = run_scenario(fixed_cfg, seed)
        fail_counts.append(len(fixed.decode_failures))
        margins.append(fixed.steady_state_error() - adaptive.steady_state_error())
    ok = all(c >= 1 for c in fail_counts) and all(m > 0 for m in margins)
    _report(
        "fixed 1.3452 W + doubled jamming: decode failures and worse error",
        ok,
        f"failures/run {min(fail_counts)}..{max(fail_counts)}, "
        f"error excess {min(margins):.2f}..{max(margins):.2f} m",
    )


def test_monte_carlo_rate_trend():
    config = scenario_from(load_config(CONFIG_DIR / "monte_carlo.yaml"))
    started = time.perf_counter()
    rows = monte_carlo(config, 50, [2, 3, 4], base_seed=0, agent=2)
    elapsed = time.perf_counter() - started
    by_rate = sorted(rows, key=lambda r: r.rate_bps)  # ascending rate = descending tau
    errors = [r.mean_error_m for r in by_rate]
    powers = [r.mean_power_w for r in by_rate]
    ok = (
        all(b < a for a, b in zip(errors, errors[1:]))
        and all(b > a for a, b in zip(powers, powers[1:]))
        and elapsed < 60.0
    )
    _report(
        "rate sweep: error falls and power rises with the data rate (< 60 s)",
        ok,
        f"errors {errors}, powers {powers}, {elapsed:.1f} s",
    )


def test_property_suites(six_uav_traces, channel):
    rng = np.random.default_rng(31)
    sum_violations = 0
    for _ in range(10_000):
        a = Ball(rng.uniform(-10, 10, 3), rng.uniform(0, 5))
        b = Ball(rng.uniform(-10, 10, 3), rng.uniform(0, 5))
        total = minkowski_sum(a, b)
        da = rng.normal(size=3)
        da *= rng.uniform() ** (1 / 3) * a.radius / np.linalg.norm(da)
        db = rng.normal(size=3)
        db *= rng.uniform() ** (1 / 3) * b.radius / np.linalg.norm(db)
        if not total.contains(a.center + da + b.center + db, tol=1e-12):
            sum_violations += 1

    traces, _ = six_uav_traces
    containment = sum(t.self_containment_violations for t in traces) + sum(
        t.neighbor_containment_violations for t in traces
    )

    worst_rt = 0.0
    for _ in range(300):
        power = rng.uniform(1e-3, 5.0)
        rate = rng.uniform(200.0, 5e4)
        radius = comm_radius(power, rate, channel)
        worst_rt = max(worst_rt, abs(capacity(power, radius, channel) - rate) / rate)
        back = transmit_power(radius, rate, channel, epsilon_w=0.0)
        worst_rt = max(worst_rt, abs(back - power) / power)

    ok = sum_violations == 0 and containment == 0 and worst_rt <= 1e-9
    _report(
        "property suites: ball sums, range containment, link round trips",
        ok,
        f"{sum_violations} sum violations, {containment} containment violations, "
        f"worst round trip {worst_rt:.2e}",
    )
