"""Renderers, one per figure kind.

All data flows verbatim from CSV columns to matplotlib; the only arithmetic
applied to data values is the unit scaling declared in the spec (and the
grouping/selection needed to split columns into series). Output is PNG via
the Agg backend with scrubbed metadata, so identical inputs yield identical
bytes.
"""

from __future__ import annotations

import math
import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from formlink_figures.spec import KINDS, FigureSpec, SpecError, read_columns  # noqa: E402

__all__ = ["render"]


def _grouped(keys, values):
    out = {}
    for key, value in zip(keys, values):
        out.setdefault(key, []).append(value)
    return out


def _finish(fig, ax, spec: FigureSpec, default_x: str, default_y: str):
    ax.set_xlabel(spec.x_label or default_x)
    ax.set_ylabel(spec.y_label or default_y)
    if spec.title:
        ax.set_title(spec.title)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=spec.dpi, metadata={"Software": None})
    plt.close(fig)


def _empty(fig, ax, spec: FigureSpec, default_x: str, default_y: str):
    warnings.warn(f"no data rows for {spec.kind}; writing empty axes", stacklevel=3)
    _finish(fig, ax, spec, default_x, default_y)


def _render_radius_curve(spec: FigureSpec):
    data = read_columns(spec.inputs["radius"], KINDS["radius_curve"]["radius"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if not data["rate_bps"]:
        return _empty(fig, ax, spec, "data rate (bps)", "communication radius (m)")
    series = {}
    for bw, rate, radius in zip(data["bandwidth_hz"], data["rate_bps"], data["radius_m"]):
        series.setdefault(bw, []).append((rate * spec.x_scale, radius * spec.y_scale))
    for bw in sorted(series):
        points = sorted(series[bw])
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o",
                label=f"bandwidth {bw:g} Hz")
    ax.legend()
    _finish(fig, ax, spec, "data rate (bps)", "communication radius (m)")


def _render_rate_set(spec: FigureSpec):
    data = read_columns(spec.inputs["rates"], KINDS["rate_set"]["rates"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if not data["tau"]:
        return _empty(fig, ax, spec, "window length (steps)", "feasible data rate (bps)")
    taus = data["tau"]
    rates = [r * spec.y_scale for r in data["rate_bps"]]
    ax.bar(taus, rates, width=0.6, color="tab:blue")
    for tau, rate in zip(taus, rates):
        ax.annotate(f"{rate:g}", (tau, rate), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(sorted(set(taus)))
    _finish(fig, ax, spec, "window length (steps)", "feasible data rate (bps)")


def _render_trajectories(spec: FigureSpec):
    states = read_columns(spec.inputs["states"], KINDS["trajectories"]["states"])
    powers = read_columns(spec.inputs["powers"], KINDS["trajectories"]["powers"])
    fig, ax = plt.subplots(figsize=(6, 6))
    if not states["agent"]:
        return _empty(fig, ax, spec, "x (m)", "y (m)")
    xs = _grouped(states["agent"], [x * spec.x_scale for x in states["pos_x_m"]])
    ys = _grouped(states["agent"], [y * spec.y_scale for y in states["pos_y_m"]])
    steps = _grouped(states["agent"], states["step"])
    colors = {}
    for agent in sorted(xs):
        line, = ax.plot(xs[agent], ys[agent], linewidth=1.0, label=f"agent {agent:g}")
        colors[agent] = line.get_color()
        ax.plot(xs[agent][-1], ys[agent][-1], marker="o", color=colors[agent])
    # communication circles at a thinned subset of window starts
    if powers["window"]:
        windows = sorted(set(powers["window"]))
        stride = max(1, math.ceil(len(windows) / max(spec.circle_count, 1)))
        chosen = set(windows[::stride])
        by_agent_step = {}
        for window, step, agent, radius in zip(
            powers["window"], powers["step"], powers["agent"], powers["comm_radius_m"]
        ):
            if window in chosen:
                by_agent_step[(agent, step)] = radius
        for (agent, step), radius in by_agent_step.items():
            if agent not in steps:
                continue
            try:
                idx = steps[agent].index(step)
            except ValueError:
                continue
            circle = plt.Circle(
                (xs[agent][idx], ys[agent][idx]), radius * spec.y_scale,
                fill=False, linestyle=":", linewidth=0.5, color=colors.get(agent, "gray"),
                alpha=0.5,
            )
            ax.add_patch(circle)
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(fontsize=8)
    _finish(fig, ax, spec, "x (m)", "y (m)")


def _render_error_series(spec: FigureSpec):
    data = read_columns(spec.inputs["errors"], KINDS["error_series"]["errors"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if not data["time_s"]:
        return _empty(fig, ax, spec, "time (s)", "max formation error (m)")
    t = [v * spec.x_scale for v in data["time_s"]]
    ax.plot(t, [v * spec.y_scale for v in data["max_pos_error_m"]],
            label="position error", color="tab:blue")
    ax.plot(t, [v * spec.y_scale for v in data["max_vel_error_mps"]],
            label="velocity error", color="tab:orange", linewidth=0.8)
    if spec.reference_value is not None:
        ax.axhline(spec.reference_value, linestyle="--", color="tab:red",
                   label=f"bound {spec.reference_value:g}")
    ax.legend()
    _finish(fig, ax, spec, "time (s)", "max formation error (m)")


def _render_power_series(spec: FigureSpec):
    data = read_columns(spec.inputs["powers"], KINDS["power_series"]["powers"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if not data["time_s"]:
        return _empty(fig, ax, spec, "time (s)", "transmit power (W)")
    times = _grouped(data["agent"], [t * spec.x_scale for t in data["time_s"]])
    values = _grouped(data["agent"], [p * spec.y_scale for p in data["power_w"]])
    for agent in sorted(times):
        ax.step(times[agent], values[agent], where="post", linewidth=0.9,
                label=f"agent {agent:g}")
    ax.legend(fontsize=8)
    _finish(fig, ax, spec, "time (s)", "transmit power (W)")


def _render_mc_trend(spec: FigureSpec):
    data = read_columns(spec.inputs["montecarlo"], KINDS["mc_trend"]["montecarlo"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if not data["rate_bps"]:
        return _empty(fig, ax, spec, "data rate (bps)", "mean formation error (m)")
    order = sorted(range(len(data["rate_bps"])), key=lambda i: data["rate_bps"][i])
    rates = [data["rate_bps"][i] * spec.x_scale for i in order]
    errors = [data["mean_error_m"][i] * spec.y_scale for i in order]
    powers = [data["mean_power_w"][i] for i in order]
    ax.plot(rates, errors, marker="s", color="tab:blue", label="mean error")
    ax.set_ylabel(spec.y_label or "mean formation error (m)", color="tab:blue")
    twin = ax.twinx()
    twin.plot(rates, powers, marker="^", color="tab:green", label="mean power")
    twin.set_ylabel("mean transmit power (W)", color="tab:green")
    ax.set_xlabel(spec.x_label or "data rate (bps)")
    if spec.title:
        ax.set_title(spec.title)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=spec.dpi, metadata={"Software": None})
    plt.close(fig)


_RENDERERS = {
    "radius_curve": _render_radius_curve,
    "rate_set": _render_rate_set,
    "trajectories": _render_trajectories,
    "error_series": _render_error_series,
    "power_series": _render_power_series,
    "mc_trend": _render_mc_trend,
}


def render(spec: FigureSpec) -> None:
    """Render one figure; raises SpecError on nonconforming inputs."""
    try:
        renderer = _RENDERERS[spec.kind]
    except KeyError as exc:
        raise SpecError(f"unknown figure kind {spec.kind!r}") from exc
    renderer(spec)
