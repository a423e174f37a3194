"""Distributed transmit-power control.

At every window start a transmitter predicts, for itself and for each
control neighbor, the ball of positions reachable during the upcoming
window, then sets its power so the guaranteed communication region covers
the farthest possible neighbor position.  Predictions rely only on
information the agent has actually received: exact neighbor states one
window old plus the neighbors' broadcast feedback aggregates, which make
their control inputs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from formlink.balls import Ball, PredictionQuery, predict_position_range
from formlink.channel import ChannelParams, snr_threshold
from formlink.controller import AgentState, Gain

__all__ = [
    "NeighborInfo",
    "PowerPlanInput",
    "predict_neighbor_inputs",
    "predict_self_inputs",
    "required_radius",
    "transmit_power",
]


class MissingNeighborData(RuntimeError):
    """A control-topology neighbor's snapshot or aggregate is unavailable.

    Under the power-control strategy this cannot happen (control links are
    preserved); seeing it means a control link was already broken.
    """


@dataclass(frozen=True)
class NeighborInfo:
    """What the planner knows about one control neighbor.

    ``state`` is the neighbor's exact state at the previous window start;
    ``aggregate`` is the weighted estimate-difference sum the neighbor
    broadcast alongside it, from which its inputs can be replayed.
    """

    state: AgentState
    aggregate: np.ndarray
    weight: float
    offset: np.ndarray
    pos_noise: float
    vel_noise: float

    def __post_init__(self):
        agg = np.asarray(self.aggregate, dtype=float)
        off = np.asarray(self.offset, dtype=float)
        if agg.shape[0] != 2 * self.state.dim:
            raise MissingNeighborData(
                f"aggregate must stack position and velocity parts ({2 * self.state.dim},), got {agg.shape}"
            )
        agg.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "aggregate", agg)
        object.__setattr__(self, "offset", off)


@dataclass(frozen=True)
class PowerPlanInput:
    """Per-agent, per-window inputs of the power planner.

    For the very first window every agent knows every initial state exactly,
    so ``initial_window=True`` switches both predictions to anchors at the
    current step (``self_prev`` then equals ``self_state``).
    """

    self_state: AgentState
    self_prev: AgentState
    self_offset: np.ndarray
    neighbors: Mapping[int, NeighborInfo]
    gain: Gain
    tau: int
    step_s: float
    self_pos_noise: float
    self_vel_noise: float
    rate_bps: float
    channel: ChannelParams
    epsilon_w: float
    initial_window: bool = False

    def __post_init__(self):
        if int(self.tau) < 1:
            raise ValueError("tau must be >= 1")
        if self.epsilon_w < 0:
            raise ValueError("epsilon_w must be nonnegative")
        if not self.neighbors:
            raise MissingNeighborData("power planning needs at least one control neighbor")
        off = np.asarray(self.self_offset, dtype=float)
        off.setflags(write=False)
        object.__setattr__(self, "self_offset", off)
        object.__setattr__(self, "tau", int(self.tau))


def _corrected(state: AgentState, offset: np.ndarray) -> np.ndarray:
    """Stacked offset-corrected state [p - offset, v]."""
    return np.concatenate([state.position - offset, state.velocity])


def _feedback_at(gain: Gain, exponent: int, step_s: float, stacked: np.ndarray) -> np.ndarray:
    """K @ A^exponent @ x without forming matrices: alpha*p + (alpha*e*h + beta)*v."""
    dim = stacked.shape[0] // 2
    return gain.alpha * stacked[:dim] + (gain.alpha * exponent * step_s + gain.beta) * stacked[dim:]


def predict_self_inputs(inp: PowerPlanInput, s1: int) -> np.ndarray:
    """Own control input ``s1`` steps into the upcoming window.

    Exact, not an estimate: it is the input the estimation-based controller
    will actually apply, reconstructed from the neighbor states received at
    the window start.
    """
    if not 0 <= s1 <= inp.tau - 2:
        raise ValueError(f"s1 must be in [0, tau-2], got {s1} for tau={inp.tau}")
    seed = np.zeros(2 * inp.self_state.dim)
    own = _corrected(inp.self_prev, inp.self_offset)
    for info in inp.neighbors.values():
        seed += info.weight * (_corrected(info.state, info.offset) - own)
    exponent = s1 if inp.initial_window else inp.tau + s1
    return _feedback_at(inp.gain, exponent, inp.step_s, seed)


def predict_neighbor_inputs(inp: PowerPlanInput, j: int, s2: int) -> np.ndarray:
    """Neighbor ``j``'s input ``s2`` steps past its last broadcast.

    Replayed from the broadcast aggregate; covers both the window already in
    flight (s2 < tau) and the upcoming one (tau <= s2 <= 2*tau - 2).
    """
    high = inp.tau - 2 if inp.initial_window else 2 * inp.tau - 2
    if not 0 <= s2 <= max(high, inp.tau - 1):
        raise ValueError(f"s2 out of range [0, {max(high, inp.tau - 1)}], got {s2}")
    try:
        info = inp.neighbors[j]
    except KeyError as exc:
        raise MissingNeighborData(f"no snapshot/aggregate for control neighbor {j}") from exc
    return _feedback_at(inp.gain, s2, inp.step_s, info.aggregate)


def _point_controls(inputs) -> tuple:
    return tuple(Ball(u, 0.0) for u in inputs)


def _self_range(inp: PowerPlanInput, l: int) -> Ball:
    controls = _point_controls(predict_self_inputs(inp, s) for s in range(l))
    return predict_position_range(
        PredictionQuery(
            anchor_position=inp.self_state.position,
            anchor_velocity=inp.self_state.velocity,
            control_balls=controls,
            pos_noise_radius=inp.self_pos_noise,
            vel_noise_radius=inp.self_vel_noise,
            sigma=l,
            step=inp.step_s,
        )
    )


def _neighbor_range(inp: PowerPlanInput, j: int, l: int) -> Ball:
    info = inp.neighbors[j]
    sigma = l if inp.initial_window else inp.tau + l
    controls = _point_controls(predict_neighbor_inputs(inp, j, s) for s in range(sigma))
    return predict_position_range(
        PredictionQuery(
            anchor_position=info.state.position,
            anchor_velocity=info.state.velocity,
            control_balls=controls,
            pos_noise_radius=info.pos_noise,
            vel_noise_radius=info.vel_noise,
            sigma=sigma,
            step=inp.step_s,
        )
    )


def required_radius(inp: PowerPlanInput) -> float:
    """Largest separation the guaranteed region must cover this window.

    Maximizes, over control neighbors and window steps, the center distance
    of the two predicted position balls plus both radii: the worst case of
    transmitter and receiver each sitting at the far edge of its ball.
    """
    worst = 0.0
    for l in range(inp.tau):
        own = _self_range(inp, l)
        for j in inp.neighbors:
            nb = _neighbor_range(inp, j, l)
            candidate = float(np.linalg.norm(own.center - nb.center)) + own.radius + nb.radius
            worst = max(worst, candidate)
    return worst


def transmit_power(
    required_radius_m: float,
    rate_bps: float,
    channel: ChannelParams,
    epsilon_w: float = 0.0,
    noise_power_w: Optional[float] = None,
) -> float:
    """Power making the communication radius equal ``required_radius_m``, plus margin.

    Exact inverse of the communication-radius formula; ``epsilon_w`` absorbs
    the deviation between inputs predicted from estimates and the inputs
    peers actually apply.
    """
    if not required_radius_m > 0:
        raise ValueError("required radius must be positive")
    if epsilon_w < 0:
        raise ValueError("epsilon_w must be nonnegative")
    w = channel.noise_power_w if noise_power_w is None else noise_power_w
    thr = snr_threshold(rate_bps, channel)
    return thr * w / channel.ref_gain * (required_radius_m / channel.ref_distance_m) ** channel.path_loss_exponent + epsilon_w
