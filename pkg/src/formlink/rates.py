"""Feasible data rates under a formation-accuracy bound.

Two forces cap the rate from opposite sides.  A short broadcast window
(high rate) may leave the communication radius below the formation
geometry, so messages stop reaching the intended receivers; a long window
(low rate) lets position uncertainty of the sender and its peers grow past
the accuracy bound.  Both are scored per window length and the feasible
set is their intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

from formlink.balls import position_range_radius
from formlink.channel import ChannelParams, comm_radius

__all__ = [
    "RatePlanQuery",
    "feasible_rates",
    "psi1",
    "psi1_general",
    "psi2",
    "psi2_general",
]


@dataclass(frozen=True)
class RatePlanQuery:
    """Everything needed to score window lengths for one transmitter.

    Peer noise radii are worst case over the receivers; ``max_offset_m`` is
    the largest desired separation to any intended receiver.
    """

    packet_bits: int
    step_s: float
    delta_p_m: float
    max_offset_m: float
    self_pos_noise: float
    self_vel_noise: float
    peer_pos_noise: float
    peer_vel_noise: float
    tx_power_w: float
    channel: ChannelParams
    tau_cap: int = 100

    def __post_init__(self):
        if not self.delta_p_m > 0:
            raise ValueError("delta_p_m must be positive")
        if int(self.tau_cap) < 1:
            raise ValueError("tau_cap must be >= 1")
        if min(self.self_pos_noise, self.self_vel_noise, self.peer_pos_noise, self.peer_vel_noise) < 0:
            raise ValueError("noise radii must be nonnegative")
        object.__setattr__(self, "tau_cap", int(self.tau_cap))

    def rate_bps(self, tau: int) -> float:
        return self.packet_bits / (tau * self.step_s)


def _self_radius(tau: int, q: RatePlanQuery) -> float:
    # own position range at the worst instant of a window: sigma = tau - 1
    return position_range_radius(tau - 1, q.self_pos_noise, q.self_vel_noise, q.step_s)


def _peer_radius(tau: int, q: RatePlanQuery) -> float:
    # a peer's state is one full window staler: sigma = 2*tau - 1
    return position_range_radius(2 * tau - 1, q.peer_pos_noise, q.peer_vel_noise, q.step_s)


def psi1_general(tau: int, q: RatePlanQuery, self_radius: float, peer_radius: float) -> float:
    """Reachability margin with caller-supplied position-range radii.

    Guaranteed communication radius (communication radius minus own range)
    minus the worst-case receiver offset and the receiver's own range.
    Nonnegative means every intended receiver stays decodable.
    """
    radius = comm_radius(q.tx_power_w, q.rate_bps(tau), q.channel)
    return radius - self_radius - q.max_offset_m - peer_radius


def psi2_general(tau: int, q: RatePlanQuery, self_radius: float, peer_radius: float) -> float:
    """Accuracy margin with caller-supplied radii: error bound minus combined ranges."""
    return q.delta_p_m - self_radius - peer_radius


def psi1(tau: int, q: RatePlanQuery) -> float:
    """Reachability margin at window length ``tau`` (exact-control closed form)."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return psi1_general(tau, q, _self_radius(tau, q), _peer_radius(tau, q))


def psi2(tau: int, q: RatePlanQuery) -> float:
    """Accuracy margin at window length ``tau`` (exact-control closed form)."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return psi2_general(tau, q, _self_radius(tau, q), _peer_radius(tau, q))


def feasible_rates(q: RatePlanQuery) -> list[tuple[int, float]]:
    """All (tau, rate) pairs with both margins nonnegative, up to ``tau_cap``.

    May be empty: no rate satisfies the accuracy bound with the given noise.
    """
    out = []
    for tau in range(1, q.tau_cap + 1):
        if psi1(tau, q) >= 0.0 and psi2(tau, q) >= 0.0:
            out.append((tau, q.rate_bps(tau)))
    return out
