"""Wireless link-budget model: path gain, Shannon capacity, communication radius.

The channel is deterministic distance-dependent path loss with additive
noise (channel + jamming spectral densities over the bandwidth).  A message
at rate ``mu`` decodes iff ``mu`` is strictly below the Shannon capacity,
which geometrically is an open ball around the transmitter.  When the
transmitter position is only known up to a ball, the region that works for
every possible transmitter position shrinks by that ball's radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from formlink.balls import Ball, position_range_radius

__all__ = [
    "ChannelParams",
    "GuaranteedRegion",
    "OptimalTau",
    "RateConfig",
    "capacity",
    "comm_radius",
    "d2_sign",
    "decodable",
    "guaranteed_region",
    "optimal_tau",
    "path_gain",
    "snr_threshold",
]


@dataclass(frozen=True)
class ChannelParams:
    """Static link-budget parameters.

    ``ref_gain`` is the dimensionless power gain at ``ref_distance_m``;
    noise spectral densities are in W/Hz and combine into the noise power
    ``noise_power_w = (channel_noise_psd + jamming_noise_psd) * bandwidth_hz``.
    """

    bandwidth_hz: float
    ref_distance_m: float
    ref_gain: float
    path_loss_exponent: float
    channel_noise_psd: float
    jamming_noise_psd: float

    def __post_init__(self):
        for name in ("bandwidth_hz", "ref_distance_m", "ref_gain", "path_loss_exponent"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.channel_noise_psd < 0 or self.jamming_noise_psd < 0:
            raise ValueError("noise spectral densities must be nonnegative")
        if not self.channel_noise_psd + self.jamming_noise_psd > 0:
            raise ValueError("total noise spectral density must be positive")

    @property
    def noise_power_w(self) -> float:
        return (self.channel_noise_psd + self.jamming_noise_psd) * self.bandwidth_hz

    def noise_power_scaled(self, jamming_multiplier: float) -> float:
        """Noise power with the jamming PSD scaled (time-varying interference)."""
        return (self.channel_noise_psd + jamming_multiplier * self.jamming_noise_psd) * self.bandwidth_hz


@dataclass(frozen=True)
class RateConfig:
    """Packet length and broadcast window; the data rate follows from both."""

    packet_bits: int
    step_s: float
    tau: int

    def __post_init__(self):
        if int(self.packet_bits) <= 0:
            raise ValueError("packet_bits must be a positive integer")
        if not self.step_s > 0:
            raise ValueError("step_s must be positive")
        if int(self.tau) < 1:
            raise ValueError("tau must be a positive integer")
        object.__setattr__(self, "packet_bits", int(self.packet_bits))
        object.__setattr__(self, "tau", int(self.tau))

    @property
    def transmission_time_s(self) -> float:
        return self.tau * self.step_s

    @property
    def rate_bps(self) -> float:
        return self.packet_bits / self.transmission_time_s


def _as_rate_bps(rate: Union[RateConfig, float]) -> float:
    rate_bps = rate.rate_bps if isinstance(rate, RateConfig) else float(rate)
    if not rate_bps > 0:
        raise ValueError("data rate must be positive")
    return rate_bps


def path_gain(distance_m: float, params: ChannelParams) -> float:
    """Power gain at the given distance: ref_gain * (d0 / d)^psi."""
    if not distance_m > 0:
        raise ValueError("distance must be strictly positive")
    return params.ref_gain * (params.ref_distance_m / distance_m) ** params.path_loss_exponent


def capacity(
    tx_power_w: float,
    distance_m: float,
    params: ChannelParams,
    noise_power_w: Optional[float] = None,
) -> float:
    """Shannon capacity in bits/s of the link at the given geometry.

    ``noise_power_w`` overrides the receiver's noise power; by default the
    common value from ``params`` is used.
    """
    if tx_power_w < 0:
        raise ValueError("transmit power must be nonnegative")
    w = params.noise_power_w if noise_power_w is None else noise_power_w
    snr = tx_power_w * path_gain(distance_m, params) / w
    return params.bandwidth_hz * math.log2(1.0 + snr)


def snr_threshold(rate: Union[RateConfig, float], params: ChannelParams) -> float:
    """Minimum SNR (exclusive) for decoding at the given data rate."""
    return 2.0 ** (_as_rate_bps(rate) / params.bandwidth_hz) - 1.0


def comm_radius(
    tx_power_w: float,
    rate: Union[RateConfig, float],
    params: ChannelParams,
    noise_power_w: Optional[float] = None,
) -> float:
    """Distance below which capacity exceeds the data rate.

    Inverts the capacity formula; ``capacity(P, comm_radius(P, mu), ...) == mu``
    up to round-off.  ``rate`` may be a RateConfig or a raw rate in bits/s.
    """
    if not tx_power_w > 0:
        raise ValueError("transmit power must be strictly positive")
    w = params.noise_power_w if noise_power_w is None else noise_power_w
    thr = snr_threshold(rate, params)
    return params.ref_distance_m * (params.ref_gain * tx_power_w / (thr * w)) ** (
        1.0 / params.path_loss_exponent
    )


@dataclass(frozen=True)
class GuaranteedRegion:
    """Open ball of receiver positions that decode for every transmitter
    position inside the transmitter's uncertainty ball.

    ``radius <= 0`` marks the empty region (uncertainty swallowed the whole
    communication range); membership tests then always fail.
    """

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def is_empty(self) -> bool:
        return self.radius <= 0.0


def guaranteed_region(pos_range: Ball, comm_radius_m: float) -> GuaranteedRegion:
    """Shrink the communication ball by the transmitter's position uncertainty."""
    return GuaranteedRegion(pos_range.center, comm_radius_m - pos_range.radius)


def decodable(receiver_pos, region: GuaranteedRegion) -> bool:
    """Strict open-ball membership; boundary and empty regions do not decode."""
    if region.is_empty:
        return False
    receiver_pos = np.asarray(receiver_pos, dtype=float)
    return float(np.linalg.norm(receiver_pos - region.center)) < region.radius


def d2_sign(tau: int, packet_bits: int, step_s: float, params: ChannelParams) -> float:
    """Second-derivative factor of the communication radius w.r.t. the window length.

    A negative value certifies concavity of the guaranteed radius over the
    window length, i.e. that stretching the window eventually stops paying.
    """
    if tau < 1 or packet_bits <= 0 or step_s <= 0:
        raise ValueError("tau, packet_bits and step_s must be positive")
    bw = params.bandwidth_hz
    psi = params.path_loss_exponent
    x = 2.0 ** (packet_bits / (tau * step_s * bw))
    return 2.0 * tau * step_s * bw * psi * (1.0 - x) + packet_bits * math.log(2.0) * (psi + x)


class OptimalTau(NamedTuple):
    """Result of the window-length scan.

    ``certified`` is True when the concavity condition held over the whole
    scan range; ``interior`` is False when the maximum sits on the scan
    boundary (degenerate profile, e.g. zero noise).
    """

    tau: int
    certified: bool
    interior: bool
    gcr: np.ndarray


def optimal_tau(
    tx_power_w: float,
    packet_bits: int,
    step_s: float,
    params: ChannelParams,
    pos_noise_radius: float,
    vel_noise_radius: float,
    tau_max: int = 1000,
) -> OptimalTau:
    """Exhaustively scan window lengths for the largest guaranteed radius.

    The guaranteed radius at the worst instant of a window of length tau is
    the communication radius at rate packet_bits/(tau*step) minus the
    position-range radius grown over tau - 1 steps.  Returns the smallest
    maximizer on ties.
    """
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    taus = np.arange(1, tau_max + 1)
    gcr = np.empty(tau_max, dtype=float)
    certified = True
    for idx, tau in enumerate(taus):
        rate_bps = packet_bits / (tau * step_s)
        shrink = position_range_radius(int(tau) - 1, pos_noise_radius, vel_noise_radius, step_s)
        gcr[idx] = comm_radius(tx_power_w, rate_bps, params) - shrink
        if d2_sign(int(tau), packet_bits, step_s, params) >= 0:
            certified = False
    best = int(np.argmax(gcr))  # np.argmax already returns the first (smallest) maximizer
    return OptimalTau(tau=best + 1, certified=certified, interior=0 < best < tau_max - 1, gcr=gcr)
