"""Closed-ball arithmetic and bounded-noise position-range prediction.

Every uncertainty set in the toolkit (process noise, control range,
predicted position range) is a closed Euclidean ball, so set propagation
through the double-integrator dynamics reduces to exact arithmetic on
centers and radii.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Ball",
    "PredictionQuery",
    "minkowski_sum",
    "position_range_radius",
    "predict_position_range",
]


@dataclass(frozen=True)
class Ball:
    """Closed n-dimensional ball, n in {1, 2, 3}. Center in meters."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        if center.ndim != 1 or center.shape[0] not in (1, 2, 3):
            raise ValueError(f"ball center must be a 1/2/3-dimensional vector, got shape {center.shape}")
        radius = float(self.radius)
        if not np.isfinite(radius) or radius < 0.0:
            raise ValueError(f"ball radius must be finite and >= 0, got {radius}")
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def contains(self, point, tol: float = 0.0) -> bool:
        """Closed-ball membership, optionally slackened by ``tol``."""
        point = np.asarray(point, dtype=float)
        return float(np.linalg.norm(point - self.center)) <= self.radius + tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ball):
            return NotImplemented
        return (
            self.dim == other.dim
            and bool(np.all(self.center == other.center))
            and self.radius == other.radius
        )

    def __hash__(self):
        return hash((self.center.tobytes(), self.radius))


def minkowski_sum(a: Ball, b: Ball) -> Ball:
    """Minkowski sum of two closed balls: centers add, radii add."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Ball(a.center + b.center, a.radius + b.radius)


@dataclass(frozen=True)
class PredictionQuery:
    """Inputs for predicting a position range ``sigma`` steps past an exact state.

    ``control_balls`` holds the (possibly uncertain) control range applied at
    each of the ``sigma`` steps; noise radii bound the per-step process noise.
    """

    anchor_position: np.ndarray
    anchor_velocity: np.ndarray
    control_balls: tuple = field(default=())
    pos_noise_radius: float = 0.0
    vel_noise_radius: float = 0.0
    sigma: int = 0
    step: float = 0.05

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.anchor_position, dtype=float))
        v = np.atleast_1d(np.asarray(self.anchor_velocity, dtype=float))
        if p.shape != v.shape:
            raise ValueError("anchor position and velocity dimensions differ")
        balls = tuple(self.control_balls)
        if int(self.sigma) < 0:
            raise ValueError("sigma must be a nonnegative integer")
        if len(balls) != int(self.sigma):
            raise ValueError(f"need exactly sigma={self.sigma} control balls, got {len(balls)}")
        for ball in balls:
            if ball.dim != p.shape[0]:
                raise ValueError("control ball dimension does not match anchor")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.pos_noise_radius < 0 or self.vel_noise_radius < 0:
            raise ValueError("noise radii must be nonnegative")
        p.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "anchor_position", p)
        object.__setattr__(self, "anchor_velocity", v)
        object.__setattr__(self, "control_balls", balls)
        object.__setattr__(self, "sigma", int(self.sigma))
        object.__setattr__(self, "step", float(self.step))


def position_range_radius(sigma: int, pos_noise_radius: float, vel_noise_radius: float, step: float) -> float:
    """Radius of the predicted position range when the control range is exact.

    sigma * r_wp + 0.5 * sigma * (sigma - 1) * h * r_wv: accumulated position
    noise plus velocity noise integrated through the remaining steps.
    """
    sigma = int(sigma)
    return sigma * pos_noise_radius + 0.5 * sigma * (sigma - 1) * step * vel_noise_radius


def predict_position_range(q: PredictionQuery) -> Ball:
    """Predict the closed ball of positions reachable ``sigma`` steps ahead.

    Propagates the anchor through the double integrator and accumulates the
    Minkowski sums of the per-step control ranges and noise balls.  For
    sigma = 0 the range collapses to the anchor point.
    """
    if q.sigma == 0:
        return Ball(q.anchor_position, 0.0)
    h = q.step
    sigma = q.sigma
    center = q.anchor_position + sigma * h * q.anchor_velocity
    control_radius = 0.0
    for l, ball in enumerate(q.control_balls, start=1):
        weight = h * h * (sigma + 0.5 - l)
        center = center + weight * ball.center
        control_radius += weight * ball.radius
    radius = control_radius + position_range_radius(sigma, q.pos_noise_radius, q.vel_noise_radius, h)
    return Ball(center, radius)
