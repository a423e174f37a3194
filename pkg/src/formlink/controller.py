"""Estimation-based formation control and discrete-time gain design.

Agents run double-integrator dynamics and steer toward consensus of
offset-corrected states using neighbor state estimates that are only
refreshed once per broadcast window.  Closed-loop stability per Laplacian
eigenvalue reduces to Schur stability of a quartic characteristic
polynomial, tested algebraically with the Jury table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AgentState",
    "ControlTopology",
    "Gain",
    "GainRegion",
    "char_poly_coeffs",
    "closed_loop_block",
    "control_input",
    "gain_feasible",
    "gain_region_grid",
    "jury_endpoints",
    "jury_phis",
    "laplacian_eigs",
    "n_matrix",
    "n_matrix_sum",
    "state_estimate",
    "system_matrices",
]

_EIG_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class Gain:
    """Position/velocity feedback gains; both must be strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("gain entries must be strictly positive")


@dataclass(frozen=True)
class AgentState:
    """Position and velocity of one agent (offset-corrected or raw)."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.position, dtype=float))
        v = np.atleast_1d(np.asarray(self.velocity, dtype=float))
        if p.shape != v.shape:
            raise ValueError("position/velocity dimension mismatch")
        p.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "velocity", v)

    @property
    def dim(self) -> int:
        return self.position.shape[0]

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity])


class ControlTopology:
    """Symmetric weighted adjacency of the fixed undirected control graph."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weights must be a square matrix")
        if not np.array_equal(w, w.T):
            raise ValueError("control topology must be undirected (symmetric weights)")
        if (w < 0).any():
            raise ValueError("edge weights must be nonnegative")
        if np.diagonal(w).any():
            raise ValueError("self-loops are not allowed (nonzero diagonal)")
        self.weights = w
        self.n_agents = w.shape[0]

    @classmethod
    def from_edges(cls, n_agents: int, edges: Sequence[tuple]) -> "ControlTopology":
        """Build from (i, j) or (i, j, weight) pairs, 0-based indices."""
        w = np.zeros((n_agents, n_agents))
        for edge in edges:
            i, j = edge[0], edge[1]
            weight = edge[2] if len(edge) > 2 else 1.0
            w[i, j] = w[j, i] = weight
        return cls(w)

    def laplacian(self) -> np.ndarray:
        return np.diag(self.weights.sum(axis=1)) - self.weights

    def eigenvalues(self) -> np.ndarray:
        return laplacian_eigs(self)

    @property
    def is_connected(self) -> bool:
        return self.eigenvalues()[1] > 0.0

    def edge_list(self) -> list[tuple[int, int]]:
        """Directed edge list: both (i, j) and (j, i) for every undirected edge."""
        idx = np.argwhere(self.weights > 0)
        return [(int(i), int(j)) for i, j in idx]


def laplacian_eigs(topology: ControlTopology) -> np.ndarray:
    """Ascending Laplacian spectrum; values within 1e-10 of zero are clamped
    to exactly 0 so the connectivity predicate (second eigenvalue > 0) is crisp."""
    eigs = np.linalg.eigvalsh(topology.laplacian())
    eigs = np.sort(eigs)
    eigs[np.abs(eigs) < _EIG_ZERO_TOL] = 0.0
    return eigs


def system_matrices(step_s: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Discrete double integrator: x+ = A x + B u with x = [p, v]."""
    if not step_s > 0:
        raise ValueError("step_s must be positive")
    a = np.kron(np.array([[1.0, step_s], [0.0, 1.0]]), np.eye(dim))
    b = np.kron(np.array([[step_s**2 / 2.0], [step_s]]), np.eye(dim))
    return a, b


def gain_matrix(gain: Gain, dim: int) -> np.ndarray:
    """Feedback matrix mapping a stacked state difference to an acceleration."""
    return np.kron(np.array([[gain.alpha, gain.beta]]), np.eye(dim))


def state_estimate(last_known: AgentState, from_step: int, to_step: int, a_matrix: np.ndarray) -> AgentState:
    """Propagate the last exactly-known state forward with the drift matrix only.

    Control inputs are deliberately not applied: all agents use the same
    input-free extrapolation so each one can reproduce its peers' estimates.
    """
    if to_step < from_step:
        raise ValueError(f"cannot estimate backwards: from step {from_step} to {to_step}")
    dim = last_known.dim
    x = np.linalg.matrix_power(a_matrix, to_step - from_step) @ last_known.stacked()
    return AgentState(x[:dim], x[dim:])


def control_input(
    own_est: AgentState,
    neighbor_ests: Sequence[tuple[float, AgentState]],
    gain: Gain,
) -> np.ndarray:
    """Weighted consensus feedback on estimated states.

    u = sum_j w_j * (alpha * (p_j - p_own) + beta * (v_j - v_own)); note the
    own state here is an estimate too, not the measured state.
    """
    u = np.zeros(own_est.dim)
    for weight, est in neighbor_ests:
        if weight < 0:
            raise ValueError("neighbor weights must be nonnegative")
        u += weight * (
            gain.alpha * (est.position - own_est.position)
            + gain.beta * (est.velocity - own_est.velocity)
        )
    return u


def n_matrix(s: int, lam: float, gain: Gain, step_s: float) -> np.ndarray:
    """Closed form of the window-accumulated feedback block (scalar spatial dim).

    Captures how a state deviation present at the previous window start acts
    on the state after ``s`` further steps, summed over the window.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    a, b, h = gain.alpha, gain.beta, step_s
    return lam * np.array(
        [
            [a * h * h * s * s / 2.0,
             a * h**3 / 12.0 * s * (8.0 * s * s - 3.0 * s + 1.0) + b * h * h * s * s / 2.0],
            [a * h * s,
             a * h * h / 2.0 * s * (3.0 * s - 1.0) + b * h * s],
        ]
    )


def n_matrix_sum(s: int, lam: float, gain: Gain, step_s: float) -> np.ndarray:
    """Same block evaluated from its defining sum; oracle for the closed form."""
    if s < 1:
        raise ValueError("s must be >= 1")
    a_mat, b_mat = system_matrices(step_s, 1)
    k_mat = gain_matrix(gain, 1)
    total = np.zeros((2, 2))
    for l in range(s):
        total += (
            np.linalg.matrix_power(a_mat, s - 1 - l)
            @ b_mat
            @ k_mat
            @ np.linalg.matrix_power(a_mat, s + l)
        )
    return lam * total


def closed_loop_block(lam: float, gain: Gain, step_s: float, tau: int) -> np.ndarray:
    """4x4 window-to-window transition of one Laplacian mode (scalar spatial dim).

    Stacks the deviation at the next window start over the one at the current
    start; Schur stability of this block is what the Jury test certifies.
    """
    a_mat, _ = system_matrices(step_s, 1)
    a_tau = np.linalg.matrix_power(a_mat, tau)
    top = np.hstack([a_tau, -n_matrix_sum(tau, lam, gain, step_s)])
    bottom = np.hstack([np.eye(2), np.zeros((2, 2))])
    return np.vstack([top, bottom])


def _gain_values(gain) -> tuple[float, float]:
    """Accept a Gain or a raw (alpha, beta) pair (boundary values allowed)."""
    if isinstance(gain, Gain):
        return gain.alpha, gain.beta
    a, b = gain
    return float(a), float(b)


def char_poly_coeffs(lam: float, gain, step_s: float, tau: int) -> tuple[float, float, float, float, float]:
    """Coefficients (a0..a4) of the mode's characteristic quartic, a4 leading."""
    a, b = _gain_values(gain)
    h = float(step_s)
    a0 = lam**2 * a**2 * h**4 * tau**2 * (tau**2 - 1) / 12.0
    a1 = lam * a * h * h * (tau - 2.0 * tau * tau) / 2.0 - lam * b * h * tau
    a2 = 1.0 + lam * a * h * h * (4.0 * tau * tau - tau) / 2.0 + lam * b * h * tau
    return a0, a1, a2, -2.0, 1.0


def jury_phis(lam: float, gain, step_s: float, tau: int) -> tuple[float, float, float]:
    """The three Jury-table margins for one Laplacian eigenvalue.

    All strictly positive (together with the trivial endpoint checks) iff
    every root of the characteristic quartic lies strictly inside the unit
    circle.  ``gain`` may be a Gain or a raw (alpha, beta) pair, so boundary
    values like (0, 0) can be scored even though the control law forbids
    them.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    if tau < 1:
        raise ValueError("tau must be >= 1")
    a0, a1, a2, a3, a4 = char_poly_coeffs(lam, gain, step_s, tau)
    b0 = a0 * a0 - a4 * a4
    b1 = a0 * a1 - a3 * a4
    b2 = a2 * (a0 - a4)
    b3 = a0 * a3 - a1 * a4
    c0 = b0 * b0 - b3 * b3
    c2 = b0 * b2 - b1 * b3
    return a4 - abs(a0), abs(b0) - abs(b3), abs(c0) - abs(c2)


def jury_endpoints(lam: float, gain, step_s: float, tau: int) -> tuple[float, float]:
    """f(1) and f(-1) of the characteristic quartic.

    Both must be positive for Schur stability; for positive gains they
    always are, so the three table margins carry the real constraint.
    """
    a0, a1, a2, a3, a4 = char_poly_coeffs(lam, gain, step_s, tau)
    return a4 + a3 + a2 + a1 + a0, a4 - a3 + a2 - a1 + a0


def gain_feasible(gain: Gain, eigs: Sequence[float], step_s: float, tau: int) -> bool:
    """True iff the gain stabilizes every (positive) Laplacian mode.

    Strict inequalities throughout; boundary cases count as infeasible.
    ``eigs`` must be the positive part of a connected topology's spectrum.
    """
    eigs = list(eigs)
    if not eigs:
        raise ValueError("need at least one positive eigenvalue (connected topology)")
    if min(eigs) <= 0:
        raise ValueError("all supplied eigenvalues must be positive")
    for lam in eigs:
        if min(jury_phis(lam, gain, step_s, tau)) <= 0.0:
            return False
        f_1, f_m1 = jury_endpoints(lam, gain, step_s, tau)
        if f_1 <= 0.0 or f_m1 <= 0.0:
            return False
    return True


@dataclass(frozen=True)
class GainRegion:
    """Grid scan of the feasible-gain region: mask[i, j] covers (alphas[i], betas[j])."""

    alphas: np.ndarray
    betas: np.ndarray
    mask: np.ndarray

    def contains(self, alpha: float, beta: float) -> bool:
        """Feasibility of the grid cell nearest to (alpha, beta)."""
        i = int(np.argmin(np.abs(self.alphas - alpha)))
        j = int(np.argmin(np.abs(self.betas - beta)))
        return bool(self.mask[i, j])


def gain_region_grid(
    eigs: Sequence[float],
    step_s: float,
    tau: int,
    alpha_range: tuple[float, float],
    beta_range: tuple[float, float],
    resolution: int,
) -> GainRegion:
    """Evaluate gain feasibility over a rectangular grid.

    Cells with a nonpositive alpha or beta are excluded by construction
    (the control law requires strictly positive gains).
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if alpha_range[1] <= 0 or beta_range[1] <= 0:
        raise ValueError("gain ranges must reach positive values")
    alphas = np.linspace(alpha_range[0], alpha_range[1], resolution)
    betas = np.linspace(beta_range[0], beta_range[1], resolution)
    mask = np.zeros((resolution, resolution), dtype=bool)
    for i, alpha in enumerate(alphas):
        if alpha <= 0:
            continue
        for j, beta in enumerate(betas):
            if beta <= 0:
                continue
            mask[i, j] = gain_feasible(Gain(alpha, beta), eigs, step_s, tau)
    return GainRegion(alphas=alphas, betas=betas, mask=mask)
