"""Communication-aware formation control toolkit.

Link-budget math (path gain, Shannon capacity, communication radius),
bounded-noise position-range prediction via closed-ball arithmetic,
data-rate feasibility analysis, discrete-time gain design through the
Jury criterion, distributed transmit-power control, and a closed-loop
multi-agent simulator that ties all of it together.
"""

from formlink.balls import Ball, PredictionQuery, minkowski_sum, predict_position_range
from formlink.channel import (
    ChannelParams,
    GuaranteedRegion,
    RateConfig,
    capacity,
    comm_radius,
    d2_sign,
    decodable,
    guaranteed_region,
    optimal_tau,
    path_gain,
)
from formlink.controller import (
    AgentState,
    ControlTopology,
    Gain,
    control_input,
    gain_feasible,
    gain_region_grid,
    jury_phis,
    laplacian_eigs,
    n_matrix,
    state_estimate,
    system_matrices,
)
from formlink.power import PowerPlanInput, required_radius, transmit_power
from formlink.rates import RatePlanQuery, feasible_rates, psi1, psi2
from formlink.sim import ScenarioConfig, Trace, monte_carlo, run_scenario

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "Ball",
    "ChannelParams",
    "ControlTopology",
    "Gain",
    "GuaranteedRegion",
    "PowerPlanInput",
    "PredictionQuery",
    "RateConfig",
    "RatePlanQuery",
    "ScenarioConfig",
    "Trace",
    "capacity",
    "comm_radius",
    "control_input",
    "d2_sign",
    "decodable",
    "feasible_rates",
    "gain_feasible",
    "gain_region_grid",
    "guaranteed_region",
    "jury_phis",
    "laplacian_eigs",
    "minkowski_sum",
    "monte_carlo",
    "n_matrix",
    "optimal_tau",
    "path_gain",
    "predict_position_range",
    "psi1",
    "psi2",
    "required_radius",
    "run_scenario",
    "state_estimate",
    "system_matrices",
    "transmit_power",
]
