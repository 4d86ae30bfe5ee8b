"""Diffusion NLMS over adaptive networks with adaptive node sampling.

Implements the ATC diffusion NLMS algorithm with adaptive combination
weights, the AS-dNLMS adaptive sampling mechanism (including its
energy-saving censoring variant), baseline sampling/transmission policies,
closed-form steady-state predictions, and a seeded Monte Carlo harness.
"""

from asdnlms.network import (
    Topology,
    build_random_geometric,
    metropolis_weights,
    uniform_weights,
)
from asdnlms.signals import Environment, NodeStream, apply_flip, init_environment
from asdnlms.sampling import PolicyConfig, SamplerState, decide, phi, phi_prime
from asdnlms.analysis import (
    SteadyStatePrediction,
    beta_admissible,
    duty_cycle_estimate,
    predict,
    sampled_node_bounds,
    theta_bounds,
)
from asdnlms.harness import RunConfig, monte_carlo, moving_average, network_msd, run_realization

__version__ = "0.1.0"

__all__ = [
    "Topology",
    "build_random_geometric",
    "uniform_weights",
    "metropolis_weights",
    "Environment",
    "NodeStream",
    "init_environment",
    "apply_flip",
    "PolicyConfig",
    "SamplerState",
    "phi",
    "phi_prime",
    "decide",
    "SteadyStatePrediction",
    "beta_admissible",
    "theta_bounds",
    "duty_cycle_estimate",
    "sampled_node_bounds",
    "predict",
    "RunConfig",
    "run_realization",
    "monte_carlo",
    "network_msd",
    "moving_average",
]
