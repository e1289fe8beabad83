"""Exact steady-state properties of a partially postselected monitored Kitaev chain.

Per-momentum Riccati solutions of the steady-state covariance,
correlation-length bounds from complex-momentum branch cuts, Gaussian
fermionic entanglement negativity, the Liouvillian spectral gap, and a
brute-force dense oracle cross-validating all of it at tiny sizes.
"""

from .model import ModelParams, build_k_grid, build_real_space_operators, build_xyz, gamma_c, ris
from .riccati import (
    integrate_flow,
    residual,
    solve_closed_form,
    solve_eigen,
    solve_lyapunov,
    steady_gamma,
)

__all__ = [
    "ModelParams",
    "build_k_grid",
    "build_real_space_operators",
    "build_xyz",
    "gamma_c",
    "ris",
    "integrate_flow",
    "residual",
    "solve_closed_form",
    "solve_eigen",
    "solve_lyapunov",
    "steady_gamma",
]

__version__ = "0.1.0"
