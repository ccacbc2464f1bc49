"""Cycle-with-chord Markov chains: kernels, mixing times, grid exits and experiments."""

from ._chordmix import (
    Kernel,
    build_kernel,
    coin_procedure,
    distance,
    euler_phi,
    evolve,
    exit_probability,
    exit_set,
    fit_exponent,
    good_k_set,
    is_good_k,
    mixing_time,
    phi_ratio_sum,
    scaling_run,
    trajectory_law,
    verify_kernel,
)

__all__ = [
    "Kernel",
    "build_kernel",
    "coin_procedure",
    "distance",
    "euler_phi",
    "evolve",
    "exit_probability",
    "exit_set",
    "fit_exponent",
    "good_k_set",
    "is_good_k",
    "mixing_time",
    "phi_ratio_sum",
    "scaling_run",
    "trajectory_law",
    "verify_kernel",
]
