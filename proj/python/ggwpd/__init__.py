"""Generalized Gaussian wave packet dynamics on the kicked rotor."""

from ._core import (
    GaussianPacket,
    NumericalError,
    Regime,
    Saddle,
    Seed,
    find_saddle,
    find_seeds,
    floquet_matrix,
    free_particle_exact,
    free_particle_ggwpd,
    gaussian_overlap,
    ggwpd_correlation,
    inverse_map_step,
    linearized_correlation,
    map_step,
    offcenter_correlation,
    preset_names,
    propagate,
    quantum_correlation,
    run_sweep,
    sweep_csv,
)

__all__ = [
    "GaussianPacket",
    "NumericalError",
    "Regime",
    "Saddle",
    "Seed",
    "find_saddle",
    "find_seeds",
    "floquet_matrix",
    "free_particle_exact",
    "free_particle_ggwpd",
    "gaussian_overlap",
    "ggwpd_correlation",
    "inverse_map_step",
    "linearized_correlation",
    "map_step",
    "offcenter_correlation",
    "preset_names",
    "propagate",
    "quantum_correlation",
    "run_sweep",
    "sweep_csv",
]
