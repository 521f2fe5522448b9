"""Scattering through sparse concentric spherical shells.

Thin scripting surface over the C++ core: closed-form amplitudes, the radial
solver behind constant shells, sphere-operator eigenvalues, and the bound
helpers. Everything heavier runs through the `sparsewave` CLI and its config
files.
"""

from ._core import (
    InvalidInput,
    absence_margins,
    affine_iteration_bound,
    free_amplitude_ball,
    o_t_eigenvalue,
    parametrix_residual,
    poly_exp_max,
    prufer_gap_bound,
    radial_amplitude,
    sparseness_ok,
    wkb_exponent,
)

__all__ = [
    "InvalidInput",
    "absence_margins",
    "affine_iteration_bound",
    "free_amplitude_ball",
    "o_t_eigenvalue",
    "parametrix_residual",
    "poly_exp_max",
    "prufer_gap_bound",
    "radial_amplitude",
    "sparseness_ok",
    "wkb_exponent",
]

__version__ = "0.1.0"
