"""Independent numerical references for the lumped-element model."""

from .bending import StressField, static_bending
from .bessel import (
    bessel_i,
    bessel_j,
    clamped_mode_shape,
    clamped_plate_eigenvalue,
    clamped_plate_root,
    mode_ladder,
)
from .quadrature import adaptive_quad, gauss_kronrod_panel
from .ritz import (
    ModalResult,
    bessel_modes,
    plate_frequency,
    rayleigh_ritz_eigenvalues,
    rayleigh_ritz_modes,
)

__all__ = [
    "ModalResult",
    "StressField",
    "adaptive_quad",
    "bessel_i",
    "bessel_j",
    "bessel_modes",
    "clamped_mode_shape",
    "clamped_plate_eigenvalue",
    "clamped_plate_root",
    "gauss_kronrod_panel",
    "mode_ladder",
    "plate_frequency",
    "rayleigh_ritz_eigenvalues",
    "rayleigh_ritz_modes",
    "static_bending",
]
