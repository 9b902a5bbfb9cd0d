"""Clamped circular plate under uniform pressure: deflection, moments, von Mises."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..laminate import SectionProps


@dataclass(frozen=True)
class StressField:
    radii: np.ndarray  # m
    deflection: np.ndarray  # m
    radial_moment: np.ndarray  # N m / m
    tangential_moment: np.ndarray  # N m / m
    sigma_r: np.ndarray  # Pa, top surface
    sigma_t: np.ndarray  # Pa, top surface
    von_mises_top_surface: np.ndarray  # Pa


def static_bending(
    section: SectionProps, r: float, p: float, samples: int = 51
) -> tuple[float, StressField]:
    """Classical small-deflection solution, sampled at ``samples`` radii.

    Every field is the unit-pressure field multiplied by ``p``, so fields at
    different pressures are exact multiples of one another. Surface stresses use
    the total stack thickness, ``sigma = 6 M / t^2``.
    """
    if p < 0:
        raise InvalidInputError("pressure must be >= 0")
    if not r > 0:
        raise InvalidInputError("plate radius must be > 0")
    nu = section.effective_poisson
    D = section.flexural_rigidity
    t = section.total_thickness
    rho = np.linspace(0.0, r, samples)

    w_unit = (r**2 - rho**2) ** 2 / (64.0 * D)
    mr_unit = (r**2 * (1 + nu) - rho**2 * (3 + nu)) / 16.0
    mt_unit = (r**2 * (1 + nu) - rho**2 * (1 + 3 * nu)) / 16.0
    sr_unit = 6.0 * mr_unit / t**2
    st_unit = 6.0 * mt_unit / t**2
    vm_unit = np.sqrt(sr_unit**2 - sr_unit * st_unit + st_unit**2)

    field = StressField(
        radii=rho,
        deflection=p * w_unit,
        radial_moment=p * mr_unit,
        tangential_moment=p * mt_unit,
        sigma_r=p * sr_unit,
        sigma_t=p * st_unit,
        von_mises_top_surface=p * vm_unit,
    )
    w0 = p * (r**4 / (64.0 * D))
    return w0, field
