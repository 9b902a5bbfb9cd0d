"""Lumped-element electromechanical model of a clamped circular harvester.

The plate is reduced to one degree of freedom, the centre deflection ``w0``,
with the assumed shape ``phi(x) = (1 - x^2)^2`` on the normalised radius
``x = rho / r``. Mechanical stiffness, modal force and coupling all follow from
integrals of ``phi``; the electrical side is the film capacitance under the top
electrode.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidInputError, OverdampedError, PhysicsWarning
from .laminate import (
    LaminateStack,
    LayerSpec,
    SectionProps,
    disk_mass,
    modal_mass,
    section_props,
)
from .materials import VACUUM_PERMITTIVITY, MaterialProps
from .plate_oracle.bessel import clamped_plate_eigenvalue

STRAIN_INTEGRAL = 32.0 / 3.0
DEFAULT_DAMPING_RATIO = 0.117

_ZERO_OFFSET_RTOL = 1e-9


def fundamental_eigenvalue() -> float:
    """lambda_01^2 of the clamped plate, from the Bessel characteristic equation."""
    return clamped_plate_eigenvalue(0, 1)


# --- shape function ---------------------------------------------------------

def _check_unit(x):
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise DomainError("normalised radius must lie in [0, 1]")
    return arr


def shape_function(x):
    """phi(x) = (1 - x^2)^2; scalar in, scalar out."""
    arr = _check_unit(x)
    out = (1.0 - arr**2) ** 2
    return float(out) if out.ndim == 0 else out


def shape_slope(x):
    arr = _check_unit(x)
    out = -4.0 * arr * (1.0 - arr**2)
    return float(out) if out.ndim == 0 else out


def shape_curvature(x):
    arr = _check_unit(x)
    out = 12.0 * arr**2 - 4.0
    return float(out) if out.ndim == 0 else out


# --- integrals ---------------------------------------------------------------

def _check_poisson(nu: float) -> None:
    if not 0 < nu < 0.5:
        raise DomainError(f"Poisson ratio must lie in (0, 0.5), got {nu}")


def coupling_integral(gamma: float, nu: float) -> float:
    """Piezoelectric coupling integral over the electrode, 0 <= x <= gamma.

    The integrand ``x phi'' + phi'`` is the derivative of ``x phi'``, so the
    integral is ``gamma phi'(gamma) / (1 - nu) = -4 gamma^2 (1 - gamma^2) / (1 - nu)``.
    It vanishes for full coverage because the curvature changes sign at
    ``x = 1 / sqrt(3)`` and the two regions cancel.
    """
    if not 0 < gamma <= 1:
        raise DomainError(f"electrode coverage must lie in (0, 1], got {gamma}")
    _check_poisson(nu)
    return -4.0 * gamma**2 * (1.0 - gamma**2) / (1.0 - nu) + 0.0


def strain_integral(nu: float) -> float:
    """Strain-energy integral ``int_0^1 [x phi''^2 + 2 nu phi' phi'' + phi'^2 / x] dx``.

    The three terms give 8, ``nu [phi'^2]_0^1 = 0`` and 8/3, so the result is
    32/3 for every admissible ``nu``.
    """
    _check_poisson(nu)
    return STRAIN_INTEGRAL


def strain_integrand(x, nu: float):
    """Integrand of :func:`strain_integral`, with the removable 0/0 at x = 0 filled in."""
    arr = np.asarray(x, dtype=float)
    d1 = -4.0 * arr * (1.0 - arr**2)
    d2 = 12.0 * arr**2 - 4.0
    # phi'^2 / x = 16 x (1 - x^2)^2
    out = arr * d2**2 + 2.0 * nu * d1 * d2 + 16.0 * arr * (1.0 - arr**2) ** 2
    return float(out) if out.ndim == 0 else out


def coupling_integrand(x, nu: float):
    arr = np.asarray(x, dtype=float)
    out = (arr * (12.0 * arr**2 - 4.0) - 4.0 * arr * (1.0 - arr**2)) / (1.0 - nu)
    return float(out) if out.ndim == 0 else out


# --- lumped elements -----------------------------------------------------------

def capacitance(mat: MaterialProps, r_pm: float, t_pvdf: float) -> float:
    """Parallel-plate capacitance of the film under an electrode of radius ``r_pm``."""
    if not r_pm > 0 or not t_pvdf > 0:
        raise InvalidInputError("electrode radius and film thickness must be > 0")
    if not mat.rel_permittivity > 0:
        raise InvalidInputError(f"{mat.name} is not a dielectric (rel_permittivity = 0)")
    return VACUUM_PERMITTIVITY * mat.rel_permittivity * math.pi * r_pm**2 / t_pvdf


def compliance(section: SectionProps, r: float, strain_int: float = STRAIN_INTEGRAL) -> float:
    """Mechanical compliance ``1/k_m = r^2 / (2 pi D I_e)`` in m/N."""
    if not section.flexural_rigidity > 0 or not strain_int > 0:
        raise InvalidInputError("flexural rigidity and strain integral must be > 0")
    return r**2 / (2.0 * math.pi * section.flexural_rigidity * strain_int)


def modal_force_per_pressure(r: float) -> float:
    """Generalised force of a unit uniform pressure on phi: 2 pi r^2 int phi x dx."""
    return math.pi * r**2 / 3.0


def coupling_ratio(coupling_int: float, e31f: float, z_p: float) -> float:
    """Charge per unit centre deflection, ``2 pi I_m e31f z_p`` in C/m."""
    if z_p == 0.0:
        warnings.warn(
            "piezoelectric layer lies on the neutral plane; coupling is zero",
            PhysicsWarning,
            stacklevel=2,
        )
    return 2.0 * math.pi * coupling_int * e31f * z_p


def piezo_moment(e31f: float, v_in: float, z_p: float) -> float:
    """Bending moment per unit length from a drive voltage ``v_in``."""
    return -e31f * v_in * z_p


def natural_frequency(section: SectionProps, r: float) -> float:
    """Fundamental frequency in Hz, ``lambda_01^2 / (2 pi r^2) sqrt(D / mu)``."""
    if not section.flexural_rigidity > 0 or not section.areal_mass > 0:
        raise InvalidInputError("flexural rigidity and areal mass must be > 0")
    return fundamental_eigenvalue() / (2.0 * math.pi * r**2) * math.sqrt(
        section.flexural_rigidity / section.areal_mass
    )


def damping_q(zeta: float) -> float:
    if not zeta > 0:
        raise DomainError("damping ratio must be > 0")
    if zeta >= 1:
        raise OverdampedError(f"damping ratio {zeta} is not underdamped")
    return 1.0 / (2.0 * zeta)


# --- model aggregate -------------------------------------------------------------

@dataclass(frozen=True)
class HarvesterModel:
    """Plate geometry, layup, electrode coverage and damping.

    ``top_electrode`` is an optional partial layer of radius
    ``electrode_coverage * plate_radius``; it adds mass but no stiffness.
    """

    stack: LaminateStack
    plate_radius: float  # m
    electrode_coverage: float = 1.0
    damping_ratio: float = DEFAULT_DAMPING_RATIO
    top_electrode: LayerSpec | None = None
    exclude_thin_electrodes: bool = False

    def __post_init__(self):
        if not self.plate_radius > 0:
            raise InvalidInputError("plate radius must be > 0")
        if not 0 < self.electrode_coverage <= 1:
            raise DomainError("electrode coverage must lie in (0, 1]")
        if not 0 < self.damping_ratio < 1:
            raise OverdampedError("damping ratio must lie in (0, 1)")
        self.stack.piezo_index  # raises unless exactly one active layer

    @property
    def top_electrode_radius(self) -> float:
        return self.electrode_coverage * self.plate_radius

    @property
    def piezo_layer(self) -> LayerSpec:
        return self.stack.piezo_layer

    @cached_property
    def section(self) -> SectionProps:
        sec = section_props(self.stack, self.exclude_thin_electrodes)
        if abs(sec.piezo_offset) <= _ZERO_OFFSET_RTOL * sec.total_thickness:
            sec = replace(sec, piezo_offset=0.0)
        return sec

    @property
    def effective_poisson(self) -> float:
        return self.section.effective_poisson

    def with_radius(self, r: float) -> HarvesterModel:
        return replace(self, plate_radius=r)

    def with_piezo_thickness(self, t: float) -> HarvesterModel:
        return replace(self, stack=self.stack.with_piezo_thickness(t))

    def with_coverage(self, gamma: float) -> HarvesterModel:
        return replace(self, electrode_coverage=gamma)

    def with_damping(self, zeta: float) -> HarvesterModel:
        return replace(self, damping_ratio=zeta)


@dataclass(frozen=True)
class LemParams:
    capacitance: float  # F
    coupling_integral: float
    strain_integral: float
    compliance: float  # m/N
    stiffness: float  # N/m
    coupling_ratio: float  # C/m
    natural_frequency: float  # Hz
    disk_mass: float  # kg
    modal_mass: float  # kg
    damping_ratio: float
    quality_factor: float
    piezo_moment_coeff: float  # N m/m per volt
    neutral_plane: float  # m
    flexural_rigidity: float  # N m
    areal_mass: float  # kg/m^2
    piezo_offset: float  # m
    effective_poisson: float
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["warnings"] = list(self.warnings)
        return d


def electrical_coupling(model: HarvesterModel) -> tuple[float, float, float]:
    """(I_m, eta, C) for a model, without the zero-offset warning."""
    sec = model.section
    piezo = model.piezo_layer
    i_m = coupling_integral(model.electrode_coverage, sec.effective_poisson)
    eta = 2.0 * math.pi * i_m * piezo.material.e31f * sec.piezo_offset
    c = capacitance(piezo.material, model.top_electrode_radius, piezo.thickness)
    return i_m, eta, c


def analyze(model: HarvesterModel) -> LemParams:
    """Derive every lumped element; degenerate coupling is reported, not raised."""
    sec = model.section
    piezo = model.piezo_layer
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        i_m = coupling_integral(model.electrode_coverage, sec.effective_poisson)
        i_e = strain_integral(sec.effective_poisson)
        comp = compliance(sec, model.plate_radius, i_e)
        eta = coupling_ratio(i_m, piezo.material.e31f, sec.piezo_offset)
    notes.extend(str(w.message) for w in caught)
    if i_m == 0.0:
        notes.append("full electrode coverage cancels the coupling integral; coupling is zero")
    if piezo.material.e31f == 0.0:
        notes.append(f"{piezo.material.name} has e31f = 0; coupling is zero")
    for msg in notes:
        warnings.warn(msg, PhysicsWarning, stacklevel=2)

    m_d = disk_mass(model.stack, model.plate_radius, model.top_electrode, model.top_electrode_radius)
    return LemParams(
        capacitance=capacitance(piezo.material, model.top_electrode_radius, piezo.thickness),
        coupling_integral=i_m,
        strain_integral=i_e,
        compliance=comp,
        stiffness=1.0 / comp,
        coupling_ratio=eta,
        natural_frequency=natural_frequency(sec, model.plate_radius),
        disk_mass=m_d,
        modal_mass=modal_mass(m_d),
        damping_ratio=model.damping_ratio,
        quality_factor=damping_q(model.damping_ratio),
        piezo_moment_coeff=piezo_moment(piezo.material.e31f, 1.0, sec.piezo_offset),
        neutral_plane=sec.neutral_plane,
        flexural_rigidity=sec.flexural_rigidity,
        areal_mass=sec.areal_mass,
        piezo_offset=sec.piezo_offset,
        effective_poisson=sec.effective_poisson,
        warnings=tuple(notes),
    )


# --- dynamics ---------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyResponse:
    frequencies: np.ndarray  # Hz
    amplitude: np.ndarray  # m/Pa
    phase: np.ndarray  # rad
    voltage: np.ndarray  # V/Pa

    def rows(self):
        return zip(self.frequencies, self.amplitude, self.phase, self.voltage)


def static_deflection_per_pressure(model: HarvesterModel) -> float:
    """Centre deflection per pascal through modal force times compliance."""
    r = model.plate_radius
    return modal_force_per_pressure(r) * compliance(model.section, r)


def _transfer(f: np.ndarray, static: float, f_n: float, zeta: float) -> np.ndarray:
    s = f / f_n
    return static / (1.0 - s**2 + 2j * zeta * s)


def frequency_response(
    model: HarvesterModel, f_grid, workers: int = 1
) -> FrequencyResponse:
    """Centre deflection and open-circuit voltage per unit pressure on ``f_grid``.

    ``workers > 1`` evaluates contiguous chunks concurrently; the operation is
    elementwise, so the result is identical to a sequential evaluation.
    """
    f = np.asarray(f_grid, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise InvalidInputError("frequency grid must be a non-empty 1-D array")
    if f.size > 1 and np.any(np.diff(f) <= 0):
        raise InvalidInputError("frequency grid must be strictly increasing")
    if f[0] < 0:
        raise InvalidInputError("frequencies must be >= 0")

    static = static_deflection_per_pressure(model)
    f_n = natural_frequency(model.section, model.plate_radius)
    zeta = model.damping_ratio
    if workers > 1 and f.size > 1:
        chunks = np.array_split(f, min(workers, f.size))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _transfer(c, static, f_n, zeta), chunks))
        h = np.concatenate(parts)
    else:
        h = _transfer(f, static, f_n, zeta)
    _, eta, c = electrical_coupling(model)
    amp = np.abs(h)
    return FrequencyResponse(
        frequencies=f,
        amplitude=amp,
        phase=np.angle(h),
        voltage=eta * amp / c,
    )


def deflection_at_pressure(model: HarvesterModel, p: float, f: float | None = None) -> float:
    """Centre deflection amplitude; ``f=None`` means static."""
    if p < 0:
        raise InvalidInputError("pressure must be >= 0")
    if f is None:
        return p * static_deflection_per_pressure(model)
    return p * float(frequency_response(model, [f]).amplitude[0])


def voltage_at_pressure(model: HarvesterModel, p: float, f: float | None = None) -> float:
    """Open-circuit voltage ``eta w / C`` at pressure ``p``; ``f=None`` means static."""
    if p < 0:
        raise InvalidInputError("pressure must be >= 0")
    _, eta, c = electrical_coupling(model)
    if f is None:
        w_unit = static_deflection_per_pressure(model)
    else:
        w_unit = float(frequency_response(model, [f]).amplitude[0])
    return p * (eta * w_unit / c)


def displacement_at(model: HarvesterModel, p: float, rho: float) -> float:
    """Static deflection at radius ``rho`` under pressure ``p``."""
    r = model.plate_radius
    if not 0 <= rho <= r:
        raise InvalidInputError(f"point radius {rho} outside [0, {r}]")
    return deflection_at_pressure(model, p) * shape_function(min(rho / r, 1.0))


def half_power_q(
    response: FrequencyResponse, quantity: str = "velocity", f_center: float | None = None
) -> float:
    """Quality factor ``f_center / bandwidth`` from the half-power points of a sampled response.

    ``quantity="velocity"`` uses ``2 pi f |H|``, whose half-power bandwidth is
    exactly ``f_n / Q`` for a second-order resonator; ``"displacement"`` uses
    ``|H|`` directly and underestimates Q by a few percent once ``zeta`` exceeds
    about 0.1. Crossings are located by linear interpolation. Without
    ``f_center`` the centre is the geometric mean of the crossings (velocity) or
    the sampled peak (displacement).
    """
    f = response.frequencies
    if quantity == "velocity":
        y = 2.0 * math.pi * f * response.amplitude
    elif quantity == "displacement":
        y = response.amplitude
    else:
        raise InvalidInputError("quantity must be 'velocity' or 'displacement'")
    k = int(np.argmax(y))
    level = y[k] / math.sqrt(2.0)
    if k == 0 or k == len(y) - 1 or y[0] >= level or y[-1] >= level:
        raise InvalidInputError("grid does not bracket both half-power points")
    lo = k
    while y[lo] >= level:
        lo -= 1
    hi = k
    while y[hi] >= level:
        hi += 1

    def cross(i, j):
        return f[i] + (level - y[i]) * (f[j] - f[i]) / (y[j] - y[i])

    f_lo = cross(lo, lo + 1)
    f_hi = cross(hi - 1, hi)
    if f_center is None:
        f_center = math.sqrt(f_lo * f_hi) if quantity == "velocity" else f[k]
    return f_center / (f_hi - f_lo)
