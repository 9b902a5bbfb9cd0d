"""Cross-section mechanics of a layered circular plate.

Layers are listed bottom to top. Heights are measured from the bottom face,
``h_0 = 0``, and every layer is treated as an isotropic plane-stress lamina.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import InvalidInputError
from .materials import MaterialProps

ROLES = ("structural", "piezoelectric", "electrode", "adhesive")

# Electrodes below this thickness may be dropped from the bending sums.
NEGLIGIBLE_ELECTRODE_M = 1e-6


@dataclass(frozen=True)
class LayerSpec:
    material: MaterialProps
    thickness: float  # m
    role: str = "structural"

    def __post_init__(self):
        if not self.thickness > 0:
            raise InvalidInputError(f"layer thickness must be > 0, got {self.thickness}")
        if self.role not in ROLES:
            raise InvalidInputError(f"layer role must be one of {ROLES}, got {self.role!r}")

    @property
    def mechanically_negligible(self) -> bool:
        return self.role == "electrode" and self.thickness < NEGLIGIBLE_ELECTRODE_M


@dataclass(frozen=True)
class LaminateStack:
    """Ordered layers, bottom to top."""

    layers: tuple[LayerSpec, ...]
    heights: tuple[float, ...] = field(init=False, repr=False)

    def __init__(self, layers: Sequence[LayerSpec]):
        layers = tuple(layers)
        if not layers:
            raise InvalidInputError("laminate stack must contain at least one layer")
        heights = [0.0]
        for layer in layers:
            heights.append(heights[-1] + layer.thickness)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "heights", tuple(heights))

    def __len__(self) -> int:
        return len(self.layers)

    def __add__(self, other: LaminateStack) -> LaminateStack:
        return LaminateStack(self.layers + other.layers)

    @property
    def total_thickness(self) -> float:
        return self.heights[-1]

    @property
    def midplanes(self) -> tuple[float, ...]:
        h = self.heights
        return tuple(0.5 * (h[k] + h[k + 1]) for k in range(len(self.layers)))

    @property
    def piezo_index(self) -> int:
        """Index of the single piezoelectric layer.

        Raises:
            InvalidInputError: if there is not exactly one.
        """
        idx = [k for k, layer in enumerate(self.layers) if layer.role == "piezoelectric"]
        if len(idx) != 1:
            raise InvalidInputError(
                f"stack must contain exactly one piezoelectric layer, found {len(idx)}"
            )
        return idx[0]

    @property
    def piezo_layer(self) -> LayerSpec:
        return self.layers[self.piezo_index]

    def reversed(self) -> LaminateStack:
        return LaminateStack(self.layers[::-1])

    def with_piezo_thickness(self, thickness: float) -> LaminateStack:
        k = self.piezo_index
        layers = list(self.layers)
        layers[k] = replace(layers[k], thickness=thickness)
        return LaminateStack(layers)


@dataclass(frozen=True)
class SectionProps:
    neutral_plane: float  # m, from the bottom face
    flexural_rigidity: float  # N m
    areal_mass: float  # kg/m^2
    piezo_offset: float  # m, piezo mid-plane minus neutral plane
    total_thickness: float  # m
    effective_poisson: float


def _bending_layers(stack: LaminateStack, exclude_thin_electrodes: bool):
    hs = stack.heights
    for k, layer in enumerate(stack.layers):
        if exclude_thin_electrodes and layer.mechanically_negligible:
            continue
        yield layer, hs[k], hs[k + 1]


def neutral_plane(stack: LaminateStack, exclude_thin_electrodes: bool = False) -> float:
    """Stiffness-weighted mean of layer mid-planes."""
    num = den = 0.0
    for layer, lo, hi in _bending_layers(stack, exclude_thin_electrodes):
        weight = layer.thickness * layer.material.plane_stress_modulus
        num += weight * 0.5 * (lo + hi)
        den += weight
    if den == 0.0:
        raise InvalidInputError("no load-bearing layers in stack")
    return num / den


def flexural_rigidity(
    stack: LaminateStack, z: float | None = None, exclude_thin_electrodes: bool = False
) -> float:
    """Bending stiffness about the neutral plane ``z`` (computed when omitted)."""
    if z is None:
        z = neutral_plane(stack, exclude_thin_electrodes)
    total = 0.0
    for layer, lo, hi in _bending_layers(stack, exclude_thin_electrodes):
        total += ((hi - z) ** 3 - (lo - z) ** 3) / 3.0 * layer.material.plane_stress_modulus
    return total


def areal_mass(stack: LaminateStack) -> float:
    """Mass per unit area, sum of density times thickness."""
    return math.fsum(layer.material.density * layer.thickness for layer in stack.layers)


def effective_poisson(stack: LaminateStack, exclude_thin_electrodes: bool = False) -> float:
    """Poisson ratio averaged with the same weights as the neutral plane."""
    num = den = 0.0
    for layer, _, _ in _bending_layers(stack, exclude_thin_electrodes):
        weight = layer.thickness * layer.material.plane_stress_modulus
        num += weight * layer.material.poisson_ratio
        den += weight
    return num / den


def section_props(stack: LaminateStack, exclude_thin_electrodes: bool = False) -> SectionProps:
    z = neutral_plane(stack, exclude_thin_electrodes)
    d = flexural_rigidity(stack, z, exclude_thin_electrodes)
    try:
        z_p = stack.midplanes[stack.piezo_index] - z
    except InvalidInputError:
        z_p = 0.0
    return SectionProps(
        neutral_plane=z,
        flexural_rigidity=d,
        areal_mass=areal_mass(stack),
        piezo_offset=z_p,
        total_thickness=stack.total_thickness,
        effective_poisson=effective_poisson(stack, exclude_thin_electrodes),
    )


def disk_mass(
    stack: LaminateStack, r: float, top_electrode: LayerSpec | None = None, r_te: float = 0.0
) -> float:
    """Mass of the full-radius stack plus a partial top electrode of radius ``r_te``."""
    if not r > 0:
        raise InvalidInputError("plate radius must be > 0")
    if not 0 <= r_te <= r:
        raise InvalidInputError(f"top electrode radius {r_te} must lie in [0, r={r}]")
    m = areal_mass(stack) * math.pi * r**2
    if top_electrode is not None:
        m += top_electrode.material.density * top_electrode.thickness * math.pi * r_te**2
    return m


# 2 * int_0^1 (1 - x^2)^4 x dx; substitute u = 1 - x^2.
MODAL_MASS_RATIO = 0.2


def modal_mass(m_d: float) -> float:
    if m_d < 0:
        raise InvalidInputError("disk mass must be >= 0")
    return m_d * MODAL_MASS_RATIO
