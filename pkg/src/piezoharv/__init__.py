"""Lumped-element model of a clamped circular piezoelectric wind harvester."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    ConvergenceError,
    DomainError,
    InvalidInputError,
    NumericError,
    PhysicsWarning,
    PiezoHarvError,
)
from .laminate import LaminateStack, LayerSpec, SectionProps, section_props  # noqa: E402
from .lem import (  # noqa: E402
    FrequencyResponse,
    HarvesterModel,
    LemParams,
    analyze,
    frequency_response,
    voltage_at_pressure,
)
from .materials import MaterialProps, builtin_materials, get_material  # noqa: E402

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FrequencyResponse",
    "HarvesterModel",
    "InvalidInputError",
    "LaminateStack",
    "LayerSpec",
    "LemParams",
    "MaterialProps",
    "NumericError",
    "PhysicsWarning",
    "PiezoHarvError",
    "SectionProps",
    "analyze",
    "builtin_materials",
    "frequency_response",
    "get_material",
    "section_props",
    "voltage_at_pressure",
]
