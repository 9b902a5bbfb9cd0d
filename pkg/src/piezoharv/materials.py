"""Material property records and g33-based voltage screening.

Elastic and dielectric constants for the polymer layers are literature-typical
defaults, not measured values; they live in ``data/materials_v1.json`` and can be
replaced wholesale through the ``PIEZOHARV_MATERIALS`` environment variable or
overridden per entry from a model config.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, InvalidInputError, PhysicsWarning

MATERIALS_ENV = "PIEZOHARV_MATERIALS"
DATA_VERSION = 1

VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class MaterialProps:
    """Isotropic elastic, dielectric and piezoelectric constants (SI units).

    Passive materials carry ``rel_permittivity = e31f = g33 = 0``.
    """

    name: str
    youngs_modulus: float  # Pa
    poisson_ratio: float
    density: float  # kg/m^3
    rel_permittivity: float = 0.0
    e31f: float = 0.0  # C/m^2
    g33: float = 0.0  # V m/N

    def __post_init__(self):
        if not self.name:
            raise InvalidInputError("material name must be non-empty")
        if not self.youngs_modulus > 0:
            raise InvalidInputError(f"{self.name}: youngs_modulus must be > 0")
        if not self.density > 0:
            raise InvalidInputError(f"{self.name}: density must be > 0")
        if not 0 < self.poisson_ratio < 0.5:
            raise InvalidInputError(f"{self.name}: poisson_ratio must lie in (0, 0.5)")
        if self.rel_permittivity < 0:
            raise InvalidInputError(f"{self.name}: rel_permittivity must be >= 0")
        if self.is_piezoelectric and self.rel_permittivity <= 0:
            raise InvalidInputError(
                f"{self.name}: piezoelectric materials need rel_permittivity > 0"
            )

    @property
    def is_piezoelectric(self) -> bool:
        return self.g33 != 0.0 or self.e31f != 0.0

    @property
    def plane_stress_modulus(self) -> float:
        """Biaxial bending modulus E / (1 - nu^2)."""
        return self.youngs_modulus / (1.0 - self.poisson_ratio**2)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping, where: str = "") -> MaterialProps:
        """Build from a mapping, rejecting unknown or missing fields."""
        if not isinstance(data, Mapping):
            raise ConfigError("material entry must be an object", where)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown material field(s) {unknown}", where)
        missing = sorted(known - set(data))
        if missing:
            raise ConfigError(f"missing material field(s) {missing}", where)
        for key in known - {"name"}:
            if isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
                raise ConfigError(f"field {key!r} must be a number", where)
        try:
            return cls(**{k: (v if k == "name" else float(v)) for k, v in data.items()})
        except InvalidInputError as exc:
            raise ConfigError(str(exc), where) from exc


def load_materials(path: str | os.PathLike) -> list[MaterialProps]:
    """Read a material database: a JSON array with one object per material."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in material database {path}: {exc}") from exc
    return parse_materials(raw)


def parse_materials(raw) -> list[MaterialProps]:
    if not isinstance(raw, list):
        raise ConfigError("material database must be a JSON array")
    mats = [MaterialProps.from_dict(entry, f"/{i}") for i, entry in enumerate(raw)]
    names = [m.name for m in mats]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ConfigError(f"duplicate material name(s) {dupes}")
    return mats


def dump_materials(materials: Iterable[MaterialProps], path: str | os.PathLike) -> None:
    Path(path).write_text(materials_to_json(materials), encoding="utf-8")


def materials_to_json(materials: Iterable[MaterialProps]) -> str:
    return json.dumps([m.to_dict() for m in materials], indent=2) + "\n"


def database_path() -> Path | None:
    """Override path from the environment, or ``None`` for the bundled file."""
    env = os.environ.get(MATERIALS_ENV)
    return Path(env) if env else None


def builtin_materials() -> list[MaterialProps]:
    """Return the material database in file order.

    Honours ``PIEZOHARV_MATERIALS`` when set.
    """
    override = database_path()
    if override is not None:
        return load_materials(override)
    with resources.files(__package__).joinpath(f"data/materials_v{DATA_VERSION}.json").open(
        encoding="utf-8"
    ) as fh:
        return parse_materials(json.load(fh))


def material_registry(
    materials: Iterable[MaterialProps] | None = None,
) -> dict[str, MaterialProps]:
    return {m.name: m for m in (builtin_materials() if materials is None else materials)}


def get_material(name: str, registry: Mapping[str, MaterialProps] | None = None) -> MaterialProps:
    registry = material_registry() if registry is None else registry
    try:
        return registry[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown material {name!r}; known: {sorted(registry)}"
        ) from None


def material_set_hash(materials: Iterable[MaterialProps]) -> str:
    """SHA-256 over the canonical JSON of a material set (order-insensitive)."""
    canon = sorted((m.to_dict() for m in materials), key=lambda d: d["name"])
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _check_passive(mat: MaterialProps) -> None:
    if mat.g33 == 0.0:
        warnings.warn(
            f"{mat.name} has g33 = 0; voltage estimate is zero", PhysicsWarning, stacklevel=3
        )


def voltage_estimate_stress(mat: MaterialProps, thickness: float, stress: float) -> float:
    """Open-circuit voltage ``g33 * thickness * stress`` of a film under normal stress."""
    if not thickness > 0:
        raise InvalidInputError("thickness must be > 0")
    _check_passive(mat)
    return mat.g33 * thickness * stress


def voltage_estimate_strain(mat: MaterialProps, thickness: float, strain: float) -> float:
    """Same estimate with the stress written as ``E * strain``."""
    if not thickness > 0:
        raise InvalidInputError("thickness must be > 0")
    if strain < 0:
        raise InvalidInputError("strain must be >= 0")
    _check_passive(mat)
    return mat.g33 * thickness * (mat.youngs_modulus * strain)


def rank_by_voltage(
    materials: Iterable[MaterialProps], thickness: float, stress: float
) -> list[tuple[str, float]]:
    """Piezoelectric materials sorted by descending stress-voltage estimate."""
    rows = [
        (m.name, voltage_estimate_stress(m, thickness, stress))
        for m in materials
        if m.g33 != 0.0
    ]
    return sorted(rows, key=lambda row: row[1], reverse=True)
