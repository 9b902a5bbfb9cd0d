"""Model config documents: schema validation and model construction.

A config is one JSON object, SI units throughout. Unknown keys anywhere are
rejected with their location.
"""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

import jsonschema
import numpy as np

from .errors import ConfigError, InvalidInputError
from .laminate import ROLES, LaminateStack, LayerSpec
from .lem import DEFAULT_DAMPING_RATIO, HarvesterModel
from .materials import MaterialProps, builtin_materials
from .provenance import canonical_hash, model_materials

_NUMBER = {"type": "number"}
_MATERIAL_FIELDS = {
    "name": {"type": "string", "minLength": 1},
    "youngs_modulus": _NUMBER,
    "poisson_ratio": _NUMBER,
    "density": _NUMBER,
    "rel_permittivity": _NUMBER,
    "e31f": _NUMBER,
    "g33": _NUMBER,
}
_INLINE_MATERIAL = {
    "type": "object",
    "properties": _MATERIAL_FIELDS,
    "required": list(_MATERIAL_FIELDS),
    "additionalProperties": False,
}
_MATERIAL_REF = {"oneOf": [{"type": "string", "minLength": 1}, _INLINE_MATERIAL]}

SCHEMA = {
    "type": "object",
    "properties": {
        "materials": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {k: v for k, v in _MATERIAL_FIELDS.items() if k != "name"},
                "additionalProperties": False,
            },
        },
        "stack": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "material": _MATERIAL_REF,
                    "thickness_m": {"type": "number", "exclusiveMinimum": 0},
                    "role": {"enum": list(ROLES)},
                },
                "required": ["material", "thickness_m", "role"],
                "additionalProperties": False,
            },
        },
        "top_electrode": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "properties": {
                        "material": _MATERIAL_REF,
                        "thickness_m": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["material", "thickness_m"],
                    "additionalProperties": False,
                },
            ]
        },
        "plate_radius_m": {"type": "number", "exclusiveMinimum": 0},
        "electrode_coverage": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "damping_ratio": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "exclude_thin_electrodes": {"type": "boolean"},
        "analysis": {
            "type": "object",
            "properties": {
                "pressure_pa": {"type": "number", "minimum": 0},
                "f_min_hz": {"type": "number", "minimum": 0},
                "f_max_hz": {"type": "number", "exclusiveMinimum": 0},
                "n_freq": {"type": "integer", "minimum": 2},
                "log_grid": {"type": "boolean"},
                "n_modes": {"type": "integer", "minimum": 1},
                "excitation_hz": {"type": ["number", "null"], "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "required": ["stack", "plate_radius_m"],
    "additionalProperties": False,
}

ANALYSIS_DEFAULTS = {
    "pressure_pa": 400.0,
    "f_min_hz": 100.0,
    "f_max_hz": 50000.0,
    "n_freq": 500,
    "log_grid": False,
    "n_modes": 4,
    "excitation_hz": None,
}


@dataclass(frozen=True)
class ModelConfig:
    document: dict  # validated, with defaults filled in
    model: HarvesterModel
    materials: dict[str, MaterialProps]
    analysis: dict = field(default_factory=dict)

    @property
    def used_materials(self) -> list[MaterialProps]:
        """Material records the model references, sorted by name."""
        return sorted(model_materials(self.model), key=lambda m: m.name)

    @property
    def config_hash(self) -> str:
        """Hash of the filled-in document together with the material records it resolved to."""
        return canonical_hash(
            {"config": self.document, "materials": [m.to_dict() for m in self.used_materials]}
        )

    def frequency_grid(self) -> np.ndarray:
        a = self.analysis
        if a["log_grid"]:
            lo = max(a["f_min_hz"], 1e-3)
            return np.geomspace(lo, a["f_max_hz"], a["n_freq"])
        return np.linspace(a["f_min_hz"], a["f_max_hz"], a["n_freq"])


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def validate(document) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, _pointer(err.absolute_path))


def _resolve_materials(document: Mapping, base: list[MaterialProps]) -> dict[str, MaterialProps]:
    registry = {m.name: m for m in base}
    for name, overrides in document.get("materials", {}).items():
        where = f"/materials/{name}"
        if name in registry:
            merged = {**registry[name].to_dict(), **overrides}
        else:
            merged = {"name": name, **overrides}
        registry[name] = MaterialProps.from_dict(merged, where)
    return registry


def _material(ref, registry: dict[str, MaterialProps], where: str) -> MaterialProps:
    if isinstance(ref, str):
        if ref not in registry:
            raise ConfigError(f"unknown material {ref!r}", where)
        return registry[ref]
    mat = MaterialProps.from_dict(ref, where)
    if mat.name in registry and registry[mat.name] != mat:
        raise ConfigError(f"inline material {mat.name!r} conflicts with the database", where)
    registry[mat.name] = mat
    return mat


def build_config(document: Mapping, base_materials: list[MaterialProps] | None = None) -> ModelConfig:
    """Validate a config document and build the model it describes."""
    validate(document)
    doc = copy.deepcopy(dict(document))
    doc.setdefault("electrode_coverage", 1.0)
    doc.setdefault("damping_ratio", DEFAULT_DAMPING_RATIO)
    doc.setdefault("exclude_thin_electrodes", False)
    doc.setdefault("top_electrode", None)
    doc["analysis"] = {**ANALYSIS_DEFAULTS, **doc.get("analysis", {})}
    analysis = doc["analysis"]
    if analysis["f_max_hz"] <= analysis["f_min_hz"]:
        raise ConfigError("f_max_hz must exceed f_min_hz", "/analysis/f_max_hz")

    registry = _resolve_materials(doc, builtin_materials() if base_materials is None else base_materials)
    try:
        layers = [
            LayerSpec(
                _material(entry["material"], registry, f"/stack/{i}/material"),
                float(entry["thickness_m"]),
                entry["role"],
            )
            for i, entry in enumerate(doc["stack"])
        ]
        top = doc["top_electrode"]
        top_layer = None
        if top is not None:
            top_layer = LayerSpec(
                _material(top["material"], registry, "/top_electrode/material"),
                float(top["thickness_m"]),
                "electrode",
            )
        model = HarvesterModel(
            stack=LaminateStack(layers),
            plate_radius=float(doc["plate_radius_m"]),
            electrode_coverage=float(doc["electrode_coverage"]),
            damping_ratio=float(doc["damping_ratio"]),
            top_electrode=top_layer,
            exclude_thin_electrodes=bool(doc["exclude_thin_electrodes"]),
        )
    except ConfigError:
        raise
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from exc
    return ModelConfig(document=doc, model=model, materials=registry, analysis=analysis)


def load_config(path: str | os.PathLike | None = None) -> ModelConfig:
    """Load a config file; ``None`` loads the bundled fabricated-device config."""
    try:
        if path is None:
            text = resources.files(__package__).joinpath("data/fabricated_device.json").read_text(
                encoding="utf-8"
            )
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return build_config(document)


def device_document() -> dict:
    text = resources.files(__package__).joinpath("data/fabricated_device.json").read_text(encoding="utf-8")
    return json.loads(text)
