"""Stable hashes embedded in every report."""

from __future__ import annotations

import hashlib
import json

from .materials import MaterialProps, material_set_hash


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def model_materials(model) -> list[MaterialProps]:
    """Distinct materials referenced by a model, in first-use order."""
    seen: dict[str, MaterialProps] = {}
    layers = list(model.stack.layers)
    if model.top_electrode is not None:
        layers.append(model.top_electrode)
    for layer in layers:
        seen.setdefault(layer.material.name, layer.material)
    return list(seen.values())


def model_materials_hash(model) -> str:
    return material_set_hash(model_materials(model))
