import copy
import json

import numpy as np
import pytest

from piezoharv.config import ANALYSIS_DEFAULTS, build_config, load_config, device_document
from piezoharv.errors import ConfigError


@pytest.fixture
def doc():
    return device_document()


def test_bundled_device(device_config):
    model = device_config.model
    assert model.plate_radius == 1.5e-3
    assert [l.material.name for l in model.stack.layers] == ["tape", "PVDF-TrFe"]
    assert model.top_electrode.material.name == "Al"
    assert model.electrode_coverage == 1.0
    assert model.damping_ratio == 0.117
    assert device_config.analysis["pressure_pa"] == 400


def test_defaults_filled(doc):
    del doc["analysis"]
    del doc["damping_ratio"]
    cfg = build_config(doc)
    assert cfg.analysis == ANALYSIS_DEFAULTS
    assert cfg.model.damping_ratio == 0.117


@pytest.mark.parametrize(
    "mutate,path",
    [
        (lambda d: d.update(colour="red"), "/"),
        (lambda d: d["stack"][1].update(thick=1), "/stack/1"),
        (lambda d: d["analysis"].update(n_freq=1), "/analysis/n_freq"),
        (lambda d: d.update(plate_radius_m=-1.0), "/plate_radius_m"),
        (lambda d: d["stack"][0].update(role="glue"), "/stack/0/role"),
        (lambda d: d["stack"][0].update(material="unobtainium"), "/stack/0/material"),
        (lambda d: d["analysis"].update(f_max_hz=10.0), "/analysis/f_max_hz"),
    ],
)
def test_errors_carry_location(doc, mutate, path):
    mutate(doc)
    with pytest.raises(ConfigError) as info:
        build_config(doc)
    assert info.value.path == path


def test_material_override(doc):
    doc["materials"] = {"PVDF-TrFe": {"youngs_modulus": 5e9}}
    cfg = build_config(doc)
    assert cfg.model.piezo_layer.material.youngs_modulus == 5e9
    assert cfg.model.piezo_layer.material.e31f == -0.015
    base = build_config(device_document())
    assert cfg.config_hash != base.config_hash


def test_new_material_needs_all_fields(doc):
    doc["materials"] = {"kapton": {"youngs_modulus": 2.5e9}}
    with pytest.raises(ConfigError) as info:
        build_config(doc)
    assert info.value.path.startswith("/materials/kapton")


def test_inline_material(doc):
    doc["stack"][0]["material"] = {
        "name": "glue", "youngs_modulus": 1e9, "poisson_ratio": 0.4, "density": 1100.0,
        "rel_permittivity": 0.0, "e31f": 0.0, "g33": 0.0,
    }
    cfg = build_config(doc)
    assert cfg.model.stack.layers[0].material.name == "glue"
    assert "glue" in [m.name for m in cfg.used_materials]


def test_inline_conflict(doc):
    doc["stack"][0]["material"] = {
        "name": "tape", "youngs_modulus": 1e9, "poisson_ratio": 0.4, "density": 1100.0,
        "rel_permittivity": 0.0, "e31f": 0.0, "g33": 0.0,
    }
    with pytest.raises(ConfigError):
        build_config(doc)


def test_two_piezo_layers_rejected(doc):
    doc["stack"][0] = {"material": "PVDF-TrFe", "thickness_m": 1e-5, "role": "piezoelectric"}
    with pytest.raises(ConfigError):
        build_config(doc)


def test_hash_stable_and_sensitive(doc):
    a = build_config(doc).config_hash
    assert build_config(copy.deepcopy(doc)).config_hash == a
    doc["plate_radius_m"] = 2e-3
    assert build_config(doc).config_hash != a


def test_frequency_grid(doc):
    cfg = build_config(doc)
    g = cfg.frequency_grid()
    assert g.size == 500 and g[0] == 100 and g[-1] == 50000
    doc["analysis"]["log_grid"] = True
    lg = build_config(doc).frequency_grid()
    np.testing.assert_allclose(np.diff(np.log(lg)), np.log(500) / 499)


def test_load_from_file(tmp_path, doc):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    assert load_config(p).config_hash == load_config().config_hash
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
