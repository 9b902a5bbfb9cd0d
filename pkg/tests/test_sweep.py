import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from piezoharv.errors import InvalidInputError, OverdampedError
from piezoharv.laminate import LaminateStack, LayerSpec
from piezoharv.lem import HarvesterModel, electrical_coupling
from piezoharv.materials import MaterialProps
from piezoharv.plate_oracle import static_bending
from piezoharv.sweep import (
    SweepPointError,
    SweepSpec,
    golden_section_max,
    optimize_coverage,
    run_sweep,
)

HEALTH = [HealthCheck.function_scoped_fixture]


def test_radius_sweep_fn_r2_constant(coupled_model):
    res = run_sweep(SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 11))
    assert len(res) == 11
    prod = res.columns["f_n_hz"] * res.values**2
    np.testing.assert_allclose(prod, prod[0], rtol=1e-9)


def test_thickness_sweep_single_layer(make_single_layer):
    model = make_single_layer()
    res = run_sweep(SweepSpec(model, "piezo_thickness", 5e-6, 200e-6, 17))
    ratio = res.columns["f_n_hz"] / res.values
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


def test_pressure_sweep_linear(coupled_model):
    res = run_sweep(SweepSpec(coupled_model, "pressure", 0.0, 1000.0, 21, outputs=("V_oc", "w0")))
    v = res.columns["voc_v"]
    slope = v[-1] / res.values[-1]
    np.testing.assert_allclose(v, slope * res.values, rtol=1e-14, atol=0)
    assert v[0] == 0.0


def test_point_radius_matches_plate_theory(coupled_model):
    r = coupled_model.plate_radius
    res = run_sweep(
        SweepSpec(coupled_model, "point_radius", 0.0, r, 51, outputs=("displacement",), pressure=400.0)
    )
    _, field = static_bending(coupled_model.section, r, 400.0, samples=51)
    np.testing.assert_allclose(res.columns["displacement_m"], field.deflection, rtol=1e-12, atol=1e-24)


def test_grid_endpoints_pinned(coupled_model):
    spec = SweepSpec(coupled_model, "plate_radius", 0.1e-3, 0.7e-3, 7, log_spacing=True)
    g = spec.grid()
    assert g[0] == 0.1e-3 and g[-1] == 0.7e-3
    assert np.all(np.diff(g) > 0)


def test_optimize_coverage(device_model):
    gamma, mag = optimize_coverage(device_model)
    assert gamma == pytest.approx(1 / math.sqrt(2), abs=1e-4)
    assert mag == pytest.approx(abs(electrical_coupling(device_model.with_coverage(gamma))[1]))


def _with_e31f(model, e31f):
    layers = []
    for layer in model.stack.layers:
        if layer.role == "piezoelectric":
            m = layer.material
            mat = MaterialProps(m.name, m.youngs_modulus, m.poisson_ratio, m.density,
                                m.rel_permittivity, e31f, m.g33)
            layer = LayerSpec(mat, layer.thickness, layer.role)
        layers.append(layer)
    return HarvesterModel(LaminateStack(layers), model.plate_radius, model.electrode_coverage,
                          model.damping_ratio, model.top_electrode)


@settings(max_examples=30, suppress_health_check=HEALTH)
@given(k=st.floats(0.1, 10.0))
def test_voltage_linear_in_e31f(coupled_model, k):
    base = coupled_model.piezo_layer.material.e31f
    spec = lambda m: SweepSpec(m, "pressure", 100.0, 500.0, 5, outputs=("V_oc",))  # noqa: E731
    a = run_sweep(spec(coupled_model)).columns["voc_v"]
    b = run_sweep(spec(_with_e31f(coupled_model, k * base))).columns["voc_v"]
    np.testing.assert_allclose(b, k * a, rtol=1e-12)


def test_coverage_sweep_unimodal(device_model):
    res = run_sweep(SweepSpec(device_model, "electrode_coverage", 0.05, 1.0, 96, outputs=("V_oc",)))
    mag = np.abs(res.columns["voc_v"])
    k = int(np.argmax(mag))
    assert np.all(np.diff(mag[: k + 1]) >= 0)
    assert np.all(np.diff(mag[k:]) <= 0)
    assert mag[-1] == 0.0


def test_radius_sweep_monotone(coupled_model):
    res = run_sweep(SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 11, outputs=("f_n", "w0")))
    assert np.all(np.diff(res.columns["f_n_hz"]) < 0)
    assert np.all(np.diff(res.columns["w0_m"]) > 0)


def test_zeta_table(coupled_model):
    table = ((0.5e-3, 0.05), (3e-3, 0.25))
    res = run_sweep(SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 6,
                              outputs=("zeta", "Q"), zeta_table=table))
    np.testing.assert_allclose(res.columns["zeta"], np.linspace(0.05, 0.25, 6), rtol=1e-12)
    np.testing.assert_allclose(res.columns["q"], 1 / (2 * res.columns["zeta"]), rtol=1e-15)


@pytest.mark.parametrize("workers", [2, 3, 7])
def test_parallel_identical(coupled_model, workers):
    spec = SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 23, outputs=("f_n", "V_oc", "w0"))
    assert run_sweep(spec).to_csv() == run_sweep(spec, workers=workers).to_csv()


def test_csv_layout(coupled_model):
    res = run_sweep(SweepSpec(coupled_model, "pressure", 0.0, 100.0, 3, outputs=("V_oc", "f_n")))
    lines = res.to_csv().splitlines()
    assert lines[0] == "pressure_pa,voc_v,f_n_hz"
    assert len(lines) == 4
    assert [float(x) for x in lines[2].split(",")][0] == 50.0
    recs = res.to_records()
    assert recs[1]["pressure_pa"] == 50.0


def test_provenance_stable(coupled_model):
    spec = SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 5)
    a, b = run_sweep(spec), run_sweep(spec)
    assert a.provenance == b.provenance
    assert a.sidecar_json() == b.sidecar_json()
    assert len(a.provenance["material_set_hash"]) == 64
    other = run_sweep(SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 6))
    assert other.provenance["config_hash"] != a.provenance["config_hash"]
    assert other.provenance["material_set_hash"] == a.provenance["material_set_hash"]
    assert run_sweep(spec, config_hash="abc").provenance["config_hash"] == "abc"


def test_point_error_reports_index(coupled_model):
    # damping interpolates past 1 at the last grid point
    table = ((0.5e-3, 0.1), (3e-3, 1.5))
    spec = SweepSpec(coupled_model, "plate_radius", 0.5e-3, 3e-3, 3, outputs=("Q",), zeta_table=table)
    with pytest.raises(SweepPointError) as info:
        run_sweep(spec)
    assert info.value.index == 2
    assert info.value.value == 3e-3
    assert isinstance(info.value.__cause__, OverdampedError)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(parameter="mass", start=1, stop=2, steps=3),
        dict(parameter="plate_radius", start=1e-3, stop=2e-3, steps=1),
        dict(parameter="plate_radius", start=2e-3, stop=1e-3, steps=3),
        dict(parameter="plate_radius", start=1e-3, stop=2e-3, steps=3, outputs=("power",)),
        dict(parameter="plate_radius", start=0.0, stop=2e-3, steps=3),
        dict(parameter="electrode_coverage", start=0.5, stop=1.2, steps=3),
        dict(parameter="point_radius", start=0.0, stop=1.0, steps=3),
        dict(parameter="pressure", start=-1.0, stop=1.0, steps=3),
        dict(parameter="pressure", start=0.0, stop=1.0, steps=3, log_spacing=True),
    ],
)
def test_spec_validation(coupled_model, kwargs):
    with pytest.raises(InvalidInputError):
        SweepSpec(coupled_model, **kwargs)


def test_golden_section():
    assert golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0) == pytest.approx(0.3, abs=1e-8)
