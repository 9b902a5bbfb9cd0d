import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from piezoharv.errors import InvalidInputError
from piezoharv.lem import static_deflection_per_pressure
from piezoharv.plate_oracle import static_bending


def test_zero_pressure(device_model):
    w0, field = static_bending(device_model.section, 1.5e-3, 0.0)
    assert w0 == 0.0
    assert not np.any(field.deflection)
    assert not np.any(field.von_mises_top_surface)


def test_centre_deflection_formula(device_model):
    sec = device_model.section
    w0, field = static_bending(sec, 1.5e-3, 400.0)
    assert w0 == pytest.approx(400 * 1.5e-3**4 / (64 * 1.634252835589916e-05), rel=1e-12)
    assert field.deflection[0] == pytest.approx(w0, rel=1e-15)
    assert field.deflection[-1] == pytest.approx(0.0, abs=1e-30)


def test_lumped_static_matches_plate_theory(device_model):
    w0, _ = static_bending(device_model.section, 1.5e-3, 1.0)
    assert static_deflection_per_pressure(device_model) == pytest.approx(w0, rel=1e-12)


@settings(max_examples=40, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(p=st.just(0.0) | st.floats(1e-6, 1e5), k=st.just(0.0) | st.floats(1e-3, 50.0))
def test_linear_in_pressure(device_model, p, k):
    sec = device_model.section
    _, a = static_bending(sec, 1.5e-3, p)
    _, b = static_bending(sec, 1.5e-3, k * p)
    np.testing.assert_allclose(b.von_mises_top_surface, k * a.von_mises_top_surface, rtol=1e-12)
    np.testing.assert_allclose(b.deflection, k * a.deflection, rtol=1e-12)


def test_edge_stress_dominates(device_model):
    _, field = static_bending(device_model.section, 1.5e-3, 400.0)
    vm = field.von_mises_top_surface
    assert int(np.argmax(vm)) == len(vm) - 1
    # radial moment at the edge is -p r^2 / 8
    assert field.radial_moment[-1] == pytest.approx(-400 * 1.5e-3**2 / 8, rel=1e-12)
    assert field.tangential_moment[-1] == pytest.approx(
        device_model.section.effective_poisson * field.radial_moment[-1], rel=1e-12
    )


def test_edge_to_centre_ratio(make_single_layer):
    nu = 0.34
    model = make_single_layer(nu=nu)
    _, field = static_bending(model.section, model.plate_radius, 100.0)
    vm = field.von_mises_top_surface
    expected = 2 * math.sqrt(1 - nu + nu * nu) / (1 + nu)
    assert vm[-1] / vm[0] == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.314, abs=1e-3)


def test_centre_stress_equibiaxial(make_single_layer):
    model = make_single_layer()
    _, field = static_bending(model.section, model.plate_radius, 100.0)
    assert field.sigma_r[0] == pytest.approx(field.sigma_t[0], rel=1e-15)
    assert field.von_mises_top_surface[0] == pytest.approx(field.sigma_r[0], rel=1e-12)


def test_rejects_bad_input(device_model):
    with pytest.raises(InvalidInputError):
        static_bending(device_model.section, 1.5e-3, -1.0)
    with pytest.raises(InvalidInputError):
        static_bending(device_model.section, 0.0, 1.0)
