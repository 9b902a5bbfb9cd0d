import math

import numpy as np
import pytest

from piezoharv.errors import ConvergenceError, InvalidInputError
from piezoharv.lem import strain_integrand
from piezoharv.plate_oracle import adaptive_quad, gauss_kronrod_panel


def test_linear():
    assert adaptive_quad(lambda x: x, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_shape_weight_integral():
    # u = 1 - x^2 turns this into (1/2) int_0^1 u^4 du = 1/10
    assert adaptive_quad(lambda x: (1 - x * x) ** 4 * x, 0.0, 1.0) == pytest.approx(0.1, abs=1e-12)


def test_strain_energy_integrand():
    val = adaptive_quad(lambda x: strain_integrand(x, 0.34), 0.0, 1.0, tol=1e-13)
    assert val == pytest.approx(32 / 3, abs=1e-10)


def test_kronrod_exact_for_degree_22():
    coeffs = np.arange(1, 24, dtype=float)
    exact = sum(c / (k + 1) for k, c in enumerate(coeffs))
    val, _ = gauss_kronrod_panel(lambda x: np.polyval(coeffs[::-1], x), 0.0, 1.0, vectorized=True)
    assert val == pytest.approx(exact, rel=1e-14)


def test_adaptive_on_nonpolynomial():
    assert adaptive_quad(math.sin, 0.0, math.pi, tol=1e-13) == pytest.approx(2.0, abs=1e-13)
    assert adaptive_quad(math.sqrt, 0.0, 1.0, tol=1e-12) == pytest.approx(2 / 3, abs=1e-12)


def test_endpoints_never_evaluated():
    # 1/sqrt(x) blows up at 0 but is integrable; the rule must not touch x = 0
    val = adaptive_quad(lambda x: 1 / math.sqrt(x), 0.0, 1.0, tol=1e-6, max_panels=5000)
    assert val == pytest.approx(2.0, abs=1e-5)


def test_reversed_and_empty_interval():
    assert adaptive_quad(lambda x: x, 1.0, 0.0) == pytest.approx(-0.5, abs=1e-12)
    assert adaptive_quad(lambda x: x, 2.0, 2.0) == 0.0


def test_deterministic():
    f = lambda x: math.exp(-x) * math.cos(17 * x)  # noqa: E731
    assert adaptive_quad(f, 0, 3) == adaptive_quad(f, 0, 3)


def test_convergence_error_carries_estimate():
    with pytest.raises(ConvergenceError) as info:
        adaptive_quad(lambda x: math.sin(1 / x), 1e-6, 1.0, tol=1e-15, max_panels=10)
    assert math.isfinite(info.value.best_estimate)
    assert info.value.error_estimate > 1e-15


def test_bad_tol():
    with pytest.raises(InvalidInputError):
        adaptive_quad(lambda x: x, 0, 1, tol=0.0)
