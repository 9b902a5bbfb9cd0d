
import numpy as np
import pytest
import scipy.special as sp
from scipy.optimize import brentq

from piezoharv.errors import InvalidInputError, NumericError
from piezoharv.plate_oracle import (
    bessel_i,
    bessel_j,
    clamped_mode_shape,
    clamped_plate_eigenvalue,
    clamped_plate_root,
    mode_ladder,
)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("x", [0.0, 0.1, 1.0, 3.19622, 7.5, 14.0, 25.0])
def test_series_against_scipy(n, x):
    assert bessel_j(n, x) == pytest.approx(sp.jv(n, x), rel=1e-12, abs=1e-14)
    assert bessel_i(n, x) == pytest.approx(sp.iv(n, x), rel=1e-12)


def test_argument_limits():
    with pytest.raises(InvalidInputError):
        bessel_j(0, 31.0)
    with pytest.raises(InvalidInputError):
        bessel_j(-1, 1.0)


def _scipy_root(n, lo, hi):
    f = lambda x: sp.jv(n, x) * sp.iv(n + 1, x) + sp.iv(n, x) * sp.jv(n + 1, x)  # noqa: E731
    return brentq(f, lo, hi, xtol=1e-14)


def test_fundamental():
    lam = clamped_plate_root(0, 1)
    assert lam == pytest.approx(_scipy_root(0, 3.0, 3.4), rel=1e-10)
    assert clamped_plate_eigenvalue(0, 1) == pytest.approx(10.2158, abs=1e-3)


def test_second_axisymmetric():
    lam_sq = clamped_plate_eigenvalue(0, 2)
    assert lam_sq == pytest.approx(39.771, abs=1e-3)
    assert lam_sq / clamped_plate_eigenvalue(0, 1) == pytest.approx(3.893, abs=1e-3)
    assert clamped_plate_root(0, 2) == pytest.approx(_scipy_root(0, 6.0, 6.5), rel=1e-10)


def test_one_nodal_diameter():
    assert clamped_plate_eigenvalue(1, 1) == pytest.approx(21.26, abs=1e-2)
    assert clamped_plate_root(1, 1) == pytest.approx(_scipy_root(1, 4.4, 4.8), rel=1e-10)


def test_roots_increase_within_family():
    for n in range(3):
        roots = [clamped_plate_root(n, m) for m in range(1, 4)]
        assert roots == sorted(roots)
        assert len(set(roots)) == 3


def test_no_bracket():
    with pytest.raises(NumericError):
        clamped_plate_root(0, 50)
    with pytest.raises(InvalidInputError):
        clamped_plate_root(0, 0)


def test_mode_ladder_order():
    ladder = mode_ladder(6)
    assert [(n, m) for n, m, _ in ladder] == [(0, 1), (1, 1), (2, 1), (0, 2), (3, 1), (1, 2)]
    vals = [v for *_, v in ladder]
    assert vals == sorted(vals)


@pytest.mark.parametrize("n,m", [(0, 1), (0, 2), (1, 1), (2, 1)])
def test_mode_shape_clamped(n, m):
    h = 1e-6
    x = np.append(np.linspace(0, 1 - h, 201), 1.0)
    shape = np.array(clamped_mode_shape(n, m, x))
    assert abs(shape[-1]) < 1e-8
    # zero slope: the last step is second order in h
    assert abs((shape[-1] - shape[-2]) / h) < 1e-4
    assert np.max(np.abs(shape)) == pytest.approx(1.0)
