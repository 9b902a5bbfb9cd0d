"""Axisymmetric Rayleigh-Ritz modal analysis of a clamped circular plate.

Trial functions are ``(1 - x^2)^2 x^(2i)`` on the normalised radius. They
satisfy both clamped conditions, so the Gaussian-curvature part of the strain
energy integrates to zero and the stiffness matrix reduces to
``int (lap psi_i)(lap psi_j) x dx``. The monomial Gram matrices are badly
conditioned, so both are assembled in exact rational arithmetic and reduced to a
standard symmetric problem before any rounding happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from ..errors import InvalidInputError, NumericError
from ..laminate import SectionProps
from .bessel import clamped_mode_shape, mode_ladder

Poly = dict[int, Fraction]  # power -> coefficient


@dataclass(frozen=True)
class ModalResult:
    mode_index: tuple[int, int]  # (nodal diameters, nodal circles)
    frequency: float  # Hz
    eigenvalue: float  # lambda^2
    radii: np.ndarray  # normalised radius samples
    mode_shape: np.ndarray  # max |value| = 1, positive at the centre


def plate_frequency(lam_sq: float, section: SectionProps, r: float) -> float:
    """Frequency in Hz of a clamped plate with frequency parameter ``lam_sq``."""
    return lam_sq / (2.0 * math.pi * r**2) * math.sqrt(
        section.flexural_rigidity / section.areal_mass
    )


def _basis(i: int) -> Poly:
    p = 2 * i
    return {p: Fraction(1), p + 2: Fraction(-2), p + 4: Fraction(1)}


def _laplacian(poly: Poly) -> Poly:
    # d2/dx2 + (1/x) d/dx maps x^p to p^2 x^(p-2); all powers here are even.
    return {p - 2: c * p * p for p, c in poly.items() if p >= 2}


def _weighted_inner(a: Poly, b: Poly) -> Fraction:
    """int_0^1 a(x) b(x) x dx."""
    return sum(
        (ca * cb / (pa + pb + 2) for pa, ca in a.items() for pb, cb in b.items()),
        Fraction(0),
    )


def assemble(size: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Exact (stiffness, mass) matrices for the first ``size`` trial functions."""
    if size < 1:
        raise InvalidInputError("basis size must be >= 1")
    psi = [_basis(i) for i in range(size)]
    lap = [_laplacian(p) for p in psi]
    K = [[_weighted_inner(lap[i], lap[j]) for j in range(size)] for i in range(size)]
    M = [[_weighted_inner(psi[i], psi[j]) for j in range(size)] for i in range(size)]
    return K, M


def _ldl(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(M)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = M[j][j] - sum((L[j][k] ** 2 * D[k] for k in range(j)), Fraction(0))
        if D[j] <= 0:
            raise NumericError("mass matrix is not positive definite")
        for i in range(j + 1, n):
            s = M[i][j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))
            L[i][j] = s / D[j]
    return L, D


def _unit_lower_inverse(L: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(L)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            inv[i][j] = -sum((L[i][k] * inv[k][j] for k in range(j, i)), Fraction(0))
    return inv


def ritz_eigenproblem(size: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ``lambda^4`` (ascending) and trial-function coefficients (columns)."""
    K, M = assemble(size)
    L, D = _ldl(M)
    Li = _unit_lower_inverse(L)
    n = size
    # Kt = Li K Li^T is exact; the mass becomes diag(D).
    LK = [[sum((Li[i][k] * K[k][j] for k in range(i + 1)), Fraction(0)) for j in range(n)]
          for i in range(n)]
    Kt = [[sum((LK[i][k] * Li[j][k] for k in range(j + 1)), Fraction(0)) for j in range(n)]
          for i in range(n)]
    scale = np.array([1.0 / math.sqrt(d) for d in D])
    A = np.array([[float(Kt[i][j]) for j in range(n)] for i in range(n)])
    A = scale[:, None] * A * scale[None, :]
    vals, vecs = scipy.linalg.eigh(A)
    LiT = np.array([[float(Li[j][i]) for j in range(n)] for i in range(n)])
    coeffs = LiT @ (scale[:, None] * vecs)
    return vals, coeffs


def _evaluate(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    envelope = (1.0 - x**2) ** 2
    for i, c in enumerate(coeffs):
        out += c * envelope * x ** (2 * i)
    return out


def rayleigh_ritz_eigenvalues(size: int) -> np.ndarray:
    """Axisymmetric ``lambda^2`` estimates from a ``size``-term basis."""
    vals, _ = ritz_eigenproblem(size)
    return np.sqrt(vals)


def rayleigh_ritz_modes(
    section: SectionProps,
    r: float,
    n_modes: int,
    basis_size: int | None = None,
    samples: int = 101,
) -> list[ModalResult]:
    """Lowest ``n_modes`` axisymmetric modes (n = 0, m = 1..n_modes).

    ``basis_size`` defaults to ``max(8, 2 * n_modes)``; smaller bases than
    ``2 * n_modes`` are rejected because the upper modes would not have converged.
    """
    if n_modes < 1:
        raise InvalidInputError("n_modes must be >= 1")
    size = max(8, 2 * n_modes) if basis_size is None else basis_size
    if size < 2 * n_modes:
        raise InvalidInputError(f"basis size {size} < 2 * n_modes = {2 * n_modes}")
    vals, coeffs = ritz_eigenproblem(size)
    x = np.linspace(0.0, 1.0, samples)
    results = []
    for k in range(n_modes):
        lam_sq = math.sqrt(vals[k])
        shape = _evaluate(coeffs[:, k], x)
        shape = shape / shape[np.argmax(np.abs(shape))]
        if shape[0] < 0:
            shape = -shape
        results.append(
            ModalResult(
                mode_index=(0, k + 1),
                frequency=plate_frequency(lam_sq, section, r),
                eigenvalue=lam_sq,
                radii=x,
                mode_shape=shape,
            )
        )
    return results


def bessel_modes(
    section: SectionProps, r: float, n_modes: int, samples: int = 101
) -> list[ModalResult]:
    """Lowest ``n_modes`` modes over all nodal-diameter families, from Bessel roots."""
    x = np.linspace(0.0, 1.0, samples)
    results = []
    for n, m, lam_sq in mode_ladder(n_modes):
        shape = np.array(clamped_mode_shape(n, m, x))
        ref = shape[0] if n == 0 else shape[np.argmax(np.abs(shape))]
        if ref < 0:
            shape = -shape
        results.append(
            ModalResult(
                mode_index=(n, m),
                frequency=plate_frequency(lam_sq, section, r),
                eigenvalue=lam_sq,
                radii=x,
                mode_shape=shape,
            )
        )
    return results
