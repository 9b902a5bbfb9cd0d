"""Bessel functions by power series and clamped circular-plate eigenvalues.

The series for J_n alternate, and near |x| = 25 individual terms reach ~1e9
while the sum is O(1). Evaluating them in double precision would throw away
most of the significant digits, so the sums run in ``decimal`` arithmetic with
enough guard digits to keep the relative error well under 1e-12.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from functools import lru_cache

from ..errors import InvalidInputError, NumericError

_PREC = 60
_MAX_ARG = 30.0


def _series(n: int, x: float, alternating: bool) -> float:
    if n < 0:
        raise InvalidInputError("Bessel order must be >= 0")
    if abs(x) > _MAX_ARG:
        raise InvalidInputError(f"series evaluation limited to |x| <= {_MAX_ARG}")
    with localcontext() as ctx:
        ctx.prec = _PREC
        half = Decimal(x) / 2
        q = half * half
        term = (half**n if n else Decimal(1)) / math.factorial(n)
        total = term
        k = 0
        eps = Decimal(10) ** (-(_PREC - 5))
        while True:
            k += 1
            term = term * q / (k * (k + n))
            if alternating:
                term = -term
            total += term
            if k > abs(x) and abs(term) <= eps * abs(total):
                break
        return float(total)


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x)."""
    return _series(n, x, alternating=True)


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function of the first kind I_n(x)."""
    return _series(n, x, alternating=False)


def characteristic(n: int, lam: float) -> float:
    """Clamped-plate frequency determinant for ``n`` nodal diameters.

    Zero at ``J_n(lam) I_{n+1}(lam) + I_n(lam) J_{n+1}(lam) = 0``, which is the
    n-th order form of ``J_n I_n' - I_n J_n' = 0`` after eliminating the
    derivative terms with the Bessel recurrences.
    """
    return bessel_j(n, lam) * bessel_i(n + 1, lam) + bessel_i(n, lam) * bessel_j(n + 1, lam)


def _bisect(fn, lo: float, hi: float, flo: float, rtol: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def _family_roots(n: int, count: int, lam_max: float, rtol: float) -> tuple[float, ...]:
    step = 0.25
    # Skip the trivial root at 0: the determinant behaves like lam^(2n+1) there.
    lo = 0.5
    flo = characteristic(n, lo)
    roots = []
    while lo < lam_max and len(roots) < count:
        hi = min(lo + step, lam_max)
        fhi = characteristic(n, hi)
        if fhi == 0.0:
            roots.append(hi)
        elif (fhi > 0) != (flo > 0):
            roots.append(_bisect(lambda t: characteristic(n, t), lo, hi, flo, rtol))
        lo, flo = hi, fhi
    return tuple(roots)


def clamped_plate_root(n: int, m: int, rtol: float = 1e-13, lam_max: float = _MAX_ARG) -> float:
    """The m-th positive root lambda of the clamped-plate determinant.

    Raises:
        NumericError: if fewer than ``m`` sign changes exist below ``lam_max``.
    """
    if n < 0 or m < 1:
        raise InvalidInputError("need n >= 0 and m >= 1")
    roots = _family_roots(n, m, float(lam_max), float(rtol))
    if len(roots) < m:
        raise NumericError(f"no bracket for clamped-plate root (n={n}, m={m}) below {lam_max}")
    return roots[m - 1]


def clamped_plate_eigenvalue(n: int, m: int) -> float:
    """Frequency parameter lambda^2 for mode (n nodal diameters, m nodal circles)."""
    return clamped_plate_root(n, m) ** 2


def mode_ladder(count: int) -> list[tuple[int, int, float]]:
    """The ``count`` lowest modes over all families as ``(n, m, lambda^2)``."""
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    # The count-th axisymmetric root bounds every mode in the answer.
    bound = clamped_plate_root(0, count) * (1 + 1e-9)
    modes = []
    n = 0
    while True:
        roots = _family_roots(n, count, bound, 1e-13)
        if not roots:
            break
        modes.extend((n, m, lam**2) for m, lam in enumerate(roots, start=1))
        n += 1
    modes.sort(key=lambda row: row[2])
    return modes[:count]


def clamped_mode_shape(n: int, m: int, x) -> list[float]:
    """Radial profile J_n(l x) - (J_n(l)/I_n(l)) I_n(l x), scaled to max |value| = 1."""
    lam = clamped_plate_root(n, m)
    ratio = bessel_j(n, lam) / bessel_i(n, lam)
    vals = [bessel_j(n, lam * xi) - ratio * bessel_i(n, lam * xi) for xi in x]
    peak = max(vals, key=abs)
    return [v / peak for v in vals]
