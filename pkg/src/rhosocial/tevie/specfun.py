# src/rhosocial/tevie/specfun.py
"""
Cylinder functions of order 0 and 1 for real arguments.

J0, J1, Y0, Y1 are taken from ``scipy.special`` (Cephes rational and
modulus/phase approximations, double precision over the whole positive axis).
The Hankel function of the first kind is composed here as ``J + iY`` so that
``hankel1(n, x) == bessel_j(n, x) + 1j * bessel_y(n, x)`` holds bit for bit.

All functions accept scalars or arrays and preserve the input shape. Only
orders 0 and 1 are supported; the kernels never need more.
"""
from enum import IntEnum
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]

# Euler-Mascheroni constant, 20 significant digits.
EULER_GAMMA = 0.57721566490153286061


class CylOrder(IntEnum):
    """Order of a cylinder function."""

    ZERO = 0
    ONE = 1


def _order(order: int) -> CylOrder:
    try:
        return CylOrder(int(order))
    except (TypeError, ValueError):
        raise DomainError(f"cylinder function order must be 0 or 1, got {order!r}") from None


def _argument(x: ArrayLike, strictly_positive: bool) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("cylinder function argument must be finite")
    if strictly_positive:
        if np.any(values <= 0.0):
            raise DomainError(
                f"argument must be > 0 (logarithmic singularity at 0), got min {values.min()!r}"
            )
    elif np.any(values < 0.0):
        raise DomainError(f"argument must be >= 0, got min {values.min()!r}")
    return values


def _unwrap(values: np.ndarray):
    return values[()] if values.ndim == 0 else values


def bessel_j(order: int, x: ArrayLike):
    """Bessel function of the first kind J_order(x), x >= 0."""
    n = _order(order)
    values = _argument(x, strictly_positive=False)
    out = special.j0(values) if n is CylOrder.ZERO else special.j1(values)
    return _unwrap(np.asarray(out, dtype=float))


def bessel_y(order: int, x: ArrayLike):
    """Bessel function of the second kind (Neumann function) Y_order(x), x > 0."""
    n = _order(order)
    values = _argument(x, strictly_positive=True)
    out = special.y0(values) if n is CylOrder.ZERO else special.y1(values)
    return _unwrap(np.asarray(out, dtype=float))


def hankel1(order: int, x: ArrayLike):
    """Hankel function of the first kind H_order^(1)(x) = J + iY, x > 0."""
    n = _order(order)
    values = _argument(x, strictly_positive=True)
    if n is CylOrder.ZERO:
        j, y = special.j0(values), special.y0(values)
    else:
        j, y = special.j1(values), special.y1(values)
    out = np.empty(values.shape, dtype=complex)
    out.real = j
    out.imag = y
    return _unwrap(out)


__all__ = ['EULER_GAMMA', 'CylOrder', 'bessel_j', 'bessel_y', 'hankel1']
