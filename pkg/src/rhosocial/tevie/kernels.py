# src/rhosocial/tevie/kernels.py
"""
Translation-invariant kernels of the TE domain integral equation.

Every function takes a displacement ``d = x - x'`` (a single 2-vector or an
array of shape ``(..., 2)``) and returns arrays with matching leading axes.
Tensors are returned as ``(..., 3, 3)`` complex arrays in the (E1, E2, H3)
component order. Nonzero entries are written into zero-initialized arrays, so
structural zeros are exact.

With ``g = (i/4) H0(k r)``:

- ``A = (i/4) k (1/r) H1 [2Q - I2] - (i/4) k^2 H0 [Q - I2]``
- ``B = -(i/4) k H1 Theta_x``
- singular part ``G = -(1/(2 pi r^2)) [2 Theta Theta^T - I]`` on the E block
- compact part ``K`` such that ``G + K = -A`` on the E block, plus the cross
  and H3 entries of the coupled system.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import DomainError
from .scene import BackgroundMedium
from .specfun import hankel1

# Prefactor of the principal-value kernel.
SINGULAR_KERNEL_SCALE = 1.0 / (2.0 * math.pi)

_UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Displacement:
    """Displacement ``d`` with its length ``r`` and direction ``theta``."""

    d: np.ndarray
    r: np.ndarray
    theta: np.ndarray

    @classmethod
    def of(cls, d: Union["Displacement", np.ndarray, Tuple[float, float]]) -> "Displacement":
        if isinstance(d, Displacement):
            return d
        vec = np.asarray(d, dtype=float)
        if vec.shape[-1:] != (2,):
            raise DomainError(
                f"displacement must have a trailing axis of length 2, got {vec.shape}"
            )
        if not np.all(np.isfinite(vec)):
            raise DomainError("displacement must be finite")
        r = np.asarray(np.hypot(vec[..., 0], vec[..., 1]))
        if np.any(r <= 0.0):
            raise DomainError("kernel evaluated at zero displacement (r must be > 0)")
        return cls(d=vec, r=r, theta=vec / r[..., None])


def _radius(r) -> np.ndarray:
    values = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        raise DomainError("distance r must be finite and > 0")
    return values


def _unit(theta) -> np.ndarray:
    values = np.asarray(theta, dtype=float)
    if values.shape[-1:] != (2,):
        raise DomainError(f"theta must have a trailing axis of length 2, got {values.shape}")
    if np.any(np.abs(np.hypot(values[..., 0], values[..., 1]) - 1.0) > _UNIT_TOLERANCE):
        raise DomainError("theta must be a unit vector")
    return values


def green(r, k_b: float):
    """Outgoing 2D Green's function ``(i/4) H0(k_b r)``."""
    values = _radius(r)
    return 0.25j * hankel1(0, k_b * values)


def grad_green(d, k_b: float) -> np.ndarray:
    """Gradient of ``green`` with respect to ``d``: ``-(i/4) k_b Theta H1(k_b r)``."""
    disp = Displacement.of(d)
    factor = -0.25j * k_b * hankel1(1, k_b * disp.r)
    return np.asarray(factor)[..., None] * disp.theta


def tensor_q(theta) -> np.ndarray:
    """``Q = theta theta^T`` on the E block, zero third row and column."""
    t = _unit(theta)
    out = np.zeros(t.shape[:-1] + (3, 3), dtype=complex)
    out[..., 0, 0] = t[..., 0] * t[..., 0]
    out[..., 0, 1] = t[..., 0] * t[..., 1]
    out[..., 1, 0] = t[..., 1] * t[..., 0]
    out[..., 1, 1] = t[..., 1] * t[..., 1]
    return out


def tensor_theta_cross(theta) -> np.ndarray:
    """Cross-product tensor coupling the E block to H3."""
    t = _unit(theta)
    out = np.zeros(t.shape[:-1] + (3, 3), dtype=complex)
    out[..., 0, 2] = t[..., 1]
    out[..., 1, 2] = -t[..., 0]
    out[..., 2, 0] = -t[..., 1]
    out[..., 2, 1] = t[..., 0]
    return out


def tensor_a(d, k_b: float) -> np.ndarray:
    """Kernel of the E-to-E volume integral."""
    disp = Displacement.of(d)
    z = k_b * disp.r
    c1 = 0.25j * k_b * hankel1(1, z) / disp.r
    c0 = 0.25j * k_b ** 2 * hankel1(0, z)
    t = disp.theta
    out = np.zeros(disp.r.shape + (3, 3), dtype=complex)
    for p in range(2):
        for q in range(2):
            qq = t[..., p] * t[..., q]
            delta = 1.0 if p == q else 0.0
            out[..., p, q] = c1 * (2.0 * qq - delta) - c0 * (qq - delta)
    return out


def tensor_b(d, k_b: float) -> np.ndarray:
    """Kernel of the H3-to-E (and E-to-H3) volume integral."""
    disp = Displacement.of(d)
    factor = -0.25j * k_b * hankel1(1, k_b * disp.r)
    return np.asarray(factor)[..., None, None] * tensor_theta_cross(disp.theta)


def kernel_g_singular(d) -> np.ndarray:
    """Principal-value kernel ``-(1/(2 pi r^2)) [2 Theta_n Theta_m - delta_nm]``."""
    disp = Displacement.of(d)
    scale = -SINGULAR_KERNEL_SCALE / disp.r ** 2
    t = disp.theta
    out = np.zeros(disp.r.shape + (3, 3), dtype=complex)
    for p in range(2):
        for q in range(2):
            delta = 1.0 if p == q else 0.0
            out[..., p, q] = scale * (2.0 * t[..., p] * t[..., q] - delta)
    return out


def kernel_k_compact(d, medium: BackgroundMedium) -> np.ndarray:
    """All nine entries of the compact kernel."""
    disp = Displacement.of(d)
    k = medium.k_b
    r = disp.r
    t = disp.theta
    h0 = hankel1(0, k * r)
    h1 = hankel1(1, k * r)
    radial = 1.0 / (2.0 * math.pi * r ** 2) - 0.25j * k * h1 / r
    angular = 0.25j * k ** 2 * h0
    out = np.zeros(r.shape + (3, 3), dtype=complex)
    for p in range(2):
        for q in range(2):
            qq = t[..., p] * t[..., q]
            delta = 1.0 if p == q else 0.0
            out[..., p, q] = radial * (2.0 * qq - delta) + angular * (qq - delta)
    wmu = medium.omega * medium.mu_b
    weps = medium.omega * medium.eps_b
    out[..., 0, 2] = -wmu * k * t[..., 1] * h1 / 4.0
    out[..., 1, 2] = wmu * k * t[..., 0] * h1 / 4.0
    out[..., 2, 0] = -weps * k * t[..., 1] * h1 / 4.0
    out[..., 2, 1] = weps * k * t[..., 0] * h1 / 4.0
    out[..., 2, 2] = -0.25j * k ** 2 * h0
    return out


def kernel_split(d, medium: BackgroundMedium) -> Tuple[np.ndarray, np.ndarray]:
    """The singular and compact parts ``(G, K)`` at the same displacements."""
    disp = Displacement.of(d)
    return kernel_g_singular(disp), kernel_k_compact(disp, medium)


__all__ = [
    'SINGULAR_KERNEL_SCALE',
    'Displacement',
    'green',
    'grad_green',
    'tensor_q',
    'tensor_theta_cross',
    'tensor_a',
    'tensor_b',
    'kernel_g_singular',
    'kernel_k_compact',
    'kernel_split',
]
