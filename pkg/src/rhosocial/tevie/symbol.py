# src/rhosocial/tevie/symbol.py
"""
Mikhlin symbol of the singular part of the TE operator.

Two routes lead to the same matrix:

1. closed form: the full operator has symbol ``I + chi_e Q(k~)`` where
   ``k~ = (cos phi~, sin phi~)`` (``full_symbol``);
2. first principles: expand every entry of the characteristic of the singular
   kernel in circular harmonics, weight harmonic ``p`` by
   ``gamma_p = pi i^p Gamma(p/2) / Gamma((2+p)/2)`` and resum
   (``symbol_from_characteristic``), then compose with the multiplication
   operator ``1 + chi_e/2`` (``compound_symbol``).

The symbol's eigenvalues ``{1, 1 + chi_e}`` are the predicted accumulation
points of the discrete spectrum (``predicted_accumulation``).
"""
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Union

import numpy as np
from scipy.special import gamma as gamma_function

from .errors import DomainError
from .kernels import tensor_q
from .scene import ContrastMap

QUADRATURE_NODES = 512
DEFAULT_P_MAX = 8
CLUSTER_TOLERANCE = 1e-12

_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_I2 = np.diag([1.0, 1.0, 0.0]).astype(complex)


@dataclass(frozen=True)
class HarmonicCoefficients:
    """Sine (``a^(1)``) and cosine (``a^(2)``) coefficients for p = 1..p_max."""

    sine: np.ndarray
    cosine: np.ndarray
    mean: float

    @property
    def p_max(self) -> int:
        return int(self.sine.size)


class AngularFunction:
    """A real function on the circle with its harmonic-coefficient view."""

    def __init__(self, func: Callable[[np.ndarray], np.ndarray]):
        self._func = func

    def __call__(self, phi):
        return self._func(np.asarray(phi, dtype=float))

    def coefficients(self, p_max: int) -> HarmonicCoefficients:
        return harmonic_coefficients(self, p_max)

    def mean(self) -> float:
        phi = _nodes()
        return float(np.mean(np.broadcast_to(self(phi), phi.shape)))


def _nodes() -> np.ndarray:
    return 2.0 * math.pi * np.arange(QUADRATURE_NODES) / QUADRATURE_NODES


def characteristic_matrix(phi) -> np.ndarray:
    """Characteristic of the principal-value kernel, shape ``(..., 3, 3)``."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(2.0 * phi), np.sin(2.0 * phi)
    out = np.zeros(phi.shape + (3, 3))
    scale = -1.0 / (2.0 * math.pi)
    out[..., 0, 0] = scale * c
    out[..., 0, 1] = scale * s
    out[..., 1, 0] = scale * s
    out[..., 1, 1] = -scale * c
    return out


def harmonic_coefficients(f: Union[AngularFunction, Callable], p_max: int) -> HarmonicCoefficients:
    """Fourier coefficients by the trapezoid rule on ``QUADRATURE_NODES`` nodes.

    ``a_p^(1) = (1/pi) int f sin(p phi)``, ``a_p^(2) = (1/pi) int f cos(p phi)``.
    """
    if int(p_max) < 1:
        raise DomainError(f"p_max must be >= 1, got {p_max}")
    phi = _nodes()
    values = np.broadcast_to(np.asarray(f(phi), dtype=float), phi.shape)
    p = np.arange(1, int(p_max) + 1)[:, None]
    weight = 2.0 / QUADRATURE_NODES
    sine = weight * np.sum(values * np.sin(p * phi), axis=1)
    cosine = weight * np.sum(values * np.cos(p * phi), axis=1)
    return HarmonicCoefficients(sine=sine, cosine=cosine, mean=float(np.mean(values)))


def gamma_multiplier(p: int) -> complex:
    """``gamma_{2,p} = pi i^p Gamma(p/2) / Gamma((2+p)/2)``."""
    if int(p) != p or p < 1:
        raise DomainError(f"harmonic index must be an integer >= 1, got {p}")
    p = int(p)
    ratio = gamma_function(p / 2) / gamma_function((2 + p) / 2)
    return complex(math.pi * _I_POWERS[p % 4] * ratio)


def symbol_from_characteristic(F: Callable[[np.ndarray], np.ndarray],
                               p_max: int = DEFAULT_P_MAX,
                               angles=None, mean_tolerance: float = 1e-12) -> np.ndarray:
    """Symbol of a singular operator from its 3x3 characteristic.

    ``F(phi)`` must return shape ``phi.shape + (3, 3)``. The result has shape
    ``angles.shape + (3, 3)``.
    """
    if angles is None:
        angles = _nodes()
    angles = np.asarray(angles, dtype=float)
    multipliers = np.array([gamma_multiplier(p) for p in range(1, int(p_max) + 1)])
    p = np.arange(1, int(p_max) + 1)
    sin_p = np.sin(np.multiply.outer(angles, p))
    cos_p = np.cos(np.multiply.outer(angles, p))
    out = np.zeros(angles.shape + (3, 3), dtype=complex)
    for row in range(3):
        for col in range(3):
            entry = AngularFunction(lambda phi, r=row, c=col: F(phi)[..., r, c])
            coeffs = harmonic_coefficients(entry, p_max)
            if abs(coeffs.mean) > mean_tolerance:
                raise DomainError(
                    f"characteristic entry ({row + 1},{col + 1}) has nonzero mean "
                    f"{coeffs.mean:.3e}; not a singular-operator characteristic"
                )
            out[..., row, col] = (sin_p @ (multipliers * coeffs.sine)
                                  + cos_p @ (multipliers * coeffs.cosine))
    return out


def _direction(phi_tilde) -> np.ndarray:
    phi_tilde = np.asarray(phi_tilde, dtype=float)
    return np.stack([np.cos(phi_tilde), np.sin(phi_tilde)], axis=-1)


def full_symbol(chi_e: complex, phi_tilde) -> np.ndarray:
    """``I + chi_e Q(k~)``, shape ``phi_tilde.shape + (3, 3)``."""
    q = tensor_q(_direction(phi_tilde))
    return np.eye(3, dtype=complex) + complex(chi_e) * q


def compound_symbol(chi_e: complex, phi_tilde, p_max: int = DEFAULT_P_MAX) -> np.ndarray:
    """``I + (chi_e/2) I2 + chi_e Smb(A^s)`` with ``Smb(A^s)`` from the harmonic route."""
    singular = symbol_from_characteristic(characteristic_matrix, p_max, phi_tilde)
    chi = complex(chi_e)
    return np.eye(3, dtype=complex) + 0.5 * chi * _I2 + chi * singular


def predicted_accumulation(contrast: ContrastMap) -> np.ndarray:
    """``{1} U {1 + chi_e(x_n)}`` over all cells (raw, with repetitions)."""
    return np.concatenate([[1.0 + 0.0j], 1.0 + np.asarray(contrast.chi_e, dtype=complex)])


def cluster_points(points: Iterable[complex], tol: float = CLUSTER_TOLERANCE) -> List[complex]:
    """Deduplicate points closer than ``tol``; keeps first occurrences in sorted order."""
    ordered = sorted((complex(p) for p in points), key=lambda z: (z.real, z.imag))
    kept: List[complex] = []
    for z in ordered:
        if all(abs(z - k) > tol for k in kept):
            kept.append(z)
    return kept


def is_elliptic(contrast: ContrastMap, tol: float = 1e-12) -> bool:
    """True when ``det(I + chi_e Q) = 1 + chi_e`` stays away from zero on every cell."""
    return bool(np.all(np.abs(1.0 + np.asarray(contrast.chi_e)) > tol))


__all__ = [
    'QUADRATURE_NODES',
    'DEFAULT_P_MAX',
    'HarmonicCoefficients',
    'AngularFunction',
    'characteristic_matrix',
    'harmonic_coefficients',
    'gamma_multiplier',
    'symbol_from_characteristic',
    'full_symbol',
    'compound_symbol',
    'predicted_accumulation',
    'cluster_points',
    'is_elliptic',
]
