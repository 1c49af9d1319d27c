# src/rhosocial/tevie/oracle.py
"""
Independent references for the discretization.

Nothing here reuses the assembly path:

- ``mie_cylinder_fields``: separation-of-variables solution for a homogeneous
  circular cylinder (chi_m = 0) under TE plane-wave incidence, with Bessel
  functions of arbitrary order from ``scipy.special``;
- ``check_angular_identities``: trapezoid integrals of Q, delta and the
  cross-product tensor over the circle;
- ``self_cell_tensor`` / ``brute_force_self_term``: polar quadrature of the
  kernel over the equal-area disk with a small disk around the origin removed;
- ``dense_spectrum``: all eigenvalues of a dense matrix next to the
  accumulation points predicted by the symbol;
- ``bessel_series``: ascending series in 60-digit decimal arithmetic.
"""
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import linalg, special

from . import kernels
from .errors import AccuracyError, DomainError, NumericalError, ResourceError
from .scene import (BackgroundMedium, ContrastMap, DiskShape, Grid2D, PlaneWaveTE,
                    contrast_from_shapes)
from .symbol import cluster_points, predicted_accumulation

logger = logging.getLogger('tevie.oracle')

SERIES_EXTRA_ORDERS = 15
TRUNCATION_LIMIT = 1e-8
BOUNDARY_TOLERANCE = 1e-9
MIN_ANGULAR_SAMPLES = 64
EIGEN_BUDGET = 6000

# Polar quadrature: Gauss-Legendre panels in t = ln(rho), trapezoid in angle.
PANEL_WIDTH = math.log(10.0) / 2.0
PANEL_NODES = 16
ANGULAR_NODES = 64

_I_POWERS = np.array([1.0, 1.0j, -1.0, -1.0j])


# ============================================================================
# Circular cylinder
# ============================================================================

class CylinderSpec(BaseModel):
    """Homogeneous dielectric disk, chi_m = 0."""

    model_config = ConfigDict(frozen=True)

    radius: float = Field(..., gt=0)
    chi_e_inside: complex
    center: Tuple[float, float] = (0.0, 0.0)

    @model_validator(mode='after')
    def _not_degenerate(self) -> "CylinderSpec":
        if 1.0 + self.chi_e_inside == 0:
            raise ValueError("1 + chi_e_inside must be nonzero")
        return self

    @property
    def refractive_index(self) -> complex:
        return complex(np.sqrt(1.0 + complex(self.chi_e_inside)))

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        rho = np.hypot(pts[..., 0] - self.center[0], pts[..., 1] - self.center[1])
        return np.abs(rho - self.radius)


def staircase_contrast(spec: CylinderSpec, grid: Grid2D) -> ContrastMap:
    """Cells whose center lies inside the circle get ``chi_e_inside``."""
    disk = DiskShape(center=spec.center, radius=spec.radius, chi_e=spec.chi_e_inside)
    return contrast_from_shapes(grid, [disk])


@dataclass(frozen=True)
class CylinderFields:
    e1: np.ndarray
    e2: np.ndarray
    h3: np.ndarray
    order: int
    truncation_estimate: float
    inside: np.ndarray


def _series_coefficients(n: np.ndarray, x: float, m: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Scattered (b_n) and interior (c_n) coefficients from field continuity at rho = R."""
    mx = m * x
    system = np.empty((n.size, 2, 2), dtype=complex)
    system[:, 0, 0] = special.hankel1(n, x)
    system[:, 0, 1] = -special.jv(n, mx)
    system[:, 1, 0] = special.h1vp(n, x)
    system[:, 1, 1] = -special.jvp(n, mx) / m
    rhs = -np.stack([special.jv(n, x), special.jvp(n, x)], axis=-1).astype(complex)
    sol = np.linalg.solve(system, rhs[..., None])[..., 0]
    return sol[:, 0], sol[:, 1]


def mie_cylinder_fields(spec: CylinderSpec, medium: BackgroundMedium, wave: PlaneWaveTE,
                        points, order: Optional[int] = None) -> CylinderFields:
    """Total (E1, E2, H3) at ``points`` for a plane wave hitting the cylinder.

    The series runs over orders ``-M..M`` with ``M = ceil(k_b R) + 15`` unless
    ``order`` is given.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1:] != (2,):
        raise DomainError(f"points must have a trailing axis of length 2, got {pts.shape}")
    lead = pts.shape[:-1]
    pts = pts.reshape(-1, 2)
    radius = spec.radius
    near = spec.boundary_distance(pts) <= BOUNDARY_TOLERANCE * radius
    if np.any(near):
        raise DomainError(
            f"{int(near.sum())} point(s) lie within {BOUNDARY_TOLERANCE:g} R "
            f"of the cylinder boundary"
        )

    k = medium.k_b
    m = spec.refractive_index
    kappa = m * k
    M = int(order) if order is not None else math.ceil(k * radius) + SERIES_EXTRA_ORDERS
    if M < 1:
        raise DomainError(f"series order must be >= 1, got {M}")
    n = np.arange(-M, M + 1)
    b, c = _series_coefficients(n, k * radius, m)
    amp = wave.amplitude_h3 * _I_POWERS[n % 4]

    rel = pts - np.asarray(spec.center)
    rho = np.hypot(rel[:, 0], rel[:, 1])
    phi = np.arctan2(rel[:, 1], rel[:, 0])
    inside = rho < radius
    phase = np.exp(1j * np.multiply.outer(n, phi - wave.angle))
    nn = n[:, None]

    radial = np.zeros(phase.shape, dtype=complex)
    d_radial = np.zeros(phase.shape, dtype=complex)
    over_rho = np.zeros(phase.shape, dtype=complex)
    if np.any(~inside):
        z = k * rho[~inside]
        hn = special.hankel1(nn, z)
        radial[:, ~inside] = b[:, None] * hn
        d_radial[:, ~inside] = b[:, None] * k * special.h1vp(nn, z)
        over_rho[:, ~inside] = b[:, None] * nn * hn / rho[~inside]
    if np.any(inside):
        z = kappa * rho[inside]
        radial[:, inside] = c[:, None] * special.jv(nn, z)
        d_radial[:, inside] = c[:, None] * kappa * special.jvp(nn, z)
        # n J_n(z) / z = (J_{n-1}(z) + J_{n+1}(z)) / 2, regular at rho = 0
        over_rho[:, inside] = c[:, None] * kappa * 0.5 * (special.jv(nn - 1, z)
                                                         + special.jv(nn + 1, z))

    weighted = amp[:, None] * phase
    h3 = np.sum(weighted * radial, axis=0)
    d_rho = np.sum(weighted * d_radial, axis=0)
    d_phi = np.sum(weighted * 1j * over_rho, axis=0)
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    d1 = cos_phi * d_rho - sin_phi * d_phi
    d2 = sin_phi * d_rho + cos_phi * d_phi
    eps = np.where(inside, medium.eps_b * (1.0 + complex(spec.chi_e_inside)), medium.eps_b)
    factor = 1j / (medium.omega * eps)
    e1 = factor * d2
    e2 = -factor * d1

    tail_rows = np.abs(n) == M
    tail = np.abs(np.sum((weighted * radial)[tail_rows], axis=0))

    outside = ~inside
    if np.any(outside):
        inc_e1, inc_e2, inc_h3 = wave.evaluate(medium, pts[outside])
        e1[outside] += inc_e1
        e2[outside] += inc_e2
        h3[outside] += inc_h3

    scale = max(abs(wave.amplitude_h3), float(np.max(np.abs(h3))) if h3.size else 0.0, 1e-300)
    estimate = float(np.max(tail) / scale) if tail.size else 0.0
    if estimate > TRUNCATION_LIMIT:
        raise AccuracyError(
            f"cylinder series truncated at order {M} has tail estimate {estimate:.3e} "
            f"> {TRUNCATION_LIMIT:g}"
        )
    logger.debug(f"cylinder series order {M}, tail estimate {estimate:.3e}")
    return CylinderFields(e1=e1.reshape(lead), e2=e2.reshape(lead), h3=h3.reshape(lead),
                          order=M, truncation_estimate=estimate, inside=inside.reshape(lead))


# ============================================================================
# Angular identities
# ============================================================================

@dataclass(frozen=True)
class AngularIdentityReport:
    samples: int
    deviations: Dict[str, float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())


def check_angular_identities(samples: int = 256) -> AngularIdentityReport:
    """``int Q_pq = pi delta_pq``, ``int delta_pq = 2 pi delta_pq``, ``int Theta_x = 0``."""
    if int(samples) < MIN_ANGULAR_SAMPLES:
        raise DomainError(f"need at least {MIN_ANGULAR_SAMPLES} samples, got {samples}")
    phi = 2.0 * math.pi * np.arange(int(samples)) / int(samples)
    weight = 2.0 * math.pi / int(samples)
    theta = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    q = weight * kernels.tensor_q(theta).sum(axis=0)
    cross = weight * kernels.tensor_theta_cross(theta).sum(axis=0)
    delta = weight * np.broadcast_to(np.eye(2), (phi.size, 2, 2)).sum(axis=0)
    deviations = {}
    for p in range(2):
        for r in range(2):
            expected = math.pi if p == r else 0.0
            deviations[f"Q{p + 1}{r + 1}"] = float(abs(q[p, r] - expected))
            deviations[f"delta{p + 1}{r + 1}"] = float(abs(delta[p, r] - 2.0 * expected))
    for p, r in ((0, 2), (1, 2), (2, 0), (2, 1)):
        deviations[f"cross{p + 1}{r + 1}"] = float(abs(cross[p, r]))
    return AngularIdentityReport(samples=int(samples), deviations=deviations)


# ============================================================================
# Self-cell quadrature
# ============================================================================

def _polar_rule(a: float, refinement: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes (..., 2) and area weights on the annulus a 10^-refinement < rho < a."""
    t_hi = math.log(a)
    t_lo = t_hi - refinement * math.log(10.0)
    panels = max(1, math.ceil((t_hi - t_lo) / PANEL_WIDTH - 1e-12))
    x, w = np.polynomial.legendre.leggauss(PANEL_NODES)
    edges = np.linspace(t_lo, t_hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    rho = np.exp(t)
    phi = 2.0 * math.pi * np.arange(ANGULAR_NODES) / ANGULAR_NODES
    nodes = rho[:, None, None] * np.stack([np.cos(phi), np.sin(phi)], axis=-1)[None, :, :]
    # dA = rho d(rho) d(phi) = rho^2 dt d(phi)
    weights = (wt * rho ** 2)[:, None] * np.full(ANGULAR_NODES, 2.0 * math.pi / ANGULAR_NODES)
    return nodes, weights


def self_cell_tensor(k_b: float, h: float, refinement: int,
                     component: Literal['electric', 'magnetic'] = 'electric') -> np.ndarray:
    """Integral of a 3x3 kernel over the equal-area disk of one cell.

    ``electric`` integrates ``tensor_a`` (its (1,1) entry tends to the closed
    self term); ``magnetic`` integrates ``kernel_k_compact`` in a normalized
    medium (its (3,3) entry tends to the H3 diagonal bracket).
    """
    if int(refinement) < 2:
        raise DomainError(f"refinement must be >= 2, got {refinement}")
    if not (k_b > 0 and h > 0):
        raise DomainError(f"k_b and h must be positive, got k_b={k_b!r}, h={h!r}")
    a = h / math.sqrt(math.pi)
    nodes, weights = _polar_rule(a, int(refinement))
    if component == 'electric':
        values = kernels.tensor_a(nodes, k_b)
    elif component == 'magnetic':
        values = kernels.kernel_k_compact(nodes, BackgroundMedium.normalized(k_b))
    else:
        raise DomainError(f"component must be 'electric' or 'magnetic', got {component!r}")
    return np.einsum('rp,rpij->ij', weights, values)


def brute_force_self_term(k_b: float, h: float, refinement: int) -> complex:
    """``L_11 + 1/2`` from quadrature alone."""
    return complex(self_cell_tensor(k_b, h, refinement)[0, 0] + 0.5)


# ============================================================================
# Dense spectrum
# ============================================================================

@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    predicted: List[complex]
    distances: List[float] = field(default_factory=list)

    @property
    def min_abs_eigenvalue(self) -> float:
        return float(np.min(np.abs(self.eigenvalues)))


def dense_spectrum(A, contrast: Optional[ContrastMap] = None,
                   budget: int = EIGEN_BUDGET) -> SpectrumReport:
    """All eigenvalues of a dense matrix and their distances to the predictions."""
    matrix = getattr(A, 'matrix', A)
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {matrix.shape}")
    size = matrix.shape[0]
    if size > budget:
        raise ResourceError(f"dense eigensolver limited to {budget} unknowns",
                            required=size, budget=budget)
    if contrast is None and hasattr(A, 'scene'):
        contrast = A.scene.contrast
    try:
        eigenvalues = linalg.eigvals(matrix)
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"dense eigensolver failed on a {size}x{size} matrix: {e}") from None
    if contrast is not None:
        predicted = cluster_points(predicted_accumulation(contrast))
    else:
        predicted = [1.0 + 0j]
    distances = [float(np.min(np.abs(eigenvalues - p))) for p in predicted]
    logger.info(f"{size} eigenvalues; distances to {len(predicted)} predicted point(s): "
                f"{', '.join(f'{d:.3e}' for d in distances)}")
    return SpectrumReport(eigenvalues=eigenvalues, predicted=predicted, distances=distances)


# ============================================================================
# High-precision Bessel series
# ============================================================================

_PI = Decimal('3.14159265358979323846264338327950288419716939937510582097494')
_GAMMA = Decimal('0.577215664901532860606512090082402431042159335939923598805767')
_SERIES_PRECISION = 60


def bessel_series(order: int, kind: Literal['j', 'y'], x: float) -> float:
    """J or Y of order 0 or 1 by the ascending series at 60 significant digits."""
    if order not in (0, 1):
        raise DomainError(f"order must be 0 or 1, got {order!r}")
    if kind not in ('j', 'y'):
        raise DomainError(f"kind must be 'j' or 'y', got {kind!r}")
    if not math.isfinite(x) or x < 0 or (kind == 'y' and x == 0):
        raise DomainError(f"argument out of range for {kind}{order}: {x!r}")
    with localcontext() as ctx:
        ctx.prec = _SERIES_PRECISION
        dx = Decimal(repr(float(x)))
        half = dx / 2
        quarter_sq = half * half
        eps = Decimal(10) ** -(_SERIES_PRECISION - 5)

        # terms u_k = (-1)^k (x^2/4)^k / (k! (k + order)!)
        j_sum = Decimal(0)
        y_sum = Decimal(0)
        term = Decimal(1)
        harmonic = Decimal(0)
        k = 0
        while True:
            if k > 0:
                term = -term * quarter_sq / (k * (k + order))
                harmonic += Decimal(1) / k
            j_sum += term
            if order == 0:
                # (-1)^{k+1} H_k (x^2/4)^k / (k!)^2 = -H_k u_k
                y_sum += -harmonic * term
            else:
                # psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
                y_sum += (2 * harmonic + Decimal(1) / (k + 1) - 2 * _GAMMA) * term
            if k > dx and abs(term) < eps * (abs(j_sum) + eps):
                break
            k += 1

        if order == 0:
            j_val = j_sum
            if kind == 'j':
                return float(j_val)
            y_val = (2 / _PI) * ((half.ln() + _GAMMA) * j_val) + (2 / _PI) * y_sum
            return float(y_val)
        j_val = half * j_sum
        if kind == 'j':
            return float(j_val)
        y_val = (-2 / (_PI * dx) + (2 / _PI) * half.ln() * j_val
                 - (1 / _PI) * half * y_sum)
        return float(y_val)


__all__ = [
    'CylinderSpec',
    'CylinderFields',
    'staircase_contrast',
    'mie_cylinder_fields',
    'AngularIdentityReport',
    'check_angular_identities',
    'self_cell_tensor',
    'brute_force_self_term',
    'SpectrumReport',
    'dense_spectrum',
    'bessel_series',
]
