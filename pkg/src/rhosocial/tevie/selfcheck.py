# src/rhosocial/tevie/selfcheck.py
"""
Registry of numerical invariants run by ``tevie --mode selfcheck``.

A check is a function ``(rng) -> (deviation, detail)`` registered with
``@invariant(name, tolerance)``; it passes when ``deviation <= tolerance``.
A check that raises is recorded as failed with the exception as its detail.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import assembly, fastop, kernels, oracle, specfun, symbol
from .core.registry import SCENARIO_PROVIDER, get_provider_registry
from .scene import BackgroundMedium, ContrastMap, Grid2D, make_scene

logger = logging.getLogger('tevie.selfcheck')

CheckFunction = Callable[[np.random.Generator], Tuple[float, str]]


@dataclass(frozen=True)
class InvariantResult:
    invariant: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ''

    @property
    def status(self) -> str:
        return 'pass' if self.passed else 'fail'


@dataclass(frozen=True)
class _Check:
    name: str
    tolerance: float
    func: CheckFunction


CHECKS: Dict[str, _Check] = {}


def invariant(name: str, tolerance: float) -> Callable[[CheckFunction], CheckFunction]:
    """Register ``func`` as the check for ``name``."""
    def decorator(func: CheckFunction) -> CheckFunction:
        CHECKS[name] = _Check(name=name, tolerance=tolerance, func=func)
        return func
    return decorator


def _random_displacements(rng: np.random.Generator, count: int, k_b: float,
                          kr_min: float = 1e-3, kr_max: float = 20.0) -> np.ndarray:
    kr = np.exp(rng.uniform(math.log(kr_min), math.log(kr_max), count))
    angle = rng.uniform(0.0, 2.0 * math.pi, count)
    r = kr / k_b
    return np.stack([r * np.cos(angle), r * np.sin(angle)], axis=-1)


# ============================================================================
# Kernel identities
# ============================================================================

@invariant("G+K+A=0", 1e-12)
def _split_sums_to_kernel(rng):
    medium = BackgroundMedium.normalized(1.0)
    d = _random_displacements(rng, 1000, medium.k_b)
    g, k = kernels.kernel_split(d, medium)
    a = kernels.tensor_a(d, medium.k_b)
    total = (g + k + a)[:, :2, :2]
    scale = 1.0 + np.abs(g[:, :2, :2]).max(axis=(1, 2))
    deviation = float(np.max(np.abs(total).max(axis=(1, 2)) / scale))
    return deviation, "max |G + K + A| / (1 + |G|) on the E block, 1000 displacements"


@invariant("K-cross-coupling", 1e-13)
def _compact_cross_entries(rng):
    medium = BackgroundMedium(omega=0.7, eps_b=1.3, mu_b=2.1)
    d = _random_displacements(rng, 200, medium.k_b)
    k = kernels.kernel_k_compact(d, medium)
    b = kernels.tensor_b(d, medium.k_b)
    upper = k[:, :2, 2] - (-1j * medium.omega * medium.mu_b) * b[:, :2, 2]
    lower = k[:, 2, :2] - (-1j * medium.omega * medium.eps_b) * b[:, :2, 2]
    scale = 1.0 + np.abs(k).max()
    deviation = float(max(np.abs(upper).max(), np.abs(lower).max()) / scale)
    return deviation, "K_l3 = -i w mu B_l3 and K_3l = -i w eps B_l3"


@invariant("A-rotation-covariance", 1e-12)
def _rotation_covariance(rng):
    k_b = 1.0
    d = _random_displacements(rng, 200, k_b, kr_min=0.05)
    angle = rng.uniform(0.0, 2.0 * math.pi)
    rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    a = kernels.tensor_a(d, k_b)[:, :2, :2]
    rotated = kernels.tensor_a(d @ rot.T, k_b)[:, :2, :2]
    expected = rot @ a @ rot.T
    deviation = float(np.max(np.abs(rotated - expected)) / (1.0 + np.max(np.abs(a))))
    return deviation, f"A(R d) = R A(d) R^T, rotation {angle:.4f} rad"


@invariant("kernel-translation-invariance", 1e-12)
def _translation_invariance(rng):
    medium = BackgroundMedium.normalized(1.0)
    contrast = ContrastMap(chi_e=rng.uniform(0.0, 2.0, 30), chi_m=rng.uniform(0.0, 1.0, 30))
    shift = tuple(rng.uniform(-3.0, 3.0, 2))
    first = make_scene(medium, Grid2D(h=0.3, n1=6, n2=5), contrast)
    second = make_scene(medium, Grid2D(origin=shift, h=0.3, n1=6, n2=5), contrast)
    a = assembly.assemble_dense(first).matrix
    b = assembly.assemble_dense(second).matrix
    deviation = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
    return deviation, f"dense matrix unchanged by shifting the grid by {shift}"


@invariant("angular-integrals", 1e-12)
def _angular_integrals(rng):
    report = oracle.check_angular_identities(256)
    worst = max(report.deviations, key=report.deviations.get)
    return report.max_deviation, f"worst identity {worst}"


# ============================================================================
# Self terms
# ============================================================================

@invariant("self-term-quadrature", 1e-8)
def _self_term_quadrature(rng):
    deviation = 0.0
    for kbh in (0.05, 0.3, 1.0):
        closed = assembly.self_term(1.0, kbh) + 0.5
        deviation = max(deviation, abs(oracle.brute_force_self_term(1.0, kbh, 6) - closed))
    return deviation, "closed form vs polar quadrature at refinement 6, k_b h in {0.05, 0.3, 1}"


@invariant("diagonal-limit", 1e-4)
def _diagonal_limit(rng):
    kbh = 1e-3
    electric = assembly.electric_bracket(1.0, kbh)
    magnetic = assembly.magnetic_bracket(1.0, kbh)
    deviation = max(abs(electric - 0.5), abs(magnetic))
    return deviation, "E bracket -> 1/2 and H3 bracket -> 0 at k_b h = 1e-3"


# ============================================================================
# Operators and symbol
# ============================================================================

@invariant("dense-fast-equivalence", 1e-10)
def _dense_fast(rng):
    provider = get_provider_registry().get_provider(SCENARIO_PROVIDER)()
    deviation, worst = 0.0, ''
    for name in provider.get_test_scenarios():
        scene = provider.setup_scene(name, seed=int(rng.integers(2 ** 31)))
        try:
            size = 3 * scene.n_cells
            u = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            dense = assembly.dense_matvec(scene, u)
            fast = fastop.apply(fastop.build_operator(scene, workers=1), u)
            rel = float(np.linalg.norm(dense - fast) / np.linalg.norm(dense))
        finally:
            provider.cleanup_after_test(name)
        if rel >= deviation:
            deviation, worst = rel, name
    return deviation, f"relative matvec difference, worst scenario {worst}"


@invariant("symbol-route-equivalence", 1e-10)
def _symbol_routes(rng):
    chi_e = complex(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.5))
    angles = 2.0 * math.pi * np.arange(64) / 64
    closed = symbol.full_symbol(chi_e, angles)
    harmonic = symbol.compound_symbol(chi_e, angles)
    deviation = float(np.max(np.abs(closed - harmonic)))
    return deviation, f"I + chi_e Q vs harmonic route at 64 angles, chi_e = {chi_e:.3f}"


# ============================================================================
# Special functions
# ============================================================================

@invariant("bessel-wronskian", 1e-10)
def _wronskian(rng):
    x = np.linspace(0.1, 50.0, 500)
    j0, j1 = specfun.bessel_j(0, x), specfun.bessel_j(1, x)
    y0, y1 = specfun.bessel_y(0, x), specfun.bessel_y(1, x)
    w = j1 * y0 - j0 * y1
    deviation = float(np.max(np.abs(w * math.pi * x / 2.0 - 1.0)))
    return deviation, "J1 Y0 - J0 Y1 = 2/(pi x) on [0.1, 50]"


@invariant("hankel-small-argument", 1e-6)
def _hankel_small(rng):
    x = 1e-6
    deviation = abs(x * specfun.hankel1(1, x) + 2j / math.pi)
    return deviation, "x H1(x) -> -2i/pi at x = 1e-6"


def run_checks(seed: int = 0) -> List[InvariantResult]:
    """Run every registered check with a generator seeded from ``seed``."""
    results = []
    for check in CHECKS.values():
        rng = np.random.default_rng([seed, len(results)])
        try:
            deviation, detail = check.func(rng)
            deviation = float(deviation)
            passed = bool(deviation <= check.tolerance)
        except Exception as e:
            deviation, detail, passed = float('nan'), f"{type(e).__name__}: {e}", False
        if not passed:
            logger.error(f"invariant {check.name} failed: deviation {deviation:.3e} "
                         f"> {check.tolerance:g} ({detail})")
        results.append(InvariantResult(invariant=check.name, passed=passed, deviation=deviation,
                                       tolerance=check.tolerance, detail=detail))
    return results


__all__ = ['InvariantResult', 'CHECKS', 'invariant', 'run_checks']
