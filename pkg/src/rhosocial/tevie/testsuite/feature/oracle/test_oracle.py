# src/rhosocial/tevie/testsuite/feature/oracle/test_oracle.py
"""Tests for the independent references: cylinder series, quadratures, spectra."""
import math

import numpy as np
import pydantic
import pytest
from scipy import special

from rhosocial.tevie import assembly, oracle
from rhosocial.tevie.errors import AccuracyError, DomainError, ResourceError
from rhosocial.tevie.scene import BackgroundMedium, Grid2D, PlaneWaveTE
from rhosocial.tevie.testsuite.utils import random_contrast_scene, relative_error


def _ring_points(radii, count=24):
    phi = 2.0 * math.pi * np.arange(count) / count
    return np.concatenate([np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
                           for r in radii])


# ============================================================================
# Cylinder series
# ============================================================================

def test_cylinder_spec_validation():
    with pytest.raises(pydantic.ValidationError):
        oracle.CylinderSpec(radius=1.0, chi_e_inside=-1.0)
    with pytest.raises(pydantic.ValidationError):
        oracle.CylinderSpec(radius=0.0, chi_e_inside=1.0)
    spec = oracle.CylinderSpec(radius=2.0, chi_e_inside=3.0, center=(1.0, 0.0))
    assert spec.refractive_index == pytest.approx(2.0)
    assert spec.boundary_distance(np.array([[1.0, 0.0], [4.0, 0.0]])) == pytest.approx([2.0, 1.0])


def test_empty_cylinder_returns_incident_field():
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=0.0)
    medium = BackgroundMedium(omega=1.0, eps_b=1.5, mu_b=0.8)
    wave = PlaneWaveTE.from_angle(0.6, amplitude_h3=1.0 - 0.5j)
    points = _ring_points([0.0, 0.3, 0.9, 1.1, 2.5])
    fields = oracle.mie_cylinder_fields(spec, medium, wave, points)
    e1, e2, h3 = wave.evaluate(medium, points)
    assert relative_error(fields.h3, h3) < 1e-10
    assert relative_error(fields.e1, e1) < 1e-10
    assert relative_error(fields.e2, e2) < 1e-10


def test_series_order_and_truncation_estimate():
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=1.0)
    medium = BackgroundMedium.normalized(1.0)
    fields = oracle.mie_cylinder_fields(spec, medium, PlaneWaveTE(), _ring_points([0.5, 2.0]))
    assert fields.order == 1 + oracle.SERIES_EXTRA_ORDERS
    assert fields.truncation_estimate <= oracle.TRUNCATION_LIMIT
    assert fields.inside.sum() == 24


def test_doubling_the_order_changes_nothing():
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=1.0)
    medium = BackgroundMedium.normalized(1.0)
    points = _ring_points([0.2, 0.7, 1.3, 3.0])
    base = oracle.mie_cylinder_fields(spec, medium, PlaneWaveTE(), points)
    doubled = oracle.mie_cylinder_fields(spec, medium, PlaneWaveTE(), points, order=2 * base.order)
    for name in ('e1', 'e2', 'h3'):
        assert relative_error(getattr(doubled, name), getattr(base, name)) < 1e-10


def test_fields_are_continuous_across_the_boundary():
    """Tangential E and H3 match on both sides of the interface."""
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=1.0)
    medium = BackgroundMedium.normalized(1.0)
    phi = np.linspace(0.0, 2.0 * math.pi, 13, endpoint=False)
    radial = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    eps = 1e-6
    inner = oracle.mie_cylinder_fields(spec, medium, PlaneWaveTE(), (1.0 - eps) * radial)
    outer = oracle.mie_cylinder_fields(spec, medium, PlaneWaveTE(), (1.0 + eps) * radial)
    assert np.max(np.abs(inner.h3 - outer.h3)) < 1e-5
    tangential_in = -np.sin(phi) * inner.e1 + np.cos(phi) * inner.e2
    tangential_out = -np.sin(phi) * outer.e1 + np.cos(phi) * outer.e2
    assert np.max(np.abs(tangential_in - tangential_out)) < 1e-5


@pytest.mark.parametrize("angle, center", [(0.0, (0.0, 0.0)), (0.7, (0.3, -0.2))])
def test_fields_are_symmetric_about_the_incidence_axis(rng, angle, center):
    """Reflection R across the axis keeps H3 and maps E(R x) to -R E(x)."""
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=2.0 + 0.5j, center=center)
    medium = BackgroundMedium.normalized(1.5)
    wave = PlaneWaveTE.from_angle(angle)
    d = np.array(wave.direction)
    reflect = 2.0 * np.outer(d, d) - np.eye(2)
    phi = rng.uniform(0.0, 2.0 * math.pi, 40)
    rho = np.repeat([0.3, 0.8, 1.4, 2.5], 10)
    points = np.asarray(center) + np.stack([rho * np.cos(phi), rho * np.sin(phi)], axis=-1)
    mirrored = np.asarray(center) + (points - np.asarray(center)) @ reflect.T

    base = oracle.mie_cylinder_fields(spec, medium, wave, points)
    image = oracle.mie_cylinder_fields(spec, medium, wave, mirrored)
    scale = np.max(np.abs(base.h3))
    assert np.allclose(image.h3, base.h3, rtol=1e-10, atol=1e-12 * scale)
    e_base = np.stack([base.e1, base.e2], axis=-1)
    e_image = np.stack([image.e1, image.e2], axis=-1)
    assert np.allclose(e_image, -e_base @ reflect.T, rtol=1e-10, atol=1e-12 * scale)
    if angle == 0.0:
        # along x1 the mirror is x2 -> -x2: E1 flips sign, E2 does not
        assert np.allclose(image.e1, -base.e1, atol=1e-12 * scale)
        assert np.allclose(image.e2, base.e2, atol=1e-12 * scale)


def test_points_near_boundary_are_rejected():
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=1.0)
    with pytest.raises(DomainError):
        oracle.mie_cylinder_fields(spec, BackgroundMedium.normalized(1.0), PlaneWaveTE(),
                                   np.array([[1.0, 0.0]]))


def test_truncated_series_raises_accuracy_error():
    spec = oracle.CylinderSpec(radius=2.0, chi_e_inside=1.0)
    with pytest.raises(AccuracyError):
        oracle.mie_cylinder_fields(spec, BackgroundMedium.normalized(1.0), PlaneWaveTE(),
                                   _ring_points([1.0, 3.0]), order=2)


def test_staircase_contrast_uses_cell_centers():
    spec = oracle.CylinderSpec(radius=1.0, chi_e_inside=1.0 + 0.1j)
    grid = Grid2D(origin=(-2.0, -2.0), h=0.25, n1=16, n2=16)
    contrast = oracle.staircase_contrast(spec, grid)
    inside = np.hypot(*grid.centers().T) < 1.0
    assert np.all(contrast.chi_e[inside] == 1.0 + 0.1j)
    assert np.all(contrast.chi_e[~inside] == 0)
    assert np.all(contrast.chi_m == 0)


# ============================================================================
# Angular identities and self-cell quadrature
# ============================================================================

def test_angular_identities():
    report = oracle.check_angular_identities(256)
    assert report.samples == 256
    assert report.max_deviation < 1e-12
    assert {'Q11', 'Q12', 'delta22', 'cross13', 'cross32'} <= set(report.deviations)


def test_angular_identities_need_enough_samples():
    with pytest.raises(DomainError):
        oracle.check_angular_identities(32)


@pytest.mark.parametrize("kbh", [0.05, 0.3, 1.0])
def test_self_term_closed_form_matches_quadrature(kbh):
    closed = assembly.self_term(1.0, kbh) + 0.5
    assert abs(oracle.brute_force_self_term(1.0, kbh, 6) - closed) < 1e-8


def test_quadrature_converges_monotonically():
    closed = assembly.self_term(1.0, 0.3) + 0.5
    errors = [abs(oracle.brute_force_self_term(1.0, 0.3, r) - closed) for r in range(3, 7)]
    assert all(b <= a + 1e-13 for a, b in zip(errors, errors[1:]))
    assert errors[-1] < errors[0]


def test_self_cell_tensor_structure():
    tensor = oracle.self_cell_tensor(1.0, 0.3, 6)
    assert abs(tensor[0, 1]) < 1e-10
    assert abs(tensor[0, 0] - tensor[1, 1]) < 1e-10
    assert np.all(tensor[2, :] == 0) and np.all(tensor[:, 2] == 0)


def test_magnetic_self_cell_reproduces_bracket():
    for kbh in (0.05, 0.3, 1.0):
        tensor = oracle.self_cell_tensor(1.0, kbh, 6, component='magnetic')
        assert abs(tensor[2, 2] - assembly.magnetic_bracket(1.0, kbh)) < 1e-8


@pytest.mark.parametrize("kwargs", [
    {'refinement': 1},
    {'refinement': 4, 'component': 'other'},
])
def test_self_cell_tensor_domain(kwargs):
    with pytest.raises(DomainError):
        oracle.self_cell_tensor(1.0, 0.3, **kwargs)


# ============================================================================
# Dense spectrum
# ============================================================================

def test_spectrum_of_identity():
    report = oracle.dense_spectrum(np.eye(6))
    assert report.predicted == [1.0]
    assert report.distances == pytest.approx([0.0], abs=1e-14)
    assert report.min_abs_eigenvalue == pytest.approx(1.0)


def test_spectrum_budget():
    with pytest.raises(ResourceError):
        oracle.dense_spectrum(np.eye(9), budget=6)


def test_spectrum_uses_scene_contrast(rng):
    scene = random_contrast_scene(rng, 3, 3, magnetic=False)
    report = oracle.dense_spectrum(assembly.assemble_dense(scene))
    assert min(abs(p - 1.0) for p in report.predicted) < 1e-12
    assert len(report.predicted) > 1
    assert len(report.distances) == len(report.predicted)
    assert np.all(np.isfinite(report.distances))


def test_spectrum_invariant_under_cell_relabeling(rng):
    scene = random_contrast_scene(rng, 4, 3)
    matrix = assembly.assemble_dense(scene).matrix
    n = scene.n_cells
    order = rng.permutation(n)
    perm = np.concatenate([order, order + n, order + 2 * n])
    relabeled = matrix[np.ix_(perm, perm)]
    first = oracle.dense_spectrum(matrix).eigenvalues
    second = oracle.dense_spectrum(relabeled).eigenvalues
    gaps = np.abs(first[:, None] - second[None, :]).min(axis=1)
    assert gaps.max() < 1e-6


# ============================================================================
# High-precision series
# ============================================================================

@pytest.mark.parametrize("x", [0.5, 3.0, 10.0])
def test_bessel_series_against_scipy(x):
    assert oracle.bessel_series(0, 'j', x) == pytest.approx(special.j0(x), abs=1e-14)
    assert oracle.bessel_series(1, 'j', x) == pytest.approx(special.j1(x), abs=1e-14)
    assert oracle.bessel_series(0, 'y', x) == pytest.approx(special.y0(x), abs=1e-14)
    assert oracle.bessel_series(1, 'y', x) == pytest.approx(special.y1(x), abs=1e-14)


@pytest.mark.parametrize("args", [(2, 'j', 1.0), (0, 'k', 1.0), (0, 'y', 0.0), (1, 'j', -1.0)])
def test_bessel_series_domain(args):
    with pytest.raises(DomainError):
        oracle.bessel_series(*args)
