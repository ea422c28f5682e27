import numpy as np
import pytest

from gevreylab.errors import ConfigurationError, DomainError
from gevreylab.spectral import (
    SpectralField,
    conjugate_symmetry_defect,
    dealias,
    dealias_mask,
    evaluate_at_points,
    forward_transform,
    grid_axes,
    grid_l2,
    integer_wavenumbers,
    inverse_transform,
    sobolev_norm,
    spectral_derivative,
)


def test_constant_field_coefficient():
    f = forward_transform(SpectralField.from_values(np.full((32, 32), 3.0)))
    c = f.require_coeffs()
    assert abs(c[0, 0] - 3.0) < 1e-13
    c[0, 0] = 0.0
    assert np.max(np.abs(c)) < 1e-13


def test_sine_coefficients():
    f = forward_transform(SpectralField.from_function(lambda x, y: np.sin(x), 2, 32))
    c = f.require_coeffs()
    # sin x1 = (e^{ix1} - e^{-ix1}) / 2i
    assert abs(c[1, 0] - (-0.5j)) < 1e-13
    assert abs(c[-1, 0] - 0.5j) < 1e-13


def test_round_trip_and_parseval():
    rng = np.random.default_rng(0)
    v = rng.standard_normal((64, 64))
    f = SpectralField.from_values(v)
    back = inverse_transform(forward_transform(f))
    assert np.max(np.abs(back.require_values() - v)) < 1e-12
    # rms of values equals l2 norm of coefficients
    coeffs = forward_transform(f).require_coeffs()
    assert abs(np.sqrt(np.mean(v ** 2)) - np.linalg.norm(coeffs)) < 1e-12


def test_grid_axes_and_scale():
    x = grid_axes(8, 1, scale=2.0)[0]
    assert x[0] == pytest.approx(-2.0 * np.pi)
    assert x[1] - x[0] == pytest.approx(4.0 * np.pi / 8)


def test_power_of_two_required():
    with pytest.raises(ConfigurationError):
        forward_transform(SpectralField.from_values(np.zeros(12)))


def test_evaluate_at_points_matches_function():
    f = forward_transform(SpectralField.from_function(
        lambda x, y: np.sin(x) * np.cos(2 * y), 2, 64))
    pts = np.random.default_rng(1).uniform(-3, 3, (2, 40))
    vals = evaluate_at_points(f, pts)
    assert np.max(np.abs(vals - np.sin(pts[0]) * np.cos(2 * pts[1]))) < 1e-12


def test_spectral_derivative():
    f = forward_transform(SpectralField.from_function(lambda x: np.sin(x), 1, 64))
    d = inverse_transform(spectral_derivative(f, (1,)))
    x = grid_axes(64, 1)[0]
    assert np.max(np.abs(d.require_values() - np.cos(x))) < 1e-12


def test_spectral_derivative_scale():
    # with scale=2 the box is [-2pi, 2pi) and d/dx sin(x/2) = cos(x/2)/2
    f = forward_transform(SpectralField.from_function(
        lambda x: np.sin(x / 2.0), 1, 64, scale=2.0))
    d = inverse_transform(spectral_derivative(f, (1,)))
    x = grid_axes(64, 1, scale=2.0)[0]
    assert np.max(np.abs(d.require_values() - 0.5 * np.cos(x / 2.0))) < 1e-12


def test_dealias_mask_two_thirds():
    mask = dealias_mask(12, 1)
    k = integer_wavenumbers(12)
    assert np.array_equal(mask, np.abs(k) <= 4)
    f = SpectralField.from_coeffs(np.ones(12, dtype=complex))
    g = dealias(f)
    assert np.all(g.require_coeffs()[np.abs(k) > 4] == 0)


def test_sobolev_norm_single_mode():
    # single mode e^{ikx} with |coeff| c has H^r norm c (1 + k_phys^2)^{r/2}
    co = np.zeros(32, dtype=complex)
    co[3] = 2.0
    f = SpectralField.from_coeffs(co, scale=2.0)
    kphys = 3.0 / 2.0
    assert sobolev_norm(f, 1.5) == pytest.approx(2.0 * (1 + kphys ** 2) ** 0.75)


def test_grid_l2_matches_sobolev_zero():
    f = forward_transform(SpectralField.from_function(
        lambda x, y: np.sin(x) * np.cos(y), 2, 32))
    assert grid_l2(inverse_transform(f)) == pytest.approx(sobolev_norm(f, 0.0))


def test_conjugate_symmetry_defect():
    f = forward_transform(SpectralField.from_values(
        np.random.default_rng(2).standard_normal((16, 16))))
    assert conjugate_symmetry_defect(f) < 1e-14
    co = np.zeros(16, dtype=complex)
    co[1] = 1.0  # no matching conjugate at -1
    assert conjugate_symmetry_defect(SpectralField.from_coeffs(co)) > 0.5
