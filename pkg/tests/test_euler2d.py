import numpy as np
import pytest
from scipy.integrate import trapezoid

from gevreylab.errors import ConfigurationError, DomainError
from gevreylab.euler2d import (
    Euler2D,
    bump,
    bump_exponent,
    disc_probe,
    strip_vorticity,
)
from gevreylab.spectral import SpectralField, forward_transform, grid_axes


def _field(fn, n):
    return forward_transform(SpectralField.from_function(fn, 2, n))


def test_biot_savart_single_mode():
    # omega = cos x1  =>  psi = cos x1, u = (0, sin x1)
    s = Euler2D(_field(lambda x, y: np.cos(x), 64), dt=0.01)
    u1, u2 = s.velocity_fields()
    x = grid_axes(64, 1)[0]
    assert np.max(np.abs(u1.require_values())) < 1e-13
    assert np.max(np.abs(u2.require_values() - np.sin(x)[:, None])) < 1e-13


def test_cellular_flow_is_stationary():
    s = Euler2D(_field(lambda x, y: 2 * np.sin(x) * np.sin(y), 64), dt=0.01)
    w0 = s.omega.require_values().copy()
    s.step(100)
    assert np.max(np.abs(s.omega.require_values() - w0)) < 1e-11


def test_energy_enstrophy_conservation_and_reversal():
    f = _field(lambda x, y: np.sin(x) * np.cos(2 * y) + 0.5 * np.cos(x + y), 128)
    s = Euler2D(f, dt=0.005)
    E0, Z0 = s.kinetic_energy(), s.enstrophy()
    s.step(200)
    assert abs(s.kinetic_energy() - E0) / E0 < 1e-9
    assert abs(s.enstrophy() - Z0) / Z0 < 1e-9
    s.reverse()
    s.step(200)
    s.reverse()
    w = s.omega.require_values()
    w0 = f.require_values()
    assert np.max(np.abs(w - w0)) / np.max(np.abs(w0)) < 1e-10


def test_run_until_requires_integer_steps():
    s = Euler2D(_field(lambda x, y: np.cos(x), 32), dt=0.01)
    with pytest.raises(ConfigurationError):
        s.run_until(0.015)
    s.run_until(0.05)
    assert s.t == pytest.approx(0.05)


def test_bump_profile():
    q = bump_exponent()
    assert q > 0
    xs = np.linspace(-1.5, 1.5, 200001)
    assert trapezoid(bump(xs), xs) == pytest.approx(1.0, abs=1e-8)
    assert bump(0.2) == pytest.approx(1.0)   # flat plateau on [-1/4, 1/4]
    assert bump(1.0) == 0.0 and bump(-1.2) == 0.0
    assert bump(0.9) > 0.0


def test_strip_vorticity_normalization():
    # for a sharp Gaussian the blob sits on the bump plateau, so the total
    # integral approaches the unit Gaussian mass
    f = strip_vorticity(16.0, 2048)
    total = np.mean(f.require_values()) * (8 * np.pi) ** 2
    assert total == pytest.approx(1.0, abs=1e-6)


def test_strip_vorticity_domain_checks():
    with pytest.raises(DomainError):
        strip_vorticity(2.0, 128, scale=1.0)   # box too small for the strip
    with pytest.raises(DomainError):
        strip_vorticity(0.05, 128)             # Gaussian tail would wrap


def test_disc_probe_on_known_field():
    f = _field(lambda x, y: np.cos(x) * np.cos(y), 64)
    mx, mn = disc_probe(f, (0.0, 0.0), radius=0.1)
    assert mx == pytest.approx(1.0)
    assert mn == pytest.approx(np.cos(0.1), abs=1e-3)
    mx2, _ = disc_probe(f, (np.pi / 2, 0.0), radius=0.05)
    assert abs(mx2) < 0.06
