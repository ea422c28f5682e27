"""Closed-form benchmark flows with known analyticity behavior.

Two families:

* The 2D cellular flow u = (sin x1 cos x2, -cos x1 sin x2), a stationary Euler
  solution whose flow map on the x1-axis is explicit.  The inverse-Jacobian
  entry Y22 along that axis has Fourier coefficients exactly q(t)^|k| with
  q(t) = (e^t - 1)/(e^t + 1), so its analyticity radius ln((e^t+1)/(e^t-1))
  decays from infinity and can be dialed to any target delta by choosing t.

* A 3D shear flow u = (sin x2, 0, g(x1 - t sin x2)) with the analytic profile
  g(y) = 2/(cosh 2 - cos 2y).  It solves Euler with zero pressure, transports
  the third component along characteristics, and loses x-space analyticity at
  the explicit rate rho(t) solving rho + t sinh(rho) = 1 (close to 1/(1+t)),
  while the Lagrangian velocity v(a) = u(a, 0) never changes at all.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

from .errors import BranchCutError, DomainError
from .spectral import SpectralField, integer_wavenumbers

_POLE_TOL = 1e-14


# -- 2D cellular flow ----------------------------------------------------------


class CellularFlow:
    """Stationary cellular Euler flow; autonomous velocity field."""

    dim = 2

    def velocity(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        x1, x2 = x[0], x[1]
        return np.stack([np.sin(x1) * np.cos(x2), -np.cos(x1) * np.sin(x2)])

    def velocity_gradient(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        """grad[i, j] = d u_i / d x_j."""
        x1, x2 = x[0], x[1]
        c1c2 = np.cos(x1) * np.cos(x2)
        s1s2 = np.sin(x1) * np.sin(x2)
        return np.stack([np.stack([c1c2, -s1s2]), np.stack([s1s2, -c1c2])])

    def vorticity(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * np.sin(x[0]) * np.sin(x[1])


def cellular_cos_x1(a1, t: float):
    """cos X1(a1, t) on the x1-axis of the cellular flow (complex-capable)."""
    e2 = np.exp(2.0 * t)
    den = (e2 + 1.0) - (e2 - 1.0) * np.cos(a1)
    return ((e2 + 1.0) * np.cos(a1) - (e2 - 1.0)) / den


def cellular_x1(a1: np.ndarray, t: float) -> np.ndarray:
    """X1(a1, t) for real labels in (-pi, pi), via tan-half-angle transport."""
    return 2.0 * np.arctan(np.tan(np.asarray(a1) / 2.0) * np.exp(t))


def cellular_y22(a1, t: float):
    """Inverse-Jacobian entry Y22 = (dX2/da2)^-1 on the x1-axis.

    Accepts complex labels; raises BranchCutError at the complex poles where
    the denominator vanishes.
    """
    e2 = np.exp(2.0 * t)
    den = (e2 + 1.0) - (e2 - 1.0) * np.cos(a1)
    if np.any(np.abs(den) < _POLE_TOL * (e2 + 1.0)):
        raise BranchCutError(f"Y22 pole hit at t={t}")
    return 2.0 * np.exp(t) / den


def cellular_y22_fourier(k, t: float):
    """Exact coefficient of e^{i k a1} in Y22: q^|k| with q = (e^t-1)/(e^t+1)."""
    q = (np.exp(t) - 1.0) / (np.exp(t) + 1.0)
    return q ** np.abs(np.asarray(k, dtype=float))


def cellular_y22_field(n: int, t: float) -> SpectralField:
    """Y22 on the label axis as a 1D field built from exact coefficients."""
    k = integer_wavenumbers(n)
    return SpectralField.from_coeffs(cellular_y22_fourier(k, t).astype(complex))


def cellular_singularity_radius(t: float) -> float:
    """Distance from the real axis to the nearest Y22 pole: ln((e^t+1)/(e^t-1))."""
    if t <= 0:
        raise DomainError("radius is defined for t > 0 (infinite at t = 0)")
    return float(np.log((np.exp(t) + 1.0) / (np.exp(t) - 1.0)))


def cellular_persistence_time(delta: float) -> float:
    """Time at which the Y22 radius has shrunk to delta; involutive with
    cellular_singularity_radius (the map t <-> delta is its own inverse)."""
    return cellular_singularity_radius(delta)


def cellular_y22_pole(t: float, guess: complex = None, max_iter: int = 50) -> complex:
    """Newton search for a complex zero of the Y22 denominator."""
    e2 = np.exp(2.0 * t)

    def den(a):
        return (e2 + 1.0) - (e2 - 1.0) * np.cos(a)

    def dden(a):
        return (e2 - 1.0) * np.sin(a)

    a = complex(guess) if guess is not None else 1j * (cellular_singularity_radius(t) + 0.3)
    for _ in range(max_iter):
        step = den(a) / dden(a)
        a = a - step
        if abs(step) < 1e-14:
            return a
    raise BranchCutError(f"pole search did not converge from {guess!r} at t={t}")


# -- 3D shear flow -------------------------------------------------------------


def g_profile(y):
    """g(y) = 1/(sinh(1)^2 + sin(y)^2) = 2/(cosh 2 - cos 2y); 2pi/2-periodic."""
    return 2.0 / (np.cosh(2.0) - np.cos(2.0 * y))


def g_fourier(k):
    """Exact coefficient of e^{i k y} in g: (2/sinh 2) e^{-|k|} on even k, 0 on odd."""
    k = np.asarray(k)
    even = (k % 2 == 0)
    return np.where(even, (2.0 / np.sinh(2.0)) * np.exp(-np.abs(k)), 0.0)


def g_derivative(y, order: int = 1, k_max: int = 80):
    """d^order g / dy^order by exact, geometrically convergent Fourier summation."""
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape, dtype=complex)
    pref = 2.0 / np.sinh(2.0)
    for n in range(1, k_max // 2 + 1):
        k = 2 * n
        c = pref * np.exp(-k)
        out += c * ((1j * k) ** order * np.exp(1j * k * y)
                    + (-1j * k) ** order * np.exp(-1j * k * y))
    if order == 0:
        out += pref
    return out.real if np.isrealobj(y) else out


class ShearFlow:
    """u(x, t) = (sin x2, 0, g(x1 - t sin x2)): an exact 3D Euler solution
    with zero pressure and an explicit flow map."""

    dim = 3

    def velocity(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        x1, x2 = x[0], x[1]
        shape = np.broadcast(x1, x2).shape
        return np.stack([
            np.broadcast_to(np.sin(x2), shape),
            np.zeros(shape),
            g_profile(x1 - t * np.sin(x2)),
        ])

    def velocity_gradient(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        x1, x2 = x[0], x[1]
        shape = np.broadcast(x1, x2).shape
        gp = g_derivative(x1 - t * np.sin(x2), 1)
        fp = np.cos(x2)
        z = np.zeros(shape)
        row1 = np.stack([z, np.broadcast_to(fp, shape), z])
        row2 = np.stack([z, z, z])
        row3 = np.stack([gp, -t * fp * gp, z])
        return np.stack([row1, row2, row3])

    def flow_map(self, a: np.ndarray, t: float) -> np.ndarray:
        a1, a2, a3 = a[0], a[1], a[2]
        return np.stack([a1 + t * np.sin(a2), a2 + 0.0 * a1, a3 + t * g_profile(a1)])

    def inverse_jacobian(self, a: np.ndarray, t: float) -> np.ndarray:
        """Y[k, i] = d a_k / d x_i: the inverse of the flow-map Jacobian."""
        a1, a2 = a[0], a[1]
        shape = np.broadcast(a1, a2).shape
        fp = np.broadcast_to(np.cos(a2), shape)
        gp = np.broadcast_to(g_derivative(a1, 1), shape)
        z = np.zeros(shape)
        one = np.ones(shape)
        return np.stack([
            np.stack([one, -t * fp, z]),
            np.stack([z, one, z]),
            np.stack([-t * gp, t ** 2 * fp * gp, one]),
        ])

    def lagrangian_velocity(self, a: np.ndarray) -> np.ndarray:
        """v(a) = u(X(a, t), t): time-independent for this flow."""
        return self.velocity(a, 0.0)

    def initial_vorticity(self, x: np.ndarray) -> np.ndarray:
        x1, x2 = x[0], x[1]
        shape = np.broadcast(x1, x2).shape
        return np.stack([
            np.zeros(shape),
            -np.asarray(g_derivative(x1, 1)) + 0.0 * x2,
            np.broadcast_to(-np.cos(x2), shape),
        ])


def shear_u3_coefficients(n: int, t: float) -> SpectralField:
    """Exact 2D Fourier coefficients of u3(x1, x2, t) = g(x1 - t sin x2).

    By the Jacobi-Anger expansion,  u3hat(k, m) = ghat(k) J_m(-k t),
    so the field is assembled without any solver or FFT.
    """
    k = integer_wavenumbers(n)
    K, M = np.meshgrid(k, k, indexing="ij")
    coeffs = g_fourier(K).astype(complex) * jv(M, -K * t)
    return SpectralField.from_coeffs(coeffs)


def shear_radius_prediction(t: float) -> float:
    """Leading-order x-space analyticity radius of u3 at time t: 1/(1+t)."""
    return 1.0 / (1.0 + t)


def shear_joint_radius(t: float) -> float:
    """Exact joint (equal-width-strip) radius: the root of rho + t sinh rho = 1."""
    if t < 0:
        raise DomainError("t must be >= 0")
    return float(brentq(lambda r: r + t * np.sinh(r) - 1.0, 0.0, 1.0))
