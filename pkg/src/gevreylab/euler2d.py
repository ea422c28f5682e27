"""Pseudo-spectral solver for the 2D incompressible Euler equations.

Vorticity form on the periodic box [-L, L]^2, L = scale*pi:

    w_t + u . grad w = 0,     u = grad^perp (Delta^-1 w),

integrated with classical RK4 and two-thirds dealiasing of the quadratic
product.  The mean vorticity mode is conserved exactly and never touched by
the Biot-Savart inversion.

Also provides the compactly-supported "rotating strip" initial data used to
probe whether a localized blob drags the far field along a horizontal strip.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from .errors import ConfigurationError, DomainError, InstabilityError
from .spectral import (
    SpectralField,
    evaluate_at_points,
    forward_transform,
    grid_axes,
    integer_wavenumbers,
)


class Euler2D:
    """RK4 time stepper for 2D Euler vorticity on an n x n grid.

    The hot loop works on half-spectrum rfft2 coefficients; `omega` and
    `velocity_fields` repackage the state as SpectralField instances.
    """

    def __init__(self, omega0: SpectralField, dt: float):
        if omega0.dim != 2:
            raise ConfigurationError("Euler2D needs a 2D vorticity field")
        if dt <= 0:
            raise ConfigurationError("dt must be positive")
        self.n = omega0.n
        self.scale = omega0.scale
        self.dt = dt
        self.t = 0.0
        self.steps_taken = 0

        n = self.n
        k1 = integer_wavenumbers(n) / self.scale
        k2 = k1[: n // 2 + 1].copy()
        k2[-1] = abs(k2[-1])
        self._k1 = k1[:, None]
        self._k2 = k2[None, :]
        ksq = self._k1 ** 2 + self._k2 ** 2
        inv = np.zeros_like(ksq)
        np.divide(1.0, ksq, where=ksq > 0, out=inv)
        self._inv_ksq = inv
        keep = np.abs(integer_wavenumbers(n)) <= n / 3
        self._mask = np.outer(keep, keep[: n // 2 + 1])

        self._wh = np.fft.rfft2(omega0.require_values())

    # -- spectral helpers ---------------------------------------------------

    def _velocity_hat(self, wh: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        psi = -wh * self._inv_ksq
        return -1j * self._k2 * psi, 1j * self._k1 * psi

    def _rhs(self, wh: np.ndarray) -> np.ndarray:
        u1h, u2h = self._velocity_hat(wh)
        u1 = np.fft.irfft2(u1h)
        u2 = np.fft.irfft2(u2h)
        wx = np.fft.irfft2(1j * self._k1 * wh)
        wy = np.fft.irfft2(1j * self._k2 * wh)
        adv = np.fft.rfft2(u1 * wx + u2 * wy)
        return -adv * self._mask

    # -- time stepping ------------------------------------------------------

    def step(self, n_steps: int = 1) -> None:
        dt = self.dt
        for _ in range(n_steps):
            wh = self._wh
            k1 = self._rhs(wh)
            k2 = self._rhs(wh + 0.5 * dt * k1)
            k3 = self._rhs(wh + 0.5 * dt * k2)
            k4 = self._rhs(wh + dt * k3)
            self._wh = wh + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            self.t += dt
            self.steps_taken += 1
            if not np.all(np.isfinite(self._wh)):
                raise InstabilityError(
                    f"non-finite vorticity after step {self.steps_taken}",
                    step_index=self.steps_taken,
                )

    def run_until(self, t_end: float) -> None:
        """Integrate forward to t_end (must sit on the step grid)."""
        remaining = t_end - self.t
        n_steps = int(round(remaining / self.dt))
        if abs(n_steps * self.dt - remaining) > 1e-10 * max(1.0, abs(t_end)):
            raise ConfigurationError(
                f"t_end={t_end} is not an integer number of steps from t={self.t}"
            )
        self.step(n_steps)

    def reverse(self) -> None:
        """Flip the sign of time (w -> -w reverses the flow)."""
        self._wh = -self._wh

    # -- state access -------------------------------------------------------

    @property
    def omega(self) -> SpectralField:
        values = np.fft.irfft2(self._wh)
        return forward_transform(SpectralField.from_values(values, scale=self.scale))

    def velocity_fields(self) -> Tuple[SpectralField, SpectralField]:
        u1h, u2h = self._velocity_hat(self._wh)
        flds = []
        for uh in (u1h, u2h):
            values = np.fft.irfft2(uh)
            flds.append(forward_transform(SpectralField.from_values(values, scale=self.scale)))
        return flds[0], flds[1]

    def kinetic_energy(self) -> float:
        u1, u2 = self.velocity_fields()
        e = np.mean(u1.require_values() ** 2 + u2.require_values() ** 2)
        return 0.5 * float(e) * (2.0 * np.pi * self.scale) ** 2

    def enstrophy(self) -> float:
        w = np.fft.irfft2(self._wh)
        return 0.5 * float(np.mean(w ** 2)) * (2.0 * np.pi * self.scale) ** 2


# -- rotating-strip initial data ---------------------------------------------


def _smoothstep(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
        b = np.where(u < 1, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
    return a / (a + b)


# Exponent making the transition integral of _smoothstep**q equal 1/3, so the
# plateau bump below has unit mass; see bump_exponent() for the defining root.
_BUMP_EXPONENT = None


def bump_exponent() -> float:
    """Root q of  int_0^1 smoothstep(u)^q du = 1/3  (cached)."""
    global _BUMP_EXPONENT
    if _BUMP_EXPONENT is None:
        u = np.linspace(0.0, 1.0, 20001)
        s = _smoothstep(u)

        def mass(q):
            return float(trapezoid(s ** q, u)) - 1.0 / 3.0

        _BUMP_EXPONENT = brentq(mass, 0.5, 10.0, xtol=1e-13)
    return _BUMP_EXPONENT


def bump(x: np.ndarray) -> np.ndarray:
    """Even C-infinity bump: 1 on [-1/4, 1/4], support (-1, 1), unit integral."""
    u = (1.0 - np.abs(x)) / 0.75
    return _smoothstep(u) ** bump_exponent()


def strip_vorticity(k: float, n: int, scale: float = 4.0,
                    c0: Optional[float] = None) -> SpectralField:
    """Localized blob times a horizontal-strip cutoff:

        w(x) = c0 k^2 exp(-k^2 |x|^2) * bump(x2),

    with c0 = 1/pi by default so the Gaussian factor has unit mass.  The box
    must be large enough (L >= 4*pi and Gaussian tail < 1e-10 at the boundary)
    for the non-periodic profile to be samplable without visible wrap-around.
    """
    if c0 is None:
        c0 = 1.0 / np.pi
    L = scale * np.pi
    if L < 4.0 * np.pi - 1e-12:
        raise DomainError(f"box half-width L={L:.3f} too small; need L >= 4*pi")
    tail = np.exp(-k ** 2 * (L - 1.0) ** 2)
    if tail > 1e-10:
        raise DomainError(
            f"Gaussian tail {tail:.2e} at the box edge exceeds 1e-10; increase k or scale"
        )
    x = grid_axes(n, 2, scale)[0]
    x1 = x[:, None]
    x2 = x[None, :]
    values = c0 * k ** 2 * np.exp(-k ** 2 * (x1 ** 2 + x2 ** 2)) * bump(x2)
    return forward_transform(SpectralField.from_values(values, scale=scale))


def disc_probe(fld: SpectralField, center: Tuple[float, float],
               radius: float = 0.05, n_radii: int = 4,
               n_angles: int = 16) -> Tuple[float, float]:
    """(max, min) of |field| over a small disc, by exact Fourier evaluation.

    Samples the center plus concentric rings; off-grid points are evaluated
    from the truncated Fourier series directly, so the probe is not limited
    by grid resolution.
    """
    pts = [np.array(center, dtype=float)[:, None]]
    for i in range(1, n_radii + 1):
        rho = radius * i / n_radii
        th = 2.0 * np.pi * np.arange(n_angles) / n_angles
        ring = np.stack([center[0] + rho * np.cos(th), center[1] + rho * np.sin(th)])
        pts.append(ring)
    points = np.concatenate(pts, axis=1)
    vals = np.abs(evaluate_at_points(fld, points))
    return float(vals.max()), float(vals.min())
