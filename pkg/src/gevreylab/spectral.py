"""Periodic grids, Fourier transforms, spectral derivatives, and Sobolev norms.

Fields live on uniform grids over [-L, L]^dim with L = scale * pi (scale=1 by
default).  Coefficients follow the convention

    fhat(k) = (2*pi*scale)^(-dim) * integral f(x) exp(-i k.x/scale) dx

so that a constant c has the single coefficient fhat(0) = c, and the discrete
Parseval identity reads  mean(|f|^2) = sum_k |fhat(k)|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError, NumericRangeError

_LOG_DBL_MAX = 709.0


@dataclass(frozen=True)
class Wavevector:
    """Integer wavevector of a periodic grid; physical frequency is k/scale."""

    components: Tuple[int, ...]

    def __abs__(self):
        return float(np.sqrt(sum(c * c for c in self.components)))


@dataclass(frozen=True)
class SpectralField:
    """Real periodic field with (optionally) its Fourier coefficients.

    Exactly one of `values`, `coeffs` may be None.  Instances are immutable;
    all operations return new fields.
    """

    dim: int
    n: int
    values: Optional[np.ndarray] = None
    coeffs: Optional[np.ndarray] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigurationError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.values is None and self.coeffs is None:
            raise ConfigurationError("field needs values or coeffs")
        for arr in (self.values, self.coeffs):
            if arr is not None and arr.shape != (self.n,) * self.dim:
                raise ConfigurationError(
                    f"array shape {arr.shape} does not match n={self.n}, dim={self.dim}"
                )

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_values(values: np.ndarray, scale: float = 1.0) -> "SpectralField":
        values = np.asarray(values, dtype=np.float64)
        return SpectralField(dim=values.ndim, n=values.shape[0], values=values, scale=scale)

    @staticmethod
    def from_coeffs(coeffs: np.ndarray, scale: float = 1.0) -> "SpectralField":
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        return SpectralField(dim=coeffs.ndim, n=coeffs.shape[0], coeffs=coeffs, scale=scale)

    @staticmethod
    def from_function(fn, dim: int, n: int, scale: float = 1.0) -> "SpectralField":
        """Sample fn on the uniform grid; fn takes dim arrays and broadcasts."""
        axes = grid_axes(n, dim, scale)
        mesh = np.meshgrid(*axes, indexing="ij") if dim > 1 else [axes[0]]
        return SpectralField.from_values(np.asarray(fn(*mesh), dtype=np.float64), scale=scale)

    # -- accessors ---------------------------------------------------------

    def require_coeffs(self) -> np.ndarray:
        if self.coeffs is None:
            raise ConfigurationError("coeffs not populated; call forward_transform first")
        return self.coeffs

    def require_values(self) -> np.ndarray:
        if self.values is None:
            return inverse_transform(self).values
        return self.values


def grid_axes(n: int, dim: int, scale: float = 1.0):
    """Per-axis sample points of the uniform grid on [-L, L), L = scale*pi."""
    x = (np.arange(n) / n - 0.5) * 2.0 * np.pi * scale
    return [x] * dim


def integer_wavenumbers(n: int) -> np.ndarray:
    """Integer wavenumbers in FFT layout: 0, 1, ..., n/2-1, -n/2, ..., -1."""
    return np.fft.fftfreq(n, d=1.0 / n)


def wavenumber_mesh(n: int, dim: int):
    k = integer_wavenumbers(n)
    return np.meshgrid(*([k] * dim), indexing="ij") if dim > 1 else [k]


def _check_power_of_two(n: int):
    if n < 2 or (n & (n - 1)) != 0:
        raise ConfigurationError(f"grid size must be a power of two, got {n}")


def forward_transform(fld: SpectralField) -> SpectralField:
    """Populate coefficients from samples (values are kept unchanged)."""
    _check_power_of_two(fld.n)
    values = fld.require_values()
    # The grid starts at -L, not 0: shift phases so coeffs refer to [-L, L].
    raw = np.fft.fftn(values) / fld.n ** fld.dim
    coeffs = raw * _origin_phase(fld.n, fld.dim)
    return replace(fld, values=values, coeffs=coeffs)


def inverse_transform(fld: SpectralField) -> SpectralField:
    """Populate samples from coefficients."""
    coeffs = fld.require_coeffs()
    raw = coeffs / _origin_phase(fld.n, fld.dim)
    values = np.fft.ifftn(raw).real * fld.n ** fld.dim
    return replace(fld, values=values, coeffs=coeffs)


def _origin_phase(n: int, dim: int) -> np.ndarray:
    # exp(+i k . x0 / scale) with x0 = (-pi*scale, ...): equals exp(-i pi k) = (-1)^k.
    k = integer_wavenumbers(n)
    phase = (-1.0) ** k
    out = phase
    for _ in range(dim - 1):
        out = np.multiply.outer(out, phase)
    return out


def evaluate_at_points(fld: SpectralField, points: np.ndarray) -> np.ndarray:
    """Exact evaluation of the truncated Fourier series at arbitrary points.

    points: array of shape (dim, P).  Cost O(n^dim * P) via separable factors.
    """
    coeffs = fld.require_coeffs()
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[0] != fld.dim:
        raise ConfigurationError(f"points must have shape ({fld.dim}, P)")
    k = integer_wavenumbers(fld.n)
    exps = [np.exp(1j * np.outer(k, points[j] / fld.scale)) for j in range(fld.dim)]
    if fld.dim == 1:
        out = coeffs @ exps[0]
    elif fld.dim == 2:
        out = np.einsum("ab,ap,bp->p", coeffs, exps[0], exps[1], optimize=True)
    else:
        out = np.einsum("abc,ap,bp,cp->p", coeffs, exps[0], exps[1], exps[2], optimize=True)
    return out.real


def spectral_derivative(fld: SpectralField, beta) -> SpectralField:
    """Multiply coefficients by prod_j (i k_j/scale)^beta_j.

    For |beta| > 20 the multiplier is applied in log-magnitude/phase form so
    that huge powers of k cannot overflow before meeting a tiny coefficient.
    """
    beta = tuple(int(b) for b in np.atleast_1d(beta))
    if len(beta) != fld.dim:
        raise ConfigurationError(f"multi-index length {len(beta)} != dim {fld.dim}")
    if any(b < 0 for b in beta):
        raise ConfigurationError("multi-index entries must be nonnegative")
    coeffs = fld.require_coeffs()
    order = sum(beta)
    if order == 0:
        return fld
    kmesh = wavenumber_mesh(fld.n, fld.dim)
    if order <= 20:
        mult = np.ones_like(coeffs)
        for kj, bj in zip(kmesh, beta):
            if bj:
                mult = mult * (1j * kj / fld.scale) ** bj
        new = coeffs * mult
    else:
        with np.errstate(divide="ignore"):
            logmag = sum(
                (bj * np.log(np.abs(kj) / fld.scale) if bj else 0.0)
                for kj, bj in zip(kmesh, beta)
            )
        with np.errstate(divide="ignore"):
            total = logmag + np.log(np.abs(coeffs), where=np.abs(coeffs) > 0,
                                    out=np.full(coeffs.shape, -np.inf))
        if np.any(total > _LOG_DBL_MAX):
            idx = np.unravel_index(int(np.argmax(total)), coeffs.shape)
            k_bad = Wavevector(tuple(int(kmesh[j][idx]) for j in range(fld.dim)))
            raise NumericRangeError(
                f"derivative of order {beta} overflows at k={k_bad.components}", offender=k_bad
            )
        # phase of the multiplier: i^order * prod sign(k_j)^beta_j
        sign_phase = np.ones(coeffs.shape)
        for kj, bj in zip(kmesh, beta):
            if bj:
                sign_phase = sign_phase * np.sign(kj) ** bj
        zero_mask = total == -np.inf
        mag = np.exp(np.where(zero_mask, -np.inf, total))
        phase = np.exp(1j * np.angle(coeffs)) * (1j ** (order % 4)) * sign_phase
        new = mag * phase
        new[zero_mask] = 0.0
    return replace(fld, values=None, coeffs=new)


def dealias_mask(n: int, dim: int) -> np.ndarray:
    """Two-thirds rule mask: keep modes with every |k_j| <= n/3."""
    k = integer_wavenumbers(n)
    keep1 = np.abs(k) <= n / 3
    keep = keep1
    for _ in range(dim - 1):
        keep = np.multiply.outer(keep, keep1)
    return keep


def dealias(fld: SpectralField) -> SpectralField:
    coeffs = fld.require_coeffs()
    new = np.where(dealias_mask(fld.n, fld.dim), coeffs, 0.0)
    return replace(fld, values=None, coeffs=new)


def sobolev_norm(fld: SpectralField, r: float = 2.0) -> float:
    """H^r norm ( sum_k (1+|k|^2)^r |fhat(k)|^2 )^(1/2), k in physical units."""
    if r < 0:
        raise ConfigurationError("Sobolev index r must be >= 0")
    coeffs = fld.require_coeffs()
    k2 = _k_squared(fld)
    return float(np.sqrt(np.sum((1.0 + k2) ** r * np.abs(coeffs) ** 2)))


def grid_l2(fld: SpectralField) -> float:
    """Root-mean-square of the samples; equals the coefficient l2 norm."""
    v = fld.require_values()
    return float(np.sqrt(np.mean(v ** 2)))


def _k_squared(fld: SpectralField) -> np.ndarray:
    kmesh = wavenumber_mesh(fld.n, fld.dim)
    return sum((kj / fld.scale) ** 2 for kj in kmesh)


def conjugate_symmetry_defect(fld: SpectralField) -> float:
    """Max relative |fhat(-k) - conj(fhat(k))| over all modes."""
    c = fld.require_coeffs()
    flipped = c
    for ax in range(fld.dim):
        flipped = np.roll(np.flip(flipped, axis=ax), 1, axis=ax)
    denom = max(float(np.max(np.abs(c))), 1e-300)
    return float(np.max(np.abs(flipped - np.conj(c))) / denom)
