"""A periodic profile that is analytic exactly in the unit strip.

Construction chain (all on the real line first):

    hat_h(xi)  = e^{-|xi|} - (1 - |xi| + 3/2 xi^2 - 7/6 |xi|^3) e^{-xi^2},
                 vanishing to fourth order at 0;
    hat_H(xi)  = hat_h(xi) / xi^4            (a 4-fold antiderivative);
    Phi(x)     = e^{-x^2/2} H(x)             (Gaussian cutoff), so that
    hat_Phi(xi)= \\int e^{-(xi-eta)^2/2} hat_H(eta) d eta;
    phi(x)     = sum_m Phi(x - 2 m pi)       (periodization), with
    phihat(k)  = hat_Phi(k) / sqrt(2 pi).

The resulting 2*pi-periodic phi has Fourier decay ~ e^{-|k|}/k^4: its Gevrey
G_{1,delta} series converges at delta = 1 (terms ~ n^{-9/4}) and diverges for
any delta > 1, yet |phi'''(iy)| blows up logarithmically as y -> -1+.  The
closed-form complex functions script_H (polynomial/arctan/log combination) and
the entire correction script_E give Phi'''(z) = e^{-z^2/2} (H(z) + E(z))
without any differentiation, enabling evaluation arbitrarily close to the
strip boundary (with extended precision where cancellation demands it).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import quad

from .errors import BranchCutError, DomainError, PrecisionError
from .gevrey import DerivativeLadder, GevreyEstimate, gevrey_norm

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


# -- Fourier-side profiles -------------------------------------------------------


def hat_h(xi):
    """e^{-|xi|} - (1 - |xi| + 3/2 xi^2 - 7/6 |xi|^3) e^{-xi^2}.

    Below |xi| = 1e-2 the two terms cancel to fourth order; that branch is
    evaluated in 40-digit arithmetic instead of a truncated series.
    """
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    a = np.abs(xi)
    out = np.empty_like(a)
    big = a >= 1e-2
    ab = a[big]
    out[big] = np.exp(-ab) - (1 - ab + 1.5 * ab ** 2 - 7.0 / 6.0 * ab ** 3) * np.exp(-ab ** 2)
    for i in np.nonzero(~big)[0]:
        out[i] = _hat_h_hp(float(a[i]))
    return float(out[0]) if scalar else out


@lru_cache(maxsize=4096)
def _hat_h_hp(a: float) -> float:
    with mpmath.workdps(40):
        am = mpmath.mpf(a)
        val = mpmath.exp(-am) - (1 - am + mpmath.mpf(3) / 2 * am ** 2
                                 - mpmath.mpf(7) / 6 * am ** 3) * mpmath.exp(-am ** 2)
        return float(val)


def hat_E0(xi):
    """Fourier side of the entire correction: -(1-|xi|+3/2 xi^2-7/6|xi|^3)e^{-xi^2},
    so that hat_h = e^{-|xi|} + hat_E0."""
    xi = np.asarray(xi, dtype=float)
    a = np.abs(xi)
    return -(1 - a + 1.5 * a ** 2 - 7.0 / 6.0 * a ** 3) * np.exp(-a ** 2)


def hat_H(xi):
    """hat_h(xi) / xi^4, with the finite limit 25/24 at xi = 0."""
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    a = np.abs(xi)
    out = np.empty_like(a)
    big = a >= 1e-2
    out[big] = hat_h(a[big]) / a[big] ** 4
    for i in np.nonzero(~big)[0]:
        out[i] = _hat_H_hp(float(a[i]))
    return float(out[0]) if scalar else out


@lru_cache(maxsize=4096)
def _hat_H_hp(a: float) -> float:
    if a == 0.0:
        return 25.0 / 24.0
    with mpmath.workdps(40):
        am = mpmath.mpf(a)
        h = mpmath.exp(-am) - (1 - am + mpmath.mpf(3) / 2 * am ** 2
                               - mpmath.mpf(7) / 6 * am ** 3) * mpmath.exp(-am ** 2)
        return float(h / am ** 4)


@lru_cache(maxsize=4096)
def hat_Phi(xi: float, epsrel: float = 1e-11):
    """Gaussian smoothing of hat_H:  int e^{-(xi-eta)^2/2} hat_H(eta) d eta.

    Adaptive quadrature segmented at the |eta| kinks (0, +-1/4) and around the
    Gaussian peak eta ~ xi; returns (value, error_estimate)."""
    xi = float(xi)
    pts = sorted({-0.25, 0.0, 0.25, xi - 8.0, xi - 1.0, xi, xi + 1.0, xi + 8.0})
    total, err = 0.0, 0.0

    def f(eta):
        return math.exp(-0.5 * (xi - eta) ** 2) * hat_H(eta)

    segments = [(-np.inf, pts[0])] + list(zip(pts[:-1], pts[1:])) + [(pts[-1], np.inf)]
    for a, b in segments:
        v, e = quad(f, a, b, epsabs=1e-300, epsrel=epsrel, limit=200)
        total += v
        err += abs(e)
    if not math.isfinite(total):
        raise PrecisionError(f"smoothing quadrature failed at xi={xi}")
    return total, err


def phi_fourier(k) -> np.ndarray:
    """Fourier series coefficient of the periodization: hat_Phi(|k|)/sqrt(2 pi)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    out = np.array([hat_Phi(abs(float(ki)))[0] for ki in k]) / _SQRT_2PI
    return out if out.size > 1 else float(out[0])


# -- Gevrey partial sums of the periodic profile -----------------------------------


@lru_cache(maxsize=8)
def _phi_log_coeffs(k_max: int) -> tuple:
    logs = np.empty(k_max + 1)
    for k in range(k_max + 1):
        val = abs(hat_Phi(float(k))[0]) / _SQRT_2PI
        logs[k] = math.log(val) if val > 0 else -math.inf
    return tuple(logs)


def g11_ladder(n_max: int = 60, k_max: int = 128, r: float = 2.0) -> DerivativeLadder:
    """Ladder L_n = || d^n phi / dx^n ||_{H^r(T)} from the coefficient table.

    k_max must exceed n_max comfortably: the summand k^{2n} e^{-2k} peaks at
    k = n, so the truncation is certified when k_max >= 2 n_max."""
    if k_max < 2 * n_max:
        raise DomainError(f"k_max={k_max} too small for n_max={n_max}; need >= {2 * n_max}")
    log_c = np.asarray(_phi_log_coeffs(k_max))
    k = np.arange(k_max + 1)
    with np.errstate(divide="ignore"):
        log_k = np.where(k > 0, np.log(np.maximum(k, 1)), -np.inf)
    log_w = r * np.log1p(k.astype(float) ** 2) + 2.0 * log_c
    log_terms = np.empty(n_max + 1)
    for n in range(n_max + 1):
        # both +k and -k contribute equally for k >= 1
        expo = log_w[1:] + 2.0 * n * log_k[1:] + math.log(2.0)
        terms = np.concatenate(([log_w[0]], expo)) if n == 0 else expo
        m = terms.max()
        log_terms[n] = m + math.log(np.sum(np.exp(terms - m)))
    log_terms *= 0.5
    return DerivativeLadder(mode="axis", axis=0, r=r, m_max=n_max, log_terms=log_terms)


def g11_partial_sums(delta: float, s: float = 1.0, n_max: int = 60,
                     k_max: int = 128) -> GevreyEstimate:
    """Partial sums of || d^n phi || delta^n / n!^s with convergence verdict."""
    return gevrey_norm(g11_ladder(n_max=n_max, k_max=k_max), s=s, delta=delta)


# -- closed-form complex pieces ----------------------------------------------------


def _assert_off_cuts(z: complex, tol: float = 1e-12):
    # arctan z = (i/2)(log(1 - i z) - log(1 + i z)); the two logs are cut so
    # that arctan's cuts are the rays  z = i y, |y| >= 1.
    if abs(z.real) < tol and abs(z.imag) >= 1.0 - tol:
        raise BranchCutError(f"z={z} within {tol} of an arctan branch cut")


def script_H(z: complex, dps: Optional[int] = None):
    """Closed form

        (1/12) sqrt(2/pi) [ z(-18 + 33 z^2 - 5 z^4)
                            + 2 (15 - 45 z^2 + 15 z^4 - z^6) arctan z
                            + z (39 - 28 z^2 + 3 z^4) log(1 + z^2) ].

    dps switches to mpmath with that many digits (needed near z = +-i where
    the three groups cancel severely).
    """
    z = complex(z)
    _assert_off_cuts(z)
    if dps is None:
        at = np.arctan(z) if z.imag == 0 else _arctan_c(z)
        lg = np.log1p(z * z) if abs(z) < 0.5 else np.log(1 + z * z)
        pref = _SQRT_2_OVER_PI / 12.0
        return pref * (z * (-18 + 33 * z ** 2 - 5 * z ** 4)
                       + 2 * (15 - 45 * z ** 2 + 15 * z ** 4 - z ** 6) * at
                       + z * (39 - 28 * z ** 2 + 3 * z ** 4) * lg)
    with mpmath.workdps(dps):
        zm = mpmath.mpc(z)
        at = mpmath.atan(zm)
        lg = mpmath.log(1 + zm * zm)
        pref = mpmath.sqrt(mpmath.mpf(2) / mpmath.pi) / 12
        val = pref * (zm * (-18 + 33 * zm ** 2 - 5 * zm ** 4)
                      + 2 * (15 - 45 * zm ** 2 + 15 * zm ** 4 - zm ** 6) * at
                      + zm * (39 - 28 * zm ** 2 + 3 * zm ** 4) * lg)
        return complex(val)


def _arctan_c(z: complex) -> complex:
    return 0.5j * (np.log(1 - 1j * z) - np.log(1 + 1j * z))


def script_H_imag_axis(y):
    """Independent evaluation of script_H(i y) for real y in (-1, 1):

        i sqrt(2/pi) [ y^2 artanh y + y(-18 - 33 y^2 - 5 y^4)/12
                       + (39 + 28 y^2 + 3 y^4)(2 artanh y + y log(1-y^2))/12
                       + (-24 + 11 y^2 + 12 y^4 + y^6) artanh y / 6 ].

    Accepts float or mpmath.mpf; mpf input is evaluated at the active mpmath
    precision, which is how the y -> -1 limit is probed beyond doubles.
    """
    if isinstance(y, (mpmath.mpf, mpmath.mpc)):
        at, lg = mpmath.atanh(y), mpmath.log(1 - y * y)
        pref = mpmath.sqrt(mpmath.mpf(2) / mpmath.pi)
        val = (y ** 2 * at + y * (-18 - 33 * y ** 2 - 5 * y ** 4) / 12
               + (39 + 28 * y ** 2 + 3 * y ** 4) * (2 * at + y * lg) / 12
               + (-24 + 11 * y ** 2 + 12 * y ** 4 + y ** 6) * at / 6)
        return mpmath.mpc(0, 1) * pref * val
    y = float(y)
    if not -1.0 < y < 1.0:
        raise DomainError(f"y={y} outside (-1, 1)")
    at, lg = np.arctanh(y), np.log1p(-y * y)
    val = (y ** 2 * at + y * (-18 - 33 * y ** 2 - 5 * y ** 4) / 12.0
           + (39 + 28 * y ** 2 + 3 * y ** 4) * (2 * at + y * lg) / 12.0
           + (-24 + 11 * y ** 2 + 12 * y ** 4 + y ** 6) * at / 6.0)
    return 1j * _SQRT_2_OVER_PI * val


# -- the entire correction ---------------------------------------------------------


@lru_cache(maxsize=4)
def _gauss_nodes(n: int = 200, upper: float = 12.0):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * upper * (x + 1.0), 0.5 * upper * w


def script_E0(z):
    """Inverse transform of hat_E0 at complex z (entire function):

        E0(z) = (2/sqrt(2 pi)) int_0^inf hat_E0(xi) cos(z xi) d xi.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    xi, w = _gauss_nodes()
    vals = (hat_E0(xi) * w) @ np.cos(np.multiply.outer(xi, z))
    out = 2.0 / _SQRT_2PI * vals
    return out if out.size > 1 else complex(out[0])


def _remainder(z: complex, xi: np.ndarray, n: int) -> np.ndarray:
    """R_n = (e^{i z xi} - sum_{j<n} (i z xi)^j / j!) / (i xi)^n, stable for
    small |z xi| via the tail series."""
    w = 1j * z * xi
    small = np.abs(w) < 4.0
    out = np.empty(xi.shape, dtype=complex)
    # direct formula where the subtraction is harmless
    wd = w[~small]
    acc = np.exp(wd)
    term = np.ones_like(wd)
    for j in range(n):
        acc = acc - term
        term = term * wd / (j + 1)
    out[~small] = acc
    # tail series sum_{j>=n} w^j/j! where cancellation would bite
    ws = w[small]
    term = ws ** n / math.factorial(n)
    acc = term.copy()
    j = n + 1
    while True:
        term = term * ws / j
        acc += term
        if np.all(np.abs(term) <= 1e-18 * (np.abs(acc) + 1e-30)):
            break
        j += 1
    out[small] = acc
    return out / (1j * xi) ** n


def script_E_n(z: complex, n: int, method: str = "fourier") -> complex:
    """n-fold iterated integral of E0 from 0 to z (entire), by either the
    Fourier-remainder integral or the one-dimensional path kernel
    z^n int_0^1 (1-s)^{n-1}/(n-1)! E0(s z) ds."""
    if n < 1:
        raise DomainError("n must be >= 1")
    z = complex(z)
    if method == "fourier":
        # hat_E0 is even: fold the negative axis into a second remainder term
        xi, w = _gauss_nodes()
        r = _remainder(z, xi, n) + _remainder(z, -xi, n)
        return complex(np.sum(hat_E0(xi) * r * w) / _SQRT_2PI)
    if method == "path":
        s, w = np.polynomial.legendre.leggauss(96)
        s = 0.5 * (s + 1.0)
        w = 0.5 * w
        vals = script_E0(s * z)
        kernel = (1.0 - s) ** (n - 1) / math.factorial(n - 1)
        return complex(z ** n * np.sum(w * kernel * np.atleast_1d(vals)))
    raise DomainError(f"unknown method {method!r}")


def script_E(z: complex, method: str = "fourier") -> complex:
    """E = E1 - 3 z E2 + 3 (z^2 - 1) E3 + z (3 - z^2) E4 (entire)."""
    z = complex(z)
    e = [script_E_n(z, n, method) for n in (1, 2, 3, 4)]
    return (e[0] - 3 * z * e[1] + 3 * (z * z - 1) * e[2] + z * (3 - z * z) * e[3])


# -- the third derivative on the imaginary axis -------------------------------------


def Phi_triple_prime(z: complex) -> complex:
    """Phi'''(z) = e^{-z^2/2} (script_H(z) + script_E(z))."""
    z = complex(z)
    return np.exp(-0.5 * z * z) * (script_H(z) + script_E(z))


def phi_triple_prime_imag_axis(y: float, images: int = 2) -> complex:
    """phi'''(i y) for y in (-1, 1): the principal term plus the m != 0
    periodization images at i y - 2 m pi, each damped by e^{1/2 - 2 m^2 pi^2}."""
    if not -1.0 < y < 1.0:
        raise DomainError(f"y={y} outside (-1, 1)")
    total = Phi_triple_prime(1j * y)
    for m in range(1, images + 1):
        total += Phi_triple_prime(1j * y - 2 * m * np.pi)
        total += Phi_triple_prime(1j * y + 2 * m * np.pi)
    return complex(total)


def log_blowup_ratio(one_plus_y, dps: int = 60) -> float:
    """|script_H(iy) + script_E(iy)| / (sqrt(2/pi) |artanh y|) at y = -1 + eps.

    Evaluated in dps-digit arithmetic for the divergent part so that eps far
    below double precision is meaningful; the bounded entire correction is
    taken at the limit point y = -1.  Tends to 1 as eps -> 0+.
    """
    with mpmath.workdps(dps):
        eps = mpmath.mpf(one_plus_y)
        if not 0 < eps < 1:
            raise DomainError("need 0 < 1 + y < 1")
        y = -1 + eps
        hh = script_H_imag_axis(y)
        at = mpmath.atanh(y)
        # the entire correction is O(1); double precision at the limit point
        ee = mpmath.mpc(script_E(complex(0.0, float(y))))
        denom = mpmath.sqrt(mpmath.mpf(2) / mpmath.pi) * abs(at)
        return float(abs(hh + ee) / denom)


def psi_eval(y2: float, t: float) -> complex:
    """psi(i y2, i log 2) = phi'''(i (y2 - 3 t / 4)) for t in (0, 1/10]."""
    if not 0.0 < t <= 0.1:
        raise DomainError(f"t={t} outside (0, 0.1]")
    arg = y2 - 0.75 * t
    if not -1.0 < arg < 1.0:
        raise DomainError(f"y2 - 3t/4 = {arg} outside (-1, 1)")
    return phi_triple_prime_imag_axis(arg)


def strip_halfwidth(t: float) -> float:
    """The square half-width 1 - 3 t / 4 inside which the joint extension of
    psi must stay bounded if the radius persisted."""
    return 1.0 - 0.75 * t
