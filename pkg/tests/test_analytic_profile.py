import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

import gevreylab.analytic_profile as ap
from gevreylab.errors import BranchCutError, DomainError


def test_hat_h_small_xi_branch():
    assert ap.hat_h(0.0) == 0.0
    # leading quartic behaviour: hat_h(xi) ~ (25/24) xi^4
    assert ap.hat_h(1e-3) / 1e-12 == pytest.approx(25.0 / 24.0, rel=1e-3)
    # the two branches agree with the quartic model where they meet
    for xi in (0.99e-2, 1.01e-2):
        assert ap.hat_h(xi) == pytest.approx(25.0 / 24.0 * xi ** 4, rel=1e-2)


def test_hat_H_identity_and_limit():
    assert ap.hat_H(0.0) == pytest.approx(25.0 / 24.0)
    xs = np.linspace(-5, 5, 41)
    assert np.max(np.abs(ap.hat_H(xs) * xs ** 4 - ap.hat_h(xs))) < 1e-13
    # tail: hat_H ~ e^{-|xi|}/xi^4
    assert ap.hat_H(30.0) * 30.0 ** 4 * np.exp(30.0) == pytest.approx(1.0, rel=1e-10)


def test_hat_Phi_even_positive_decay():
    v1, e1 = ap.hat_Phi(2.0)
    v2, _ = ap.hat_Phi(-2.0)
    assert v1 == pytest.approx(v2, abs=1e-14)
    assert e1 < 1e-12
    # Gaussian smoothing preserves the e^{-|xi|}/xi^4 tail up to a constant
    v, _ = ap.hat_Phi(25.0)
    assert 0.5 < v * 25.0 ** 4 * math.exp(25.0) < 5.0


def test_phi_coefficients_positive_and_decaying():
    ks = np.arange(0, 40)
    c = np.array([ap.phi_fourier(k) for k in ks])
    assert np.all(c > 0)
    # log-slope settles near -1 (unit analyticity radius) from below, with a
    # -5/k polynomial correction from the k^{-5}-type prefactor
    slope = np.diff(np.log(c[20:40]))
    assert np.all(slope < -1.0)
    assert np.max(np.abs(slope + 1.0)) < 0.3


def test_g11_series_verdicts():
    g = ap.g11_partial_sums(1.0)
    assert g.verdict == "convergent"
    g12 = ap.g11_partial_sums(1.2)
    assert g12.verdict == "divergent"
    g08 = ap.g11_partial_sums(0.8)
    assert g08.verdict == "convergent"


def test_g11_ladder_requires_enough_modes():
    with pytest.raises(DomainError):
        ap.g11_ladder(n_max=60, k_max=100)


def test_script_H_zero_and_axis_consistency():
    assert abs(ap.script_H(0.0)) < 1e-14
    for y in (-0.5, -0.9, -0.99):
        a = ap.script_H(1j * y)
        b = ap.script_H_imag_axis(y)
        assert abs(a - b) < 1e-10 * max(1.0, abs(b))
        assert abs(a.real) < 1e-12
    # double precision agrees with the high-precision evaluation
    c = ap.script_H(-0.99j, dps=40)
    assert abs(c - ap.script_H(-0.99j)) < 1e-9


def test_script_H_branch_cut_guard():
    with pytest.raises(BranchCutError):
        ap.script_H(1.0j)
    with pytest.raises(DomainError):
        ap.script_H_imag_axis(-1.0)


def test_script_E_two_routes_agree():
    for z in (0.5j, -0.9j, 1.0 + 0.5j, -0.999j):
        f = ap.script_E(z, method="fourier")
        p = ap.script_E(z, method="path")
        assert abs(f - p) < 1e-8
    assert abs(ap.script_E(0.7).imag) < 1e-12


def test_script_E0_is_inverse_transform_of_hat_E0():
    v, _ = quad(ap.hat_E0, -np.inf, np.inf)
    assert ap.script_E0(0.0) == pytest.approx(v / math.sqrt(2 * math.pi), rel=1e-9)


def test_third_derivative_against_quadrature():
    # reconstruct Phi from its fourth derivative by the Cauchy kernel and
    # compare a finite-difference third derivative with the closed form
    def h_real(x):
        return math.sqrt(2 / math.pi) / (1 + x * x) + ap.script_E0(x).real

    def H_real(x):
        v, _ = quad(lambda w: (x - w) ** 3 / 6 * h_real(w), 0, x, limit=200)
        return v

    def Phi(x):
        return math.exp(-x * x / 2) * H_real(x)

    x0, h = 0.8, 1e-2
    fd = (Phi(x0 + 2 * h) - 2 * Phi(x0 + h) + 2 * Phi(x0 - h) - Phi(x0 - 2 * h)) \
        / (2 * h ** 3)
    assert fd == pytest.approx(float(ap.Phi_triple_prime(x0).real), abs=5e-4)


def test_blowup_scan_strictly_increasing():
    vals = [abs(ap.phi_triple_prime_imag_axis(y))
            for y in (-0.9, -0.99, -0.999, -0.9999)]
    frozen = [2.8930750175763285, 5.625324901494091,
              7.343861607696655, 8.884679064160304]
    assert vals == pytest.approx(frozen, rel=1e-8)
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_blowup_ratio_limit():
    # |Phi'''(iy)| / (sqrt(2/pi) |arctanh y|) approaches 1 (bounded correction
    # terms divided by the logarithmic divergence)
    r6 = ap.log_blowup_ratio("1e-6")
    r40 = ap.log_blowup_ratio("1e-40")
    assert abs(r40 - 1.0) < 0.05
    assert abs(r40 - 1.0) < abs(r6 - 1.0)


def test_psi_eval_and_strip_halfwidth():
    y2, t = 0.5, 0.1
    assert ap.psi_eval(y2, t) == pytest.approx(
        ap.phi_triple_prime_imag_axis(y2 - 0.75 * t))
    assert ap.strip_halfwidth(0.08) == pytest.approx(1.0 - 0.06)
