import numpy as np
import pytest
from scipy.special import gammaln

from gevreylab.errors import ConfigurationError
from gevreylab.gevrey import (
    DerivativeLadder,
    build_ladder,
    estimate_radius,
    gevrey_norm,
)
from gevreylab.spectral import SpectralField, forward_transform, integer_wavenumbers


def test_constant_field_ladder():
    f = forward_transform(SpectralField.from_values(np.full((64, 64), 3.0)))
    lad = build_ladder(f, mode="isotropic", m_max=10)
    assert lad.term(0) == pytest.approx(3.0)
    assert lad.term(1) == 0.0
    g = gevrey_norm(lad, 1.0, 0.5)
    assert g.verdict == "convergent"
    assert g.value == pytest.approx(3.0)


def test_single_mode_axis_ladder():
    # sin x1: every axis-0 derivative has H^2 norm sqrt(2) * 2^{r/2}... with
    # |k| = 1 the Sobolev weight is (1+1)^{r/2}; the exact geometric value of
    # the weighted series at s=1 is L0 * e^{delta}.
    co = np.zeros((64, 64), dtype=complex)
    co[1, 0], co[-1, 0] = -0.5j, 0.5j
    f = SpectralField.from_coeffs(co)
    lad = build_ladder(f, mode="axis-0", r=2.0, m_max=40)
    L0 = lad.term(0)
    for m in range(1, 5):
        assert lad.term(m) == pytest.approx(L0)
    g = gevrey_norm(lad, 1.0, 0.7)
    assert g.verdict == "convergent"
    assert g.value == pytest.approx(L0 * np.exp(0.7))
    # derivatives along the other axis vanish
    lad1 = build_ladder(f, mode="axis-1", m_max=10)
    assert lad1.term(1) == 0.0
    g1 = gevrey_norm(lad1, 1.0, 2.0)
    assert g1.verdict == "convergent"
    assert g1.value == pytest.approx(L0)


def test_ladder_m_max_limit():
    f = forward_transform(SpectralField.from_values(np.zeros(16)))
    with pytest.raises(ConfigurationError):
        build_ladder(f, m_max=100)


def test_geometric_verdict_boundaries():
    # synthetic ladder L_m = m! / rho^m with rho = 0.5: the s=1 series
    # converges iff delta < rho
    m = np.arange(41)
    lad = DerivativeLadder("axis", 0, 2.0, 40, gammaln(m + 1) + m * np.log(2.0))
    assert gevrey_norm(lad, 1.0, 0.4).verdict == "convergent"
    assert gevrey_norm(lad, 1.0, 0.6).verdict == "divergent"


def test_estimate_radius_l1_shells():
    # coefficients e^{-0.5 (|k1|+|k2|)} decay with l1 radius exactly 0.5
    n = 256
    k = integer_wavenumbers(n)
    K1, K2 = np.meshgrid(k, k, indexing="ij")
    f = SpectralField.from_coeffs(
        np.exp(-0.5 * (np.abs(K1) + np.abs(K2))).astype(complex))
    est = estimate_radius(f)
    assert est.reliable
    assert est.delta_hat == pytest.approx(0.5, rel=1e-6)
    assert est.r_squared > 0.999


def test_estimate_radius_axis_mode_with_scale():
    # e^{-0.3|k|} on a box of scale 2 has physical radius 0.3 * 2 = 0.6
    n = 512
    k = integer_wavenumbers(n)
    f = SpectralField.from_coeffs(np.exp(-0.3 * np.abs(k)).astype(complex), scale=2.0)
    est = estimate_radius(f, axis=0)
    assert est.reliable
    assert est.delta_hat == pytest.approx(0.6, rel=1e-6)


def test_estimate_radius_band_limited_unreliable():
    f = forward_transform(SpectralField.from_function(
        lambda x, y: np.sin(x) * np.sin(y), 2, 64))
    est = estimate_radius(f)
    assert not est.reliable
