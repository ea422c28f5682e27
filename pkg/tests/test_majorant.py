import numpy as np
import pytest

from gevreylab.errors import ConstraintError, DomainError
from gevreylab.majorant import (
    MajorantState,
    comb_inequality_check,
    persistence_time,
    recursion_consistency_check,
    solve_recursion,
    stirling_check,
    truncation_stability_check,
    weighted_sum,
)


def test_zero_time_recursion_is_linear():
    # at T = 0 every nonlinear term drops out: B_m = 2 C1 Omega_m for m >= 1
    om = np.random.default_rng(0).uniform(0, 1, 10)
    st = solve_recursion(MajorantState(omega=om, T=0.0))
    assert np.max(np.abs(st.B[1:] - 2.0 * om[1:])) < 1e-14


def test_zero_forcing_bound_mode():
    st = solve_recursion(MajorantState(omega=np.zeros(10), T=0.01), b0="bound")
    assert st.B[0] == pytest.approx(0.5)   # 3 C0 M + 1/2 with M = 0
    assert st.B[1:].max() == 0.0


def test_recursion_monotone_in_forcing():
    rng = np.random.default_rng(1)
    om1 = rng.uniform(0, 1, 15)
    om2 = om1 + rng.uniform(0, 1, 15)
    s1 = solve_recursion(MajorantState(omega=om1, T=0.01))
    s2 = solve_recursion(MajorantState(omega=om2, T=0.01))
    assert np.all(s2.B >= s1.B)


def test_order_zero_fixed_point_diverges_for_large_T():
    with pytest.raises(ConstraintError):
        solve_recursion(MajorantState(omega=np.ones(5) * 10.0, T=100.0))


def test_persistence_time_properties():
    Ts = []
    for M in (0.1, 1.0, 10.0):
        pt = persistence_time(M)
        assert pt.T > 0
        assert abs(pt.residuals[pt.binding]) < 1e-10
        Ts.append(pt.T)
        om = np.zeros(41)
        om[0] = M
        st = solve_recursion(MajorantState(omega=om, T=pt.T))
        assert st.weighted_sum() <= 4.0 * st.C1 * M
    assert Ts[0] > Ts[1] > Ts[2]


def test_weighted_sum_geometric():
    # B_m = 1/2^m at s = 1, delta = 1 sums to sum (1/2)^m / m! = e^{1/2}
    B = 0.5 ** np.arange(30)
    assert weighted_sum(B, 1.0, 1.0) == pytest.approx(np.exp(0.5))


def test_truncation_stability():
    pt = persistence_time(1.0)
    om = np.zeros(31)
    om[0] = 1.0
    st = solve_recursion(MajorantState(omega=om, T=pt.T))
    rep = truncation_stability_check(st)
    assert rep["monotone"]
    assert rep["bounded"]


def test_recursion_consistency_dimensions():
    assert not recursion_consistency_check(m_max=15, trials=20, d=2)
    assert not recursion_consistency_check(m_max=15, trials=20, d=3)


def test_comb_inequalities():
    assert not comb_inequality_check(4, 2, d=2, trials=100)
    assert not comb_inequality_check(5, 2, 1, d=3, trials=20)
    assert not comb_inequality_check(4, 2, d=2, trials=5, exact=True)
    with pytest.raises(DomainError):
        comb_inequality_check(3, 5)


def test_stirling_and_l2_identity():
    rep = stirling_check(200)
    assert rep["lower_ok"] and rep["upper_ok"] and rep["quarter_power_ok"]
    assert rep["l2_identity_max_rel_err"] < 1e-10
