"""Recursive majorant sequences certifying short-time Gevrey persistence.

Given an initial derivative ladder Omega_m with weighted sum
sum_m Omega_m delta^m / m!^s <= M, the engine evaluates the majorant recursion

    B_m = 2 C1 Omega_m
        + 2 C1 T^(1/2) (1 + T^(1/2)) sum_{0<j<m} C(m,j) B_j B_{m-j}
        + 2 C1 T^(3/2) sum_{0<j+k<m} C(m;j,k) B_j B_k B_{m-j-k},

whose weighted sum stays below 4 C1 M whenever T satisfies the smallness
constraints returned by `persistence_time`.  The base value B_0 is either the
minimal fixed point of the coupled order-zero system (default) or the a-priori
bound 3 C0 M + 1/2.

The module also brute-force checks the ingredients: the bilinear/trilinear
multi-index inequalities, the Stirling bounds (exact big-integer arithmetic),
the weighted-L2 norm identity, the domination of the summed V/Z recursions by
the B recursion, and the stability of truncated weighted sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from .errors import ConfigurationError, ConstraintError, DomainError


@dataclass
class MajorantState:
    """Inputs and (after solving) outputs of the majorant recursion."""

    omega: np.ndarray           # Omega_m, m = 0..m_max
    s: float = 1.0
    delta: float = 1.0
    C0: float = 1.0
    C1: float = 1.0
    T: float = 0.0
    d: int = 2                  # dimension tag for the combinatorial structure
    B: Optional[np.ndarray] = None
    V0: Optional[float] = None
    Z0: Optional[float] = None

    @property
    def m_max(self) -> int:
        return len(self.omega) - 1

    def weighted_sum(self) -> float:
        """sum_m B_m delta^m / m!^s, accumulated in the log domain."""
        if self.B is None:
            raise ConfigurationError("recursion not solved yet")
        return weighted_sum(self.B, self.delta, self.s)


def weighted_sum(seq: np.ndarray, delta: float, s: float) -> float:
    seq = np.asarray(seq, dtype=float)
    m = np.arange(len(seq))
    with np.errstate(divide="ignore"):
        log_t = np.log(seq, where=seq > 0, out=np.full(len(seq), -np.inf))
    return float(np.exp(logsumexp(log_t + m * np.log(delta) - s * gammaln(m + 1))))


def _multinomial(m: int, j: int, k: int) -> float:
    return math.comb(m, j) * math.comb(m - j, k)


def _order_zero_fixed_point(C0: float, T: float, omega0: float,
                            max_iter: int = 500) -> Tuple[float, float]:
    """Minimal nonnegative solution of the coupled order-zero system

        V0 = C0 Omega_0 + C0 T^(1/2) Z0 V0,
        Z0 = C0 T^(1/2) (1 + T^(1/2) Z0)^2 V0,

    by monotone fixed-point iteration from (C0 Omega_0, 0)."""
    rt = math.sqrt(T)
    v, z = C0 * omega0, 0.0
    for _ in range(max_iter):
        den = 1.0 - C0 * rt * z
        if den <= 0:
            raise ConstraintError("order-zero system has no bounded fixed point (T too large)")
        v_new = C0 * omega0 / den
        z_new = C0 * rt * (1.0 + rt * z) ** 2 * v_new
        if not (math.isfinite(v_new) and math.isfinite(z_new)) or z_new > 1e12:
            raise ConstraintError("order-zero iteration diverged (T too large)")
        if abs(v_new - v) <= 1e-15 * (1 + v) and abs(z_new - z) <= 1e-15 * (1 + z):
            return v_new, z_new
        v, z = v_new, z_new
    raise ConstraintError("order-zero iteration did not converge")


def solve_recursion(state: MajorantState, b0: str = "fixed-point") -> MajorantState:
    """Fill B_m by solving the recursion with equality (minimal majorant).

    b0="fixed-point" (default) takes B_0 = V_0 + Z_0 from the minimal solution
    of the order-zero system; b0="bound" forces the a-priori value
    B_0 = 3 C0 M + 1/2 with M the weighted sum of Omega.
    """
    omega, T, C1 = state.omega, state.T, state.C1
    if np.any(omega < 0):
        raise DomainError("Omega entries must be nonnegative")
    if T < 0:
        raise DomainError("T must be nonnegative")
    rt = math.sqrt(T)
    B = np.zeros(len(omega))
    if b0 == "fixed-point":
        v0, z0 = _order_zero_fixed_point(state.C0, T, float(omega[0]))
        B[0] = v0 + z0
    elif b0 == "bound":
        M = weighted_sum(omega, state.delta, state.s)
        v0, z0 = 3.0 * state.C0 * M, 0.5
        B[0] = v0 + z0
    else:
        raise ConfigurationError(f"unknown b0 mode {b0!r}")
    cw2 = 2.0 * C1 * rt * (1.0 + rt)
    cw3 = 2.0 * C1 * T * rt
    for m in range(1, len(omega)):
        quad_sum = sum(math.comb(m, j) * B[j] * B[m - j] for j in range(1, m))
        cub_sum = sum(
            _multinomial(m, j, k) * B[j] * B[k] * B[m - j - k]
            for j in range(m) for k in range(m - j)
            if 0 < j + k < m
        )
        B[m] = 2.0 * C1 * omega[m] + cw2 * quad_sum + cw3 * cub_sum
    return replace(state, B=B, V0=v0, Z0=z0)


# -- certified time --------------------------------------------------------------


@dataclass(frozen=True)
class PersistenceTime:
    T: float
    T1: float
    T_quadratic: float     # cap from the B_m-absorption constraint
    T_weighted: float      # cap from the weighted-sum self-bound
    binding: str
    residuals: dict


def persistence_time(M: float, s: float = 1.0, delta: float = 1.0,
                     C0: float = 1.0, C1: float = 1.0) -> PersistenceTime:
    """Largest T passing all three smallness constraints, by bisection.

    T1 solves the order-zero self-consistency with V0 at its bound 3*C0*M and
    Z0 at 1/2 (the default stand-in for the non-constructive local-existence
    time); the other two caps make the B_m absorption term <= 1/2 and the
    weighted-sum self-bound <= 1/4.  All three left sides increase in T.
    """
    if M <= 0 or delta <= 0:
        raise DomainError("M and delta must be positive")
    if s < 1.0:
        raise DomainError("s must be >= 1")
    B0 = 3.0 * C0 * M + 0.5

    def f_T1(T):
        rt = math.sqrt(T)
        return C0 * rt * (1.0 + 0.5 * rt) ** 2 * 3.0 * C0 * M - 0.5

    def f_quad(T):
        rt = math.sqrt(T)
        return C1 * rt * (1.0 + B0 + rt * B0 + T * B0 ** 2) - 0.5

    def f_weighted(T):
        rt = math.sqrt(T)
        return 8.0 * C1 ** 2 * rt * (1.0 + rt) * M + 32.0 * C1 ** 3 * T * rt * M ** 2 - 0.25

    def root(f):
        hi = 1.0
        while f(hi) < 0:
            hi *= 2.0
        return brentq(f, 0.0, hi, rtol=1e-12)

    T1, Tq, Tw = root(f_T1), root(f_quad), root(f_weighted)
    T = min(T1, Tq, Tw)
    residuals = {"T1": f_T1(T), "quadratic": f_quad(T), "weighted": f_weighted(T)}
    binding = min(residuals, key=lambda k: abs(residuals[k]))
    return PersistenceTime(T=T, T1=T1, T_quadratic=Tq, T_weighted=Tw,
                           binding=binding, residuals=residuals)


# -- consistency of the V/Z split -------------------------------------------------


def _solve_vz(omega: np.ndarray, T: float, C: float, d: int):
    """Solve the coupled V/Z recursions with equality.

    Each order m >= 1 is linear in (V_m, Z_m) given the lower orders; the
    order-zero pair is the minimal fixed point.  d selects the planar or the
    isotropic (3D) bilinear/trilinear coefficient structure.
    """
    rt = math.sqrt(T)
    n = len(omega)
    V, Z = np.zeros(n), np.zeros(n)
    V[0], Z[0] = _order_zero_fixed_point(C, T, float(omega[0]))
    for m in range(1, n):
        sv_bi = sum(math.comb(m, j) * Z[j] * V[m - j] for j in range(1, m))
        sz_bi = sv_bi
        tri = sum(
            _multinomial(m, j, k) * Z[j] * Z[k] * V[m - j - k]
            for j in range(m) for k in range(m - j)
            if 0 < j + k < m
        )
        # row 1: V_m equation; row 2: Z_m equation
        if d == 2:
            a11 = 1.0 - C * rt * Z[0]
            a12 = -C * rt * V[0]
            rhs1 = C * omega[m] + C * rt * sv_bi
        else:
            a11 = 1.0 - C * (T * Z[0] ** 2 + rt * Z[0])
            a12 = -C * (T * Z[0] * V[0] + rt * V[0])
            rhs1 = C * omega[m] + C * rt * sv_bi + C * T * tri
        a21 = -C * rt * (T * Z[0] ** 2 + rt * Z[0] + 1.0)
        a22 = 1.0 - C * rt * (T * Z[0] * V[0] + rt * V[0])
        rhs2 = C * T * rt * tri + C * T * sz_bi
        det = a11 * a22 - a12 * a21
        if det <= 0:
            raise ConstraintError(f"V/Z system singular at m={m} (T too large)")
        V[m] = (rhs1 * a22 - a12 * rhs2) / det
        Z[m] = (a11 * rhs2 - a21 * rhs1) / det
    return V, Z


def recursion_consistency_check(m_max: int = 20, trials: int = 100, d: int = 2,
                                T: float = 0.01, C: float = 1.0,
                                seed: int = 0) -> List[Tuple[int, int]]:
    """Verify that the summed V/Z recursions are dominated by the B recursion.

    For random nonnegative Omega, solves the V/Z equalities and checks
    V_m + Z_m against the right side of the combined recursion with the
    derivation's constant C1 = 5 C (1 + B_0)^2 (valid for T <= 1).  Returns
    the list of (trial, m) violations — expected empty.
    """
    if d not in (2, 3):
        raise ConfigurationError("d must be 2 or 3")
    rng = np.random.default_rng(seed)
    rt = math.sqrt(T)
    bad = []
    for trial in range(trials):
        omega = rng.uniform(0.0, 1.0, m_max + 1)
        V, Z = _solve_vz(omega, T, C, d)
        B = V + Z
        C1 = 5.0 * C * (1.0 + B[0]) ** 2
        for m in range(1, m_max + 1):
            bi = sum(math.comb(m, j) * B[j] * B[m - j] for j in range(1, m))
            tri = sum(
                _multinomial(m, j, k) * B[j] * B[k] * B[m - j - k]
                for j in range(m) for k in range(m - j)
                if 0 < j + k < m
            )
            rhs = (C1 * omega[m]
                   + C1 * rt * (1.0 + B[0] + rt * B[0] + T * B[0] ** 2) * B[m]
                   + C1 * rt * (1.0 + rt) * bi + C1 * T * rt * tri)
            if B[m] > rhs * (1.0 + 1e-12):
                bad.append((trial, m))
    return bad


# -- combinatorial and classical inequalities -------------------------------------


def _multi_indices_of_order(d: int, m: int):
    if d == 1:
        return [(m,)]
    out = []
    for head in range(m + 1):
        for tail in _multi_indices_of_order(d - 1, m - head):
            out.append((head,) + tail)
    return out


def _alpha_choose(alpha, beta) -> int:
    return math.prod(math.comb(a, b) for a, b in zip(alpha, beta))


def comb_inequality_check(m: int, j: int, k: Optional[int] = None, d: int = 2,
                          trials: int = 100, seed: int = 0,
                          exact: bool = False) -> List[int]:
    """Brute-force the bilinear (k=None) or trilinear multi-index inequality

        sum_{|a|=m, b<=a} C(a,b) x_b y_{a-b}  <=  C(m,j) (sum x)(sum y)

    and its three-factor analogue, for random nonnegative sequences over
    dimension-d multi-indices.  Returns the list of violating trial indices.
    """
    if not (0 <= j <= m) or (k is not None and not (0 <= k <= m - j)):
        raise DomainError("need 0 <= j (+ k) <= m")
    rng = np.random.default_rng(seed)
    alphas = _multi_indices_of_order(d, m)
    betas = _multi_indices_of_order(d, j)

    def draw(indices):
        if exact:
            return {ix: Fraction(int(rng.integers(0, 1000)), 1000) for ix in indices}
        return {ix: float(rng.uniform()) for ix in indices}

    bad = []
    for trial in range(trials):
        if k is None:
            gammas = _multi_indices_of_order(d, m - j)
            a, b = draw(betas), draw(gammas)
            lhs = sum(
                _alpha_choose(alpha, beta) * a[beta]
                * b[tuple(x - y for x, y in zip(alpha, beta))]
                for alpha in alphas for beta in betas
                if all(x >= y for x, y in zip(alpha, beta))
            )
            rhs = math.comb(m, j) * sum(a.values()) * sum(b.values())
        else:
            gammas = _multi_indices_of_order(d, k)
            rests = _multi_indices_of_order(d, m - j - k)
            a, b, c = draw(betas), draw(gammas), draw(rests)
            lhs = 0
            for alpha in alphas:
                for beta in betas:
                    if not all(x >= y for x, y in zip(alpha, beta)):
                        continue
                    ab = tuple(x - y for x, y in zip(alpha, beta))
                    for gamma in gammas:
                        if not all(x >= y for x, y in zip(ab, gamma)):
                            continue
                        rest = tuple(x - y for x, y in zip(ab, gamma))
                        lhs += (_alpha_choose(alpha, beta) * _alpha_choose(ab, gamma)
                                * a[beta] * b[gamma] * c[rest])
            rhs = (_multinomial(m, j, k) * sum(a.values()) * sum(b.values())
                   * sum(c.values()))
        tol = 0 if exact else 1e-12 * float(rhs)
        if lhs > rhs + tol:
            bad.append(trial)
    return bad


def stirling_check(n_max: int = 200, k_quad_max: int = 20) -> dict:
    """Verify, exactly where possible:

    (a) sqrt(2 pi) n^(n+1/2) e^-n <= n! <= e n^(n+1/2) e^-n  for n <= n_max
        (50-digit arithmetic against the exact integer factorial);
    (b) k ((2k)!)^2 <= 16^k (k!)^4 for k <= n_max — the exact integer form of
        sqrt((2k)!)/(2^k k!) <= k^(-1/4);
    (c) || xi^k e^-|xi| ||_L2(R) = sqrt((2k)!)/2^k against adaptive quadrature
        for k <= k_quad_max.
    """
    report = {"lower_ok": True, "upper_ok": True, "quarter_power_ok": True,
              "l2_identity_max_rel_err": 0.0}
    with mpmath.workdps(50):
        for n in range(1, n_max + 1):
            fact = mpmath.mpf(math.factorial(n))
            base = mpmath.power(n, n + mpmath.mpf("0.5")) * mpmath.exp(-n)
            if not mpmath.sqrt(2 * mpmath.pi) * base <= fact:
                report["lower_ok"] = False
            if not fact <= mpmath.e * base:
                report["upper_ok"] = False
    for k in range(1, n_max + 1):
        if k * math.factorial(2 * k) ** 2 > 16 ** k * math.factorial(k) ** 4:
            report["quarter_power_ok"] = False
    for k in range(0, k_quad_max + 1):
        val, _ = quad(lambda x, k=k: x ** (2 * k) * math.exp(-2 * x), 0, np.inf)
        exact = math.factorial(2 * k) / 4.0 ** k / 2.0
        rel = abs(val - exact) / exact
        report["l2_identity_max_rel_err"] = max(report["l2_identity_max_rel_err"], rel)
    return report


def truncation_stability_check(state: MajorantState, m0_max: Optional[int] = None) -> dict:
    """Partial weighted sums S_bar(m0) for m0 = 0..m0_max: nondecreasing in m0
    and bounded by 4*C1*M when T came from persistence_time."""
    if state.B is None:
        raise ConfigurationError("recursion not solved yet")
    if m0_max is None:
        m0_max = state.m_max
    M = weighted_sum(state.omega, state.delta, state.s)
    sums = [weighted_sum(state.B[: m0 + 1], state.delta, state.s)
            for m0 in range(m0_max + 1)]
    sums = np.array(sums)
    return {
        "partial_sums": sums,
        "monotone": bool(np.all(np.diff(sums) >= -1e-15 * sums[-1])),
        "bound_4C1M": 4.0 * state.C1 * M,
        "bounded": bool(sums[-1] <= 4.0 * state.C1 * M * (1 + 1e-12)),
        "tail_gap": float(sums[-1] - sums[-2]) if len(sums) > 1 else 0.0,
    }
