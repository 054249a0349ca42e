"""Phase functions and transport maps for the magnetic deformation.

Travel-time phases P, the reparametrization Phi matching magnetic and
free phases, its eta-derivative, the amplitude/shift corrections f3, f4,
and the induced boundary map G with density A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .waves import Q, gauss_quad

_PTOL = 1e-11
_HALF_PI = np.pi / 2


def _beta_integral(f_of_u, beta: float) -> float:
    """int_0^beta f(tan b) db via the substitution u = tan b.

    The integrand becomes f(u)/(1+u^2) on [0, tan beta]; the tail beyond
    |u| = 1 is handled with a further u = +-e^v substitution so that
    composite Gauss-Legendre stays accurate arbitrarily close to the
    boundary |beta| = pi/2.
    """
    if beta == 0.0:
        return 0.0
    T = math.tan(beta)
    sgn = 1.0 if T > 0 else -1.0
    aT = abs(T)

    def g(u):
        return f_of_u(u) / (1.0 + u * u)

    if aT <= 1.0:
        return gauss_quad(g, 0.0, T, panels=16)
    inner = gauss_quad(g, 0.0, sgn, panels=16)
    L = math.log(aT)
    tail = sgn * gauss_quad(lambda v: g(sgn * np.exp(v)) * np.exp(v), 0.0, L,
                            panels=max(16, int(8 * L)))
    return inner + tail


def _Q_of_u(B1: float, mtilde: float, u):
    """Q in the u = tan beta variable: u^2 + 2 B1 m u + 1 + B1^2 - m^2."""
    return u * u + 2.0 * B1 * mtilde * u + 1.0 + B1 * B1 - mtilde * mtilde


def phase_P(B1: float, mtilde: float, beta: float) -> float:
    """Travel-time phase P(beta) = B1*beta + int_0^beta sqrt(Q)."""
    if not abs(beta) < _HALF_PI:
        raise ValueError("beta must lie in (-pi/2, pi/2)")
    return B1 * beta + _beta_integral(
        lambda u: np.sqrt(_Q_of_u(B1, mtilde, u)), beta)


def phase_P_deriv(B1: float, mtilde: float, beta: float) -> float:
    """dP/dbeta = B1 + sqrt(Q(beta))."""
    return B1 + math.sqrt(Q(B1, mtilde, beta))


def b1(B2: float, mtilde: float) -> float:
    """Angular defect rate -arctan(m / sqrt(B2^2 - m^2 + 1))."""
    return -math.atan2(mtilde, math.sqrt(B2 * B2 - mtilde * mtilde + 1.0))


def b4(B: float, mtilde: float) -> float:
    """Accumulated phase offset int_0^B b1(B2, m) dB2."""
    if B == 0.0 or mtilde == 0.0:
        return 0.0
    return gauss_quad(lambda B2: np.vectorize(b1)(B2, mtilde), 0.0, B,
                      panels=max(16, int(8 * abs(B))))


def db4_deta(B: float, eta: float) -> float:
    """Closed form of the eta-derivative of b4."""
    return (math.log(math.sqrt(1.0 - eta * eta))
            - math.log(B + math.sqrt(B * B - eta * eta + 1.0)))


def b3(B2: float, mtilde: float) -> float:
    """Real part of the first-order log-coefficient of the raising constant."""
    D = B2 * B2 - mtilde * mtilde + 1.0
    return -B2 / (2.0 * (1.0 + B2 * B2)) * (1.0 + mtilde * mtilde / D)


def b7(B: float, mtilde: float) -> float:
    """Accumulated amplitude drift int_0^B b3(B2, m) dB2."""
    if B == 0.0:
        return 0.0
    return gauss_quad(lambda B2: np.vectorize(b3)(B2, mtilde), 0.0, B,
                      panels=max(16, int(8 * abs(B))))


def _solve_P(B1: float, mtilde: float, target: float, x0: float) -> float:
    """Solve P_{B1,m}(x) = target by safeguarded Newton with bisection."""
    delta = 1e-12
    lo, hi = -_HALF_PI + delta, _HALF_PI - delta
    x = min(max(x0, lo), hi)
    for _ in range(120):
        g = phase_P(B1, mtilde, x) - target
        if abs(g) < _PTOL:
            return x
        if g > 0:
            hi = x
        else:
            lo = x
        step = g / phase_P_deriv(B1, mtilde, x)
        xn = x - step
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if xn == x:
            return x
        x = xn
    raise RuntimeError("phase equation solve failed to converge")


def Phi(B: float, mtilde: float, beta: float) -> float:
    """Reparametrization defined by P_B(Phi(beta)) = P_0(beta) - b4."""
    if B == 0.0:
        return beta
    target = phase_P(0.0, mtilde, beta) - b4(B, mtilde)
    return _solve_P(B, mtilde, target, beta)


def Phi_inv(B: float, mtilde: float, beta_prime: float) -> float:
    """Inverse of Phi: solve P_0(beta) = P_B(beta') + b4."""
    if B == 0.0:
        return beta_prime
    target = phase_P(B, mtilde, beta_prime) + b4(B, mtilde)
    return _solve_P(0.0, mtilde, target, beta_prime)


def dPhi_dbeta(B: float, mtilde: float, beta: float) -> float:
    """Closed-form dPhi/dbeta = sqrt(Q_0(beta)) / (B + sqrt(Q_B(Phi)))."""
    ph = Phi(B, mtilde, beta)
    return math.sqrt(Q(0.0, mtilde, beta)) / phase_P_deriv(B, mtilde, ph)


def _dPhi_dm_numerator(B: float, mtilde: float, beta: float,
                       phi_val: float) -> float:
    """int_0^beta dsqrtQ_0/dm - int_0^Phi dsqrtQ_B/dm - db4/dm."""
    i0 = _beta_integral(
        lambda u: -mtilde / np.sqrt(_Q_of_u(0.0, mtilde, u)), beta)
    iB = _beta_integral(
        lambda u: (B * u - mtilde) / np.sqrt(_Q_of_u(B, mtilde, u)), phi_val)
    return i0 - iB - db4_deta(B, mtilde)


def dPhi_dm(B: float, mtilde: float, beta: float) -> float:
    """eta-derivative of Phi via the quotient of phase integrals."""
    if B == 0.0:
        return 0.0
    ph = Phi(B, mtilde, beta)
    return (_dPhi_dm_numerator(B, mtilde, beta, ph)
            / phase_P_deriv(B, mtilde, ph))


def f3(B: float, beta: float, mtilde: float) -> float:
    """Log-amplitude correction b7 + (ln Q_0(beta) - ln Q_B(Phi)) / 4."""
    if B == 0.0:
        return 0.0
    ph = Phi(B, mtilde, beta)
    return b7(B, mtilde) + 0.25 * (math.log(Q(0.0, mtilde, beta))
                                   - math.log(Q(B, mtilde, ph)))


def f4(B: float, beta: float, mtilde: float) -> float:
    """Base-point shift (B + sqrt(Q_B(Phi))) * dPhi/dm.

    The denominator of dPhi/dm cancels, so this is the bare phase-integral
    numerator; it vanishes like O(pi/2 - beta) at the boundary.
    """
    if B == 0.0:
        return 0.0
    ph = Phi(B, mtilde, beta)
    return _dPhi_dm_numerator(B, mtilde, beta, ph)


def wave_norm_shift(B: float, eta: float) -> float:
    """Constant relating unit-value and WKB-amplitude wave normalizations.

    The solver waves are pinned to w(0) = 1 while the WKB amplitude is
    Q^{-1/4}, whose value at 0 depends on the field level; comparing the
    ascended wave against exp(f3) therefore requires the extra constant
    (ln Q_B(0) - ln Q_0(0)) / 4.
    """
    return 0.25 * (math.log(Q(B, eta, 0.0)) - math.log(Q(0.0, eta, 0.0)))


def _check_eta(B: float, eta: float) -> None:
    if abs(eta) >= 0.5 or B * abs(eta) >= math.sqrt(1.0 - eta * eta):
        raise ValueError("eta outside the admissible window")


def G_map(B: float, point):
    """Boundary map G(beta, sigma, eta) = (Phi(beta), sigma + f4, eta)."""
    beta, sigma, eta = point
    _check_eta(B, eta)
    return (Phi(B, eta, beta), sigma + f4(B, beta, eta), eta)


def A_density(B: float, point) -> float:
    """Transported density (dPhi_inv/dbeta)^{-1} * exp(2 f3) at a point."""
    beta, _sigma, eta = point
    _check_eta(B, eta)
    pre = Phi_inv(B, eta, beta)
    return dPhi_dbeta(B, eta, pre) * math.exp(2.0 * f3(B, pre, eta))


@dataclass(frozen=True)
class PhaseTable:
    """Immutable per-(B, mtilde) cache of the scalar phase offsets."""

    B: float
    mtilde: float
    b4_val: float = field(init=False)
    b7_val: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "b4_val", b4(self.B, self.mtilde))
        object.__setattr__(self, "b7_val", b7(self.B, self.mtilde))

    def P(self, beta: float, magnetic: bool = True) -> float:
        return phase_P(self.B if magnetic else 0.0, self.mtilde, beta)

    def Phi(self, beta: float) -> float:
        if self.B == 0.0:
            return beta
        target = phase_P(0.0, self.mtilde, beta) - self.b4_val
        return _solve_P(self.B, self.mtilde, target, beta)

    def Phi_inv(self, beta_prime: float) -> float:
        if self.B == 0.0:
            return beta_prime
        target = phase_P(self.B, self.mtilde, beta_prime) + self.b4_val
        return _solve_P(0.0, self.mtilde, target, beta_prime)

    def f3(self, beta: float) -> float:
        if self.B == 0.0:
            return 0.0
        ph = self.Phi(beta)
        return self.b7_val + 0.25 * (math.log(Q(0.0, self.mtilde, beta))
                                     - math.log(Q(self.B, self.mtilde, ph)))

    def f4(self, beta: float) -> float:
        if self.B == 0.0:
            return 0.0
        return _dPhi_dm_numerator(self.B, self.mtilde, beta, self.Phi(beta))
