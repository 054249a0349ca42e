"""Cylindrical eigenwaves and Whittaker waves.

On the hyperbolic cylinder (coordinates beta, sigma) a wave of angular
frequency m and degree tau = B1*s separates as e^{i m sigma} w(beta),
where phi = w e^{-i tau beta} solves the oscillator equation
phi'' + s^2 Q(beta) phi = 0 with the effective potential

    Q_{B1,mt}(beta) = 2 B1 mt tan(beta) - mt^2 + 1/cos^2(beta) + B1^2,

mt = m/s.  The two WKB branches w^I / w^II are fixed by unit value at
beta = 0 and first-derivative data matching the WKB phases.  The
raising operator sends a degree-tau wave to a degree-(tau+1) wave of
the same eigenvalue; iterating [Bs] normalized raisings ("ascension")
keeps the wave on the w^I branch up to O(1/s^2) per step, with
per-step transfer coefficient given by the closed form `c1`.

The radial picture on the half-plane gives the Whittaker-type waves:
`whittaker_W` computes the recessive solution of
w'' + (-a^2 + 2 tau a / y + (s1^2 + 1/4)/y^2) w = 0 normalized as
e^{-a y} (2 a y)^tau at +infinity, at the extreme scales (values near
1e-34) needed to track peak motion under ascension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def gauss_quad(f, a: float, b: float, panels: int = 8) -> float:
    """Fixed-order composite Gauss-Legendre quadrature (deterministic)."""
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        xs = 0.5 * (hi + lo) + half * _GL_NODES
        total += half * np.sum(_GL_WEIGHTS * f(xs))
    return total


# --- effective potential ---


def Q(B1: float, mtilde: float, beta):
    """Effective potential of the separated wave equation."""
    c = np.cos(beta)
    return 2 * B1 * mtilde * np.tan(beta) - mtilde**2 + 1.0 / c**2 + B1**2


def Q_prime(B1: float, mtilde: float, beta):
    """d/dbeta of Q."""
    c = np.cos(beta)
    return 2 * B1 * mtilde / c**2 + 2 * np.sin(beta) / c**3


def sqrtQ_integral(B1: float, mtilde: float, beta: float, panels_per_unit: int = 8) -> float:
    """int_0^beta sqrt(Q), with panel count scaled to the 1/cos^2 growth."""
    if beta == 0:
        return 0.0
    panels = max(8, int(abs(beta) * panels_per_unit) + int(8 / (np.pi / 2 - abs(beta))))
    return gauss_quad(lambda b: np.sqrt(Q(B1, mtilde, b)), 0.0, beta, panels=min(panels, 400))


@dataclass(frozen=True)
class CylWave:
    """Sampled separated wave w on a beta grid, with derivative samples."""

    B1: float
    mtilde: float
    s: float
    branch: str  # 'I' or 'II'
    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    @property
    def tau(self) -> float:
        return self.B1 * self.s


@dataclass(frozen=True)
class WhittakerParams:
    tau: int
    s1: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("frequency a must be positive")


@dataclass(frozen=True)
class WaveCoeffs:
    """Finite frequency expansion m -> (alpha_m, alpha_m_II), m in 2*pi*Z/l."""

    l: float
    entries: dict  # m (float) -> (complex, complex)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 + abs(b) ** 2 for a, b in self.entries.values())


def branch_ic(B1: float, mtilde: float, s: float, branch: str) -> tuple[complex, complex]:
    """Initial data (w(0), w'(0)) pinning the WKB branch at beta = 0."""
    q0 = Q(B1, mtilde, 0.0)
    qp0 = Q_prime(B1, mtilde, 0.0)
    tau = B1 * s
    sign = +1 if branch == "I" else -1
    return 1.0 + 0j, 1j * tau + sign * 1j * s * np.sqrt(q0) - qp0 / (4 * q0)


def _solve_ode(B1, mtilde, s, w0, dw0, grid, tol):
    """Integrate w'' = 2 i tau w' + tau^2 w - s^2 Q w from 0 over the grid."""
    tau = B1 * s

    def rhs(beta, y):
        w, dw = y
        return [dw, 2j * tau * dw + (tau * tau - s * s * Q(B1, mtilde, beta)) * w]

    grid = np.asarray(grid, dtype=float)
    values = np.empty(len(grid), dtype=complex)
    derivs = np.empty(len(grid), dtype=complex)
    at0 = grid == 0
    values[at0], derivs[at0] = w0, dw0
    for direction in (+1, -1):
        sel = (grid > 0) if direction > 0 else (grid < 0)
        if not sel.any():
            continue
        order_in_ts = np.argsort(direction * grid[sel])
        ts = grid[sel][order_in_ts]
        sol = solve_ivp(rhs, (0.0, ts[-1]), [w0, dw0], method="DOP853",
                        rtol=tol, atol=tol, t_eval=ts)
        if not sol.success:
            raise RuntimeError(f"wave integration failed at beta={sol.t[-1]}: {sol.message}")
        pos = np.where(sel)[0]
        values[pos[order_in_ts]] = sol.y[0]
        derivs[pos[order_in_ts]] = sol.y[1]
    return values, derivs


def solve_wave(B1: float, mtilde: float, s: float, branch: str, grid,
               tol: float = 1e-11) -> CylWave:
    """Solve the separated wave equation for the given WKB branch on a grid."""
    if abs(mtilde) > 0.5:
        raise ValueError("need |mtilde| <= 1/2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) >= np.pi / 2):
        raise ValueError("grid must lie inside (-pi/2, pi/2)")
    w0, dw0 = branch_ic(B1, mtilde, s, branch)
    values, derivs = _solve_ode(B1, mtilde, s, w0, dw0, grid, tol)
    return CylWave(B1, mtilde, s, branch, grid, values, derivs)


def solve_wave_ic(B1: float, mtilde: float, s: float, w0: complex, dw0: complex,
                  grid, tol: float = 1e-11) -> CylWave:
    """Same equation, arbitrary initial data at beta = 0 (branch unset)."""
    grid = np.asarray(grid, dtype=float)
    values, derivs = _solve_ode(B1, mtilde, s, w0, dw0, grid, tol)
    return CylWave(B1, mtilde, s, "-", grid, values, derivs)


def wkb_eval(B1: float, mtilde: float, s: float, branch: str, beta):
    """Leading-plus-first-correction WKB value of the branch at beta."""
    sign = +1 if branch == "I" else -1
    tau = B1 * s
    beta_arr = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.empty(len(beta_arr), dtype=complex)
    for i, b in enumerate(beta_arr):
        phase = tau * b + sign * s * sqrtQ_integral(B1, mtilde, b)
        amp = (Q(B1, mtilde, 0.0) / Q(B1, mtilde, b)) ** 0.25
        out[i] = amp * np.exp(1j * phase)
    return out if np.ndim(beta) else out[0]


# --- raising / eigen operators (separated form, sigma factor dropped) ---


def apply_raising(m: float, tau: float, grid, values, derivs, s: float | None = None):
    """K_tau on e^{i m sigma} w: tau*w + i cos(beta) e^{i beta} (m*w + w').

    With s given, divides by the normalization sqrt(s^2 + tau(tau+1)).
    """
    grid = np.asarray(grid, dtype=float)
    phase = np.cos(grid) * np.exp(1j * grid)
    out = tau * np.asarray(values) + 1j * phase * (m * np.asarray(values) + np.asarray(derivs))
    if s is not None:
        out = out / np.sqrt(s * s + tau * (tau + 1))
    return out


def apply_lowering(m: float, tau: float, grid, values, derivs, s: float | None = None):
    """Lowering operator: conjugation of the raising at (-m, -tau).

    With s given, divides by sqrt(s^2 + tau(tau-1)) (the normalization
    of the raising that maps degree tau-1 up to tau).
    """
    out = np.conj(apply_raising(-m, -tau, grid, np.conj(values), np.conj(derivs)))
    if s is not None:
        out = out / np.sqrt(s * s + tau * (tau - 1))
    return out


def apply_D_tau(m: float, tau: float, grid, values, derivs, second_derivs=None):
    """Separated eigenoperator: -cos^2 w'' + 2 i tau cos^2 w' + (m^2 cos^2 - 2 tau m sin cos) w.

    Without explicit second derivatives they are estimated by 5-point
    central differences (uniform grid required, step <= 1e-3).
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values)
    derivs = np.asarray(derivs)
    if second_derivs is None:
        h = np.diff(grid)
        if not (np.allclose(h, h[0], rtol=1e-8) and h[0] <= 1e-3):
            raise ValueError("finite-difference fallback needs a uniform grid, step <= 1e-3")
        second_derivs = _five_point_second(values, h[0])
    c, sn = np.cos(grid), np.sin(grid)
    return (-c * c * np.asarray(second_derivs) + 2j * tau * c * c * derivs
            + (m * m * c * c - 2 * tau * m * sn * c) * values)


def _five_point_first(f: np.ndarray, h: float) -> np.ndarray:
    out = np.gradient(f, h, edge_order=2)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    return out


def _five_point_second(f: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(f)
    out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    out[:2] = out[2]
    out[-2:] = out[-3]
    return out


def second_deriv_from_ode(wave: CylWave, grid=None):
    """w'' on the grid via the wave's own differential equation."""
    grid = wave.grid if grid is None else np.asarray(grid)
    tau = wave.tau
    return (2j * tau * wave.derivs
            + (tau * tau - wave.s**2 * Q(wave.B1, wave.mtilde, grid)) * wave.values)


# --- transfer coefficients ---


def c1(B1: float, mtilde: float, s: float) -> complex:
    """Two-term transfer coefficient of a normalized raising on the w^I branch.

    Equals the value and first beta-derivative data of the raised wave
    at beta = 0 divided by the branch-I data at the next degree; the
    two-term form below reproduces the numerical transfer to O(1/s^2).
    """
    D = B1 * B1 - mtilde * mtilde + 1.0
    rD = np.sqrt(D)
    main = (1j * mtilde - rD) / np.sqrt(1 + B1 * B1)
    corr = ((rD - 1j * mtilde) * B1 / (2 * (1 + B1 * B1))
            - 1j * mtilde * B1 / (2 * D)) / np.sqrt(1 + B1 * B1)
    return main + corr / s


def c2_II(B1: float, mtilde: float, s: float) -> complex:
    """Transfer coefficient on the w^II branch (sign of the sqrt flipped)."""
    D = B1 * B1 - mtilde * mtilde + 1.0
    rD = np.sqrt(D)
    main = (1j * mtilde + rD) / np.sqrt(1 + B1 * B1)
    corr = ((-rD - 1j * mtilde) * B1 / (2 * (1 + B1 * B1))
            - 1j * mtilde * B1 / (2 * D)) / np.sqrt(1 + B1 * B1)
    return main + corr / s


def decompose_I_II(value_at_0: complex, deriv_at_0: complex,
                   B1: float, mtilde: float, s: float) -> tuple[complex, complex]:
    """Coefficients in the w^I/w^II basis from data at beta = 0."""
    _, d1 = branch_ic(B1, mtilde, s, "I")
    _, d2 = branch_ic(B1, mtilde, s, "II")
    det = d2 - d1  # = -2 i s sqrt(Q(0))
    if abs(det) < 1e-12:
        raise ValueError("degenerate branch system (Q(0) <= 0?)")
    cI = (value_at_0 * d2 - deriv_at_0) / det
    cII = (deriv_at_0 - value_at_0 * d1) / det
    return cI, cII


# --- ascension ---


def ascend(m: float, s: float, B: float, grid, tol: float = 1e-11):
    """Iterate [Bs] normalized raisings on the branch-I wave of frequency m.

    The chain keeps only (w(0), w'(0)) per degree: the raised value and
    derivative at beta = 0 follow from the current data and the ODE, and
    the raised wave is recovered by re-solving at the next degree, so no
    sampling error accumulates.  Returns the exact chain wave on the
    grid, the closed-form approximation (final branch-I wave times the
    accumulated c1 product), and the product itself.
    """
    n = int(np.floor(B * s))
    if n < 1:
        wave = solve_wave(0.0, m / s, s, "I", grid, tol)
        return wave, wave.values.copy(), 1.0 + 0j
    mtilde = m / s
    w0, dw0 = branch_ic(0.0, mtilde, s, "I")
    prod = 1.0 + 0j
    for tau in range(n):
        B1 = tau / s
        norm = np.sqrt(s * s + tau * (tau + 1))
        ddw0 = 2j * tau * dw0 + (tau * tau - s * s * Q(B1, mtilde, 0.0)) * w0
        r0 = tau * w0 + 1j * (m * w0 + dw0)
        # (i cos(b) e^{ib})' at 0 is -1
        dr0 = tau * dw0 - (m * w0 + dw0) + 1j * (m * dw0 + ddw0)
        w0, dw0 = r0 / norm, dr0 / norm
        prod *= c1(B1, mtilde, s)
    exact = solve_wave_ic(n / s, mtilde, s, w0, dw0, grid, tol)
    closed = solve_wave(n / s, mtilde, s, "I", grid, tol).values * prod
    return exact, closed, prod


# --- Whittaker waves ---


def _asymptotic_seed(p: WhittakerParams, x0: float) -> tuple[float, float]:
    """log|W| offset and the series values (S, dS/dx) at large argument x0.

    Returns (S, Sp) for W(x) = e^{-x/2} x^kappa S(x), optimally truncated.
    """
    mu2 = -p.s1 * p.s1
    S, Sp = 1.0, 0.0
    term = 1.0
    for k in range(1, 300):
        term *= (mu2 - (p.tau - k + 0.5) ** 2) / (k * x0)
        if abs(term) < 1e-18 * abs(S):
            break
        new_S = S + term
        Sp += -k * term / x0
        if abs(term) > abs(S):  # divergence onset: stop at smallest term
            break
        S = new_S
    return S, Sp


def _whittaker_state(p: WhittakerParams, ys_arr, tol=1e-12):
    """(W, dW/dy) at the requested points by seeded inward integration.

    Seeds from the asymptotic series far out (argument ~ 4 s1^2, where
    the series is accurate despite the large imaginary index) and
    integrates the second-order equation inward, carrying a running
    log-magnitude so values near 1e-34 never underflow.
    """
    if np.any(ys_arr <= 0):
        raise ValueError("y must be positive")
    x0 = max(120.0, 4.0 * (p.s1 * p.s1 + 0.25) + 40.0)
    y0 = x0 / (2 * p.a)
    if ys_arr.max() >= y0:
        raise ValueError(f"y too large for the inward scheme (need y < {y0})")
    S, Sp = _asymptotic_seed(p, x0)
    # W(y) = e^{-a y} (2 a y)^tau S(2 a y); log magnitude carried aside
    state = np.array([S, (-p.a + p.tau / y0) * S + 2 * p.a * Sp])
    logfac = -p.a * y0 + p.tau * np.log(x0)

    def rhs(y, u):
        w, dw = u
        return [dw, (p.a * p.a - 2 * p.tau * p.a / y - (p.s1 * p.s1 + 0.25) / y / y) * w]

    targets = np.sort(ys_arr)[::-1]
    out = np.empty((len(targets), 2))
    y_cur = y0
    for j, y_t in enumerate(targets):
        segments = np.linspace(y_cur, y_t, max(2, int((y_cur - y_t) * 2) + 2))
        for a_seg, b_seg in zip(segments[:-1], segments[1:]):
            sol = solve_ivp(rhs, (a_seg, b_seg), state, method="DOP853",
                            rtol=tol, atol=1e-300)
            if not sol.success:
                raise RuntimeError(f"inward integration failed near y={a_seg}")
            state = sol.y[:, -1]
            mag = max(abs(state[0]), abs(state[1]))
            if mag > 0:
                logfac += np.log(mag)
                state = state / mag
        out[j] = state * np.exp(logfac)
        y_cur = y_t
    return out[np.argsort(np.argsort(-ys_arr))]


def whittaker_W(p: WhittakerParams, ys, tol: float = 1e-12):
    """Recessive radial wave, normalized e^{-a y} (2 a y)^tau at +infinity."""
    ys_arr = np.atleast_1d(np.asarray(ys, dtype=float))
    vals = _whittaker_state(p, ys_arr, tol)[:, 0]
    return vals if np.ndim(ys) else float(vals[0])


def whittaker_deriv(p: WhittakerParams, ys, tol: float = 1e-12):
    """dW/dy by the same inward scheme (second state component)."""
    ys_arr = np.atleast_1d(np.asarray(ys, dtype=float))
    vals = _whittaker_state(p, ys_arr, tol)[:, 1]
    return vals if np.ndim(ys) else float(vals[0])


def ascension_norm(tau: int, s1: float) -> float:
    """Product of raising normalizations from degree 0 up to tau."""
    s2 = s1 * s1 + 0.25
    out = 1.0
    for j in range(tau):
        out *= np.sqrt(s2 + j * (j + 1))
    return out


def whittaker_peaks(p: WhittakerParams, y_range: tuple[float, float],
                    n_scan: int = 2000, normalized: bool = False):
    """Local maxima (abscissa, ordinate) of |W| over a y-interval.

    One inward pass caches (W, W') on the scan grid; golden-section
    refinement to 1e-6 in y then integrates short local segments from
    the nearest cached state instead of re-seeding from infinity.  With
    `normalized`, ordinates are divided by the ascension normalization
    for degree p.tau.
    """
    lo, hi = y_range
    ys = np.linspace(lo, hi, n_scan)
    states = _whittaker_state(p, ys)
    vals = np.abs(states[:, 0])
    norm = ascension_norm(p.tau, p.s1) if normalized else 1.0

    def rhs(y, u):
        w, dw = u
        return [dw, (p.a * p.a - 2 * p.tau * p.a / y - (p.s1 * p.s1 + 0.25) / y / y) * w]

    def local_eval(y):
        i_hi = int(np.searchsorted(ys, y))
        if i_hi >= n_scan:
            i_hi = n_scan - 1
        # cached values sit at 1e-34 scale: still 270 orders above underflow
        sol = solve_ivp(rhs, (ys[i_hi], y), states[i_hi], method="DOP853",
                        rtol=1e-12, atol=1e-300)
        return abs(sol.y[0, -1])

    peaks = []
    gr = (np.sqrt(5) - 1) / 2
    for i in range(1, n_scan - 1):
        if vals[i] > vals[i - 1] and vals[i] > vals[i + 1]:
            a_br, b_br = ys[i - 1], ys[i + 1]
            while b_br - a_br > 1e-6:
                c_pt = b_br - gr * (b_br - a_br)
                d_pt = a_br + gr * (b_br - a_br)
                if local_eval(c_pt) >= local_eval(d_pt):
                    b_br = d_pt
                else:
                    a_br = c_pt
            y_pk = 0.5 * (a_br + b_br)
            peaks.append((y_pk, local_eval(y_pk) / norm))
    return peaks
