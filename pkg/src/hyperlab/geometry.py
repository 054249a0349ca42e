"""Geometry and classical dynamics of the hyperbolic plane.

Upper half-plane model: points z = x + iy with y > 0 and metric
ds^2 = (dx^2 + dy^2)/y^2.  Unit-determinant 2x2 real matrices act by
Mobius maps; a tangent vector is identified with the frame matrix g
carrying the upward unit vector at i onto it, so the geodesic,
horocyclic and magnetic (hypercyclic) flows become right multiplication
by explicit one-parameter subgroups and satisfy the group law exactly.

The magnetic flow at field intensity B follows curves of constant
geodesic curvature B/sqrt(B^2+1), speed sqrt(B^2+1), turning clockwise
in the chart for B > 0; as B -> +infinity the unit-speed
reparametrizations converge to the horocyclic flow.  The same dynamics
is generated by the Hamiltonian H_B = ((y*xi1 - B)^2 + (y*xi2)^2)/2 on
the cotangent bundle, with tangent and cotangent pictures glued by the
momentum shift phi_B; `flow_hamiltonian` integrates Hamilton's
equations numerically purely as a cross-check of the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

DET_TOL = 1e-9
SPEED_TOL = 1e-8


@dataclass(frozen=True)
class MobiusMap:
    """Unit-determinant real matrix [[a, b], [c, d]] acting on the half-plane."""

    a: float
    b: float
    c: float
    d: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        m = self.matrix() @ other.matrix()
        return mobius_from_matrix(m)


def mobius_from_matrix(m: np.ndarray) -> MobiusMap:
    """Build a MobiusMap from a 2x2 array, normalizing det to +1."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det <= 0:
        raise ValueError("matrix must have positive determinant")
    m = m / np.sqrt(det)
    return MobiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


@dataclass(frozen=True)
class HPoint:
    """Point x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector vx d/dx + vy d/dy at a half-plane basepoint."""

    base: HPoint
    vx: float
    vy: float

    def speed(self) -> float:
        """Hyperbolic length of the vector."""
        return float(np.hypot(self.vx, self.vy) / self.base.y)

    def as_complex(self) -> complex:
        return complex(self.vx, self.vy)


@dataclass(frozen=True)
class CotangentPt:
    """Cotangent point (x, y, xi1, xi2); xi1, xi2 conjugate to x, y."""

    base: HPoint
    xi1: float
    xi2: float


@dataclass(frozen=True)
class CylPoint:
    """Cylinder coordinates (beta, sigma), optionally with momenta (xi, eta).

    beta in (-pi/2, pi/2) is the angular coordinate, sigma the log-radial
    one (reduced mod l when a neck length l is supplied); the half-plane
    point is z = i * exp(sigma - i*beta).
    """

    beta: float
    sigma: float
    xi: float | None = None
    eta: float | None = None
    l: float | None = None

    def __post_init__(self):
        if not abs(self.beta) < np.pi / 2:
            raise ValueError(f"beta must lie in (-pi/2, pi/2), got {self.beta}")
        if self.l is not None:
            object.__setattr__(self, "sigma", float(self.sigma % self.l))


def mobius_apply(M: MobiusMap, z: HPoint) -> HPoint:
    """Apply the fractional-linear map (az+b)/(cz+d) to a half-plane point."""
    if abs(M.det() - 1.0) > DET_TOL:
        raise ValueError(f"not a unit-determinant map: det={M.det()}")
    w = (M.a * z.as_complex() + M.b) / (M.c * z.as_complex() + M.d)
    return HPoint(w.real, w.imag)


def mobius_derivative(M: MobiusMap, z: HPoint) -> complex:
    """Complex derivative of the map at z (acts on tangent vectors)."""
    return 1.0 / (M.c * z.as_complex() + M.d) ** 2


def mobius_apply_vec(M: MobiusMap, v: TangentVec) -> TangentVec:
    """Push a tangent vector forward by an isometry."""
    w = mobius_apply(M, v.base)
    dv = mobius_derivative(M, v.base) * v.as_complex()
    return TangentVec(w, dv.real, dv.imag)


def hyperbolic_distance(z1: HPoint, z2: HPoint) -> float:
    """Distance induced by ds^2 = (dx^2+dy^2)/y^2."""
    d2 = (z1.x - z2.x) ** 2 + (z1.y - z2.y) ** 2
    return float(np.arccosh(1.0 + d2 / (2.0 * z1.y * z2.y)))


def rotate(v: TangentVec, theta: float) -> TangentVec:
    """Rotate a vector about its basepoint, counterclockwise in the chart."""
    dv = np.exp(1j * theta) * v.as_complex()
    return TangentVec(v.base, dv.real, dv.imag)


def scale(v: TangentVec, c: float) -> TangentVec:
    """Scale a vector by c >= 0, keeping basepoint and direction."""
    if c < 0:
        raise ValueError("scale factor must be nonnegative")
    return TangentVec(v.base, c * v.vx, c * v.vy)


# --- tangent <-> cotangent gluing and the magnetic Hamiltonian ---


def phi_B(p: CotangentPt, B: float) -> TangentVec:
    """Momentum-shifted Legendre map (x,y,xi1,xi2) -> (x,y, y^2 xi1 - B y, y^2 xi2)."""
    y = p.base.y
    return TangentVec(p.base, y * y * p.xi1 - B * y, y * y * p.xi2)


def phi_B_inv(v: TangentVec, B: float) -> CotangentPt:
    """Inverse of phi_B: (x,y,vx,vy) -> (x,y, (vx + B y)/y^2, vy/y^2)."""
    y = v.base.y
    return CotangentPt(v.base, (v.vx + B * y) / y**2, v.vy / y**2)


def hamiltonian(p: CotangentPt, B: float) -> float:
    """Magnetic Hamiltonian H_B = ((y xi1 - B)^2 + (y xi2)^2) / 2."""
    y = p.base.y
    return 0.5 * ((y * p.xi1 - B) ** 2 + (y * p.xi2) ** 2)


def flow_hamiltonian(p: CotangentPt, B: float, t: float, tol: float = 1e-10) -> CotangentPt:
    """Integrate Hamilton's equations of H_B numerically for time t.

    xdot = dH/dxi1, ydot = dH/dxi2, xi1dot = 0, xi2dot = -dH/dy.
    Exists as a cross-check of the closed-form flows; adaptive RK
    (DOP853) at relative tolerance tol.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t == 0:
        return p

    def rhs(_, q):
        x, y, xi1, xi2 = q
        return [y * (y * xi1 - B), y * y * xi2, 0.0,
                -(xi1 * (y * xi1 - B) + y * xi2 * xi2)]

    # integrate well below the contract tolerance so the drift check has margin
    rtol = max(tol * 3e-2, 2.3e-14)
    sol = solve_ivp(rhs, (0.0, t), [p.base.x, p.base.y, p.xi1, p.xi2],
                    method="DOP853", rtol=rtol, atol=rtol * 1e-2)
    if not sol.success:
        raise RuntimeError(f"Hamiltonian integration failed: {sol.message}")
    x, y, xi1, xi2 = sol.y[:, -1]
    out = CotangentPt(HPoint(x, y), xi1, xi2)
    if abs(hamiltonian(out, B) - hamiltonian(p, B)) > 10 * tol * max(1.0, hamiltonian(p, B)):
        raise RuntimeError("energy drift exceeds tolerance")
    return out


# --- frame-bundle identification and closed-form flows ---


def _k(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def frame_of(v: TangentVec) -> np.ndarray:
    """Unit-determinant matrix carrying the upward unit vector at i onto v/|v|."""
    if v.speed() == 0:
        raise ValueError("zero vector has no frame")
    x, y = v.base.x, v.base.y
    sq = np.sqrt(y)
    translate = np.array([[sq, x / sq], [0.0, 1.0 / sq]])
    theta = np.angle(v.as_complex())
    return translate @ _k((theta - np.pi / 2) / 2)


def vec_of_frame(g: np.ndarray, speed: float) -> TangentVec:
    """Tangent vector of hyperbolic length `speed` framed by g."""
    a, b, c, d = g.ravel()
    z = (a * 1j + b) / (c * 1j + d)
    direction = 1j / (c * 1j + d) ** 2
    direction = direction / abs(direction) * z.imag  # chart components, unit length
    return TangentVec(HPoint(z.real, z.imag), speed * direction.real, speed * direction.imag)


def _flow_frame(v: TangentVec, subgroup_elt: np.ndarray, speed: float) -> TangentVec:
    return vec_of_frame(frame_of(v) @ subgroup_elt, speed)


def geodesic_flow(v: TangentVec, t: float) -> TangentVec:
    """Move v along its geodesic for arclength |v| * t."""
    speed = v.speed()
    if speed <= 0:
        raise ValueError("geodesic flow needs a nonzero vector")
    a_t = np.diag([np.exp(t / 2), np.exp(-t / 2)])
    return _flow_frame(v, a_t, speed)


_X_GEO = 0.5 * np.array([[1.0, 0.0], [0.0, -1.0]])
_X_ROT = 0.5 * np.array([[0.0, 1.0], [-1.0, 0.0]])


def _hypercyclic_subgroup(B: float, t: float) -> np.ndarray:
    # generator sqrt(B^2+1) X_geo - B X_rot squares to I/4, so exp is elementary
    X = np.sqrt(B * B + 1) * _X_GEO - B * _X_ROT
    return np.cosh(t / 2) * np.eye(2) + 2 * np.sinh(t / 2) * X


def hypercyclic_flow(v: TangentVec, B: float, t: float) -> TangentVec:
    """Magnetic flow at intensity B >= 0 on the speed-sqrt(B^2+1) bundle.

    Orbits have constant geodesic curvature B/sqrt(B^2+1) (clockwise for
    B > 0) and constant speed sqrt(B^2+1); B = 0 is the geodesic flow.
    """
    if B < 0:
        raise ValueError("field intensity must be nonnegative")
    level = np.sqrt(B * B + 1)
    if abs(v.speed() - level) > SPEED_TOL:
        raise ValueError(f"vector speed {v.speed()} not at level sqrt(B^2+1)={level}")
    return _flow_frame(v, _hypercyclic_subgroup(B, t), level)


def horocyclic_flow(v: TangentVec, t: float) -> TangentVec:
    """Unit-speed flow along clockwise curves of geodesic curvature 1."""
    if abs(v.speed() - 1.0) > SPEED_TOL:
        raise ValueError(f"horocyclic flow needs a unit vector, got speed {v.speed()}")
    n_t = np.eye(2) + t * (_X_GEO - _X_ROT)  # nilpotent generator, exact exponential
    return _flow_frame(v, n_t, 1.0)


def transport_T_B(v: TangentVec, B: float) -> TangentVec:
    """Shift a unit vector off its geodesic to the equidistant magnetic orbit.

    Rotate a quarter turn, run the geodesic flow for arcsinh(B), rotate
    back, scale to speed sqrt(B^2+1).  Conjugates the geodesic flow to
    the intensity-B magnetic flow exactly: the image of a unit-speed
    geodesic is traced by `hypercyclic_flow` through the image vector.
    """
    if abs(v.speed() - 1.0) > SPEED_TOL:
        raise ValueError(f"transport needs a unit vector, got speed {v.speed()}")
    d = float(np.arcsinh(B))
    w = rotate(v, np.pi / 2)
    w = geodesic_flow(w, d)
    w = rotate(w, -np.pi / 2)
    return scale(w, np.sqrt(B * B + 1))


# --- cylinder coordinates ---


def cyl_to_halfplane(c: CylPoint) -> HPoint:
    """z = i exp(sigma - i beta): x = e^sigma sin(beta), y = e^sigma cos(beta)."""
    r = np.exp(c.sigma)
    return HPoint(r * np.sin(c.beta), r * np.cos(c.beta))


def halfplane_to_cyl(z: HPoint, l: float | None = None) -> CylPoint:
    """Inverse of cyl_to_halfplane; reduces sigma mod l when given."""
    sigma = 0.5 * np.log(z.x**2 + z.y**2)
    beta = np.arctan2(z.x, z.y)
    return CylPoint(beta, sigma, l=l)
