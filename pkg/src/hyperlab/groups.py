"""Discrete isometry groups of the hyperbolic plane.

Automorphy factors for forms of integer degree, the cylinder group
generated by a single dilation, a compact genus-2 group built from the
regular hyperbolic octagon with vertex angles pi/4, and greedy reduction
of points into the corresponding fundamental domains.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (HPoint, MobiusMap, hyperbolic_distance, mobius_apply,
                       mobius_from_matrix)

_MAX_REDUCTION_STEPS = 10_000

# regular octagon with all vertex angles pi/4: right triangle
# (center, side midpoint, vertex) has angles pi/8, pi/2, pi/8, giving
# cosh(apothem) = cot(pi/8) and cosh(center-to-vertex) = cot(pi/8)^2
_COSH_HALF_T = 1.0 + math.sqrt(2.0)  # cosh of the apothem = half pairing length
_COSH_R = 3.0 + 2.0 * math.sqrt(2.0)  # cosh of center-to-vertex distance


@dataclass(frozen=True)
class AutomorphyFactor:
    """Unit-modulus multiplier of a degree-tau form under an isometry."""

    value: complex
    tau: int

    def __post_init__(self):
        if abs(abs(self.value) - 1.0) > 1e-12:
            raise ValueError("automorphy factor must have unit modulus")


@dataclass(frozen=True)
class FuchsianGroup:
    """Finitely generated discrete group with a centered Dirichlet domain."""

    kind: str  # 'cylinder' or 'octagon'
    generators: tuple[MobiusMap, ...]
    inverses: tuple[MobiusMap, ...]
    l: float | None = None  # neck length, cylinder only
    vertices: tuple[complex, ...] = ()  # half-plane vertices, octagon only
    center: HPoint = field(default_factory=lambda: HPoint(0.0, 1.0))

    def __post_init__(self):
        for g, gi in zip(self.generators, self.inverses):
            if abs(g.det() - 1.0) > 1e-10:
                raise ValueError("generator must have unit determinant")
            prod = g.compose(gi).matrix()
            if np.abs(prod / prod[0, 0] - np.eye(2)).max() > 1e-10:
                raise ValueError("inverse pair check failed")


def automorphy_factor(M: MobiusMap, z: HPoint, tau: int) -> AutomorphyFactor:
    """((cz + d) / (c zbar + d))^tau at the point z."""
    zc = complex(z.x, z.y)
    base = (M.c * zc + M.d) / (M.c * zc.conjugate() + M.d)
    val = base ** tau
    return AutomorphyFactor(value=val / abs(val), tau=tau)


def cylinder_group(l: float) -> FuchsianGroup:
    """Group generated by z -> e^l z; strip 1 <= |z| < e^l is the domain."""
    if not l > 0:
        raise ValueError("neck length must be positive")
    h = math.exp(l / 2)
    g = mobius_from_matrix(np.array([[h, 0.0], [0.0, 1.0 / h]]))
    return FuchsianGroup(kind="cylinder", generators=(g,),
                         inverses=(g.inverse(),), l=l)


def _disk_generator(k: int) -> np.ndarray:
    """Disk-model translation of length 2*apothem along direction k*pi/4."""
    sh = math.sqrt(_COSH_HALF_T**2 - 1.0)
    e = cmath.exp(1j * k * math.pi / 4)
    return np.array([[_COSH_HALF_T, sh * e],
                     [sh * e.conjugate(), _COSH_HALF_T]])


_CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]])
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


def _to_halfplane_matrix(m_disk: np.ndarray) -> MobiusMap:
    m = _CAYLEY_INV @ m_disk @ _CAYLEY
    m = m / np.sqrt(np.linalg.det(m))
    if np.abs(m.imag).max() > 1e-10:
        raise RuntimeError("conjugated matrix is not real")
    return mobius_from_matrix(m.real)


def octagon_vertices_disk() -> np.ndarray:
    """Disk-model vertices of the regular octagon, at angles pi/8 + k pi/4."""
    R = math.acosh(_COSH_R)
    r = math.tanh(R / 2)
    return r * np.exp(1j * (math.pi / 8 + np.arange(8) * math.pi / 4))


def octagon_group() -> FuchsianGroup:
    """Side-pairing group of the regular octagon (genus-2 surface).

    Generator k translates along the direction k*pi/4 through the center
    and carries the opposite side onto side k; the surface relator is
    g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3.
    """
    gens = tuple(_to_halfplane_matrix(_disk_generator(k)) for k in range(4))
    invs = tuple(g.inverse() for g in gens)
    verts_disk = octagon_vertices_disk()
    # Cayley inverse: disk w -> half-plane i(1+w)/(1-w)
    verts = tuple(1j * (1 + w) / (1 - w) for w in verts_disk)
    return FuchsianGroup(kind="octagon", generators=gens, inverses=invs,
                         vertices=verts)


def octagon_relator(G: FuchsianGroup) -> np.ndarray:
    """Matrix of the genus-2 surface relator; identity for the true group."""
    g, gi = G.generators, G.inverses
    word = [g[0], gi[1], g[2], gi[3], gi[0], g[1], gi[2], g[3]]
    m = np.eye(2)
    for w in word:
        m = m @ w.matrix()
    return m * np.sign(m[0, 0])


def _angle_at(v: complex, p: complex, q: complex) -> float:
    """Interior angle at half-plane point v between geodesics to p and q.

    The Mobius map w -> (w - v)/(w - conj(v)) sends v to the disk center,
    where geodesics through the center are Euclidean diameters.
    """
    tp = (p - v) / (p - v.conjugate())
    tq = (q - v) / (q - v.conjugate())
    d = abs(cmath.phase(tp / tq))
    return min(d, 2 * math.pi - d)


def octagon_area(G: FuchsianGroup) -> float:
    """Hyperbolic area from the Gauss-Bonnet angle defect, numerically."""
    vs = G.vertices
    total = 0.0
    for i, v in enumerate(vs):
        total += _angle_at(v, vs[i - 1], vs[(i + 1) % len(vs)])
    return 6 * math.pi - total


def side_pairing_error(G: FuchsianGroup) -> float:
    """Max distance between mapped opposite-side endpoints and side k."""
    vs = G.vertices
    worst = 0.0
    for k in range(4):
        g = G.generators[k]
        # side k sits between vertices k-1 and k; its opposite between
        # vertices k+3 and k+4
        tgt = {vs[k - 1], vs[k]}
        src = [vs[k + 3], vs[(k + 4) % 8]]
        for sp in src:
            zp = mobius_apply(g, HPoint(sp.real, sp.imag))
            err = min(hyperbolic_distance(zp, HPoint(t.real, t.imag))
                      for t in tgt)
            worst = max(worst, err)
    return worst


def reduce_to_domain(z: HPoint, G: FuchsianGroup) -> tuple[HPoint, MobiusMap]:
    """Move z into the fundamental domain; returns (point, map) with
    map(point) = z."""
    ident = mobius_from_matrix(np.eye(2))
    if G.kind == "cylinder":
        sigma = 0.5 * math.log(z.x * z.x + z.y * z.y)
        k = math.floor(sigma / G.l)
        if k == 0:
            return z, ident
        f = math.exp(-k * G.l)
        gamma = mobius_from_matrix(
            np.array([[math.exp(k * G.l / 2), 0.0],
                      [0.0, math.exp(-k * G.l / 2)]]))
        return HPoint(z.x * f, z.y * f), gamma

    moves = list(G.generators) + list(G.inverses)
    inverse_moves = list(G.inverses) + list(G.generators)
    gamma = ident
    cur = z
    dist = hyperbolic_distance(cur, G.center)
    for _ in range(_MAX_REDUCTION_STEPS):
        best = None
        for mv, mv_inv in zip(moves, inverse_moves):
            cand = mobius_apply(mv, cur)
            d = hyperbolic_distance(cand, G.center)
            if d < dist - 1e-13 and (best is None or d < best[0]):
                best = (d, cand, mv_inv)
        if best is None:
            return cur, gamma
        dist, cur, used_inv = best
        gamma = gamma.compose(used_inv)
    raise RuntimeError("fundamental-domain reduction did not terminate")
