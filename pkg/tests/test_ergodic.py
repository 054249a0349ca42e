"""Tests for orbit sampling, Birkhoff averages, and equidistribution."""

import math

import numpy as np
import pytest

from hyperlab.ergodic import (OrbitSample, birkhoff_average,
                              equidistribution_series, observable_family,
                              octagon_area_means, sample_orbit,
                              seeded_unit_vector, tb_shift_check)
from hyperlab.geometry import (HPoint, TangentVec, hypercyclic_flow,
                               hyperbolic_distance, mobius_apply_vec,
                               mobius_from_matrix, scale)
from hyperlab.groups import octagon_group, reduce_to_domain


V0 = seeded_unit_vector(7)


@pytest.fixture(scope="module")
def area_means():
    return octagon_area_means()


@pytest.fixture(scope="module")
def horo_orbit():
    return sample_orbit(V0, "horocyclic", 100.0)


def test_birkhoff_constant_observables(horo_orbit):
    assert birkhoff_average(horo_orbit, lambda x, y, th: np.ones_like(x)) == 1.0
    assert birkhoff_average(horo_orbit, lambda x, y, th: np.zeros_like(x)) == 0.0


def test_orbit_samples_lie_in_domain(horo_orbit):
    G = octagon_group()
    for i in range(0, len(horo_orbit.xs), 997):
        z = HPoint(horo_orbit.xs[i], horo_orbit.ys[i])
        zr, _ = reduce_to_domain(z, G)
        assert hyperbolic_distance(z, zr) < 1e-9


def test_orbit_matches_closed_form_flow():
    # reduced sample positions agree with the closed-form flow reduced
    # independently, for each flow kind
    G = octagon_group()
    for kind, B in [("geodesic", 0.0), ("horocyclic", 0.0),
                    ("hypercyclic", 0.7)]:
        orbit = sample_orbit(V0, kind, 2.0, B=B)
        for i in (37, 120, 200):
            t = i * orbit.step
            if kind == "geodesic":
                from hyperlab.geometry import geodesic_flow
                v = geodesic_flow(V0, t)
            elif kind == "horocyclic":
                from hyperlab.geometry import horocyclic_flow
                v = horocyclic_flow(V0, t)
            else:
                level = math.sqrt(B * B + 1.0)
                v = hypercyclic_flow(scale(V0, level), B, t)
            zr, _ = reduce_to_domain(v.base, G)
            zo = HPoint(orbit.xs[i], orbit.ys[i])
            assert hyperbolic_distance(zr, zo) < 1e-8


def test_hypercyclic_speed_level():
    B = 0.7
    level = math.sqrt(B * B + 1.0)
    v = scale(V0, level)
    for t in np.linspace(0.0, 3.0, 7):
        assert abs(hypercyclic_flow(v, B, t).speed() - level) < 1e-9


def test_birkhoff_deck_transformation_invariance(area_means):
    G = octagon_group()
    gamma = G.generators[2]
    v_moved = mobius_apply_vec(gamma, V0)
    fam = observable_family()
    o1 = sample_orbit(V0, "horocyclic", 50.0)
    o2 = sample_orbit(v_moved, "horocyclic", 50.0)
    for name, f in fam:
        a1 = birkhoff_average(o1, f)
        a2 = birkhoff_average(o2, f)
        assert abs(a1 - a2) < 1e-10


def test_area_means_symmetry_and_direction_zero(area_means):
    bump_vals = [area_means[f"bump{k}"] for k in range(8)]
    assert max(bump_vals) - min(bump_vals) < 1e-6
    for name in ("cos_th", "sin_th", "cos_2th", "sin_2th"):
        assert area_means[name] == 0.0


def test_constant_family_zero_discrepancy(area_means):
    fam = [("one", lambda x, y, th: np.ones_like(x))]
    rows = equidistribution_series("horocyclic", V0, [10.0, 20.0],
                                   area_means={"one": 1.0}, observables=fam)
    assert all(d == 0.0 for _, d in rows)


@pytest.mark.slow
def test_horocycle_equidistribution_trend(area_means):
    rows = equidistribution_series("horocyclic", V0, [1e2, 1e3, 1e4],
                                   area_means=area_means)
    discs = [d for _, d in rows]
    assert discs[0] >= discs[1] >= discs[2]
    assert discs[2] < 0.05


@pytest.mark.slow
def test_long_horocycle_bump_average_near_area_mean(area_means):
    orbit = sample_orbit(V0, "horocyclic", 1e4)
    name, f = observable_family()[0]
    assert abs(birkhoff_average(orbit, f) - area_means[name]) < 0.05


def test_larger_b_hypercycles_equidistribute_faster(area_means):
    d5 = equidistribution_series("hypercyclic", V0, [1e3], B=5.0,
                                 area_means=area_means)[0][1]
    d05 = equidistribution_series("hypercyclic", V0, [1e3], B=0.5,
                                  area_means=area_means)[0][1]
    assert d5 < d05


@pytest.mark.slow
def test_geodesic_mixing_trend(area_means):
    rows = equidistribution_series("geodesic", V0, [1e2, 1e4],
                                   area_means=area_means)
    assert rows[1][1] < rows[0][1]


def test_tb_shift_zero_field():
    assert tb_shift_check(V0, 0.0, 5.0) == 0.0


def test_tb_shift_magnetic():
    for B in (0.5, 1.0, 2.0):
        assert tb_shift_check(V0, B, 5.0) < 1e-6


def test_tb_shift_isometry_invariance():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(2, 2))
    if m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] < 0:
        m[:, 0] = -m[:, 0]
    m = m / math.sqrt(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    gamma = mobius_from_matrix(m)
    v_moved = mobius_apply_vec(gamma, V0)
    d0 = tb_shift_check(V0, 1.0, 5.0)
    d1 = tb_shift_check(v_moved, 1.0, 5.0)
    assert abs(d0 - d1) < 1e-8


def test_tb_shift_rejects_non_unit():
    bad = TangentVec(HPoint(0.0, 1.0), 0.0, 2.0)
    with pytest.raises(ValueError):
        tb_shift_check(bad, 1.0, 1.0)


def test_unknown_flow_kind():
    with pytest.raises(ValueError):
        sample_orbit(V0, "elliptic", 1.0)
