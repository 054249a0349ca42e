"""Tests for cylinder quantization, packets, and measure transport."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlab import quantize as qz
from hyperlab import transport as tr
from hyperlab.waves import WaveCoeffs, solve_wave

L = 2 * math.pi


# --- bump profile ---


def test_bump_plateau_and_support():
    assert qz.bump(0.0) == 1.0
    assert qz.bump(0.25) == 1.0
    assert qz.bump(-0.2) == 1.0
    assert qz.bump(0.5) == 0.0
    assert qz.bump(0.6) == 0.0
    assert 0.0 < qz.bump(0.35) < 1.0


@settings(deadline=None)
@given(t=st.floats(-2, 2, allow_nan=False))
def test_bump_symmetric_and_bounded(t):
    v = qz.bump(t)
    assert 0.0 <= v <= 1.0
    assert v == qz.bump(-t)


def test_bump_monotone_shoulder():
    xs = np.linspace(0.25, 0.5, 40)
    vs = [qz.bump(x) for x in xs]
    assert all(a >= b for a, b in zip(vs, vs[1:]))


def test_observable_profiles():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    # phi1 plateau around eta0, support of width eps
    assert obs.phi1(0.2) == 1.0
    assert obs.phi1(0.31) == 0.0
    # phi4 step
    assert obs.phi4(-0.5) == 0.0
    assert obs.phi4(0.0) == 0.0
    assert obs.phi4(0.3) == 1.0
    # phi5 covers supp phi1, vanishes outside (-1/2, 1/2)
    assert obs.phi5(0.25) == 1.0
    assert obs.phi5(0.51) == 0.0
    # sigma transform at zero frequency is the integral of phi3
    assert obs.sigma_ft(0.0).real == pytest.approx(0.15, abs=1e-10)
    assert obs.sigma_ft(0.0).imag == 0.0


# --- pair forms ---


def test_q_mm_eta_cutoff_gives_zero():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    s = 100.0
    grid = np.linspace(-0.1, 0.1, 201)
    w = solve_wave(0.0, 0.45, s, "I", grid, 1e-10)
    # m/s = 0.45 lies outside supp phi1 = [0.1, 0.3]
    assert qz.q_mm(45.0, 45.0, obs, s, grid, w.values, w.values) == 0.0


def test_q_mm_diagonal_factorizes():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    s, m = 100.0, 20.0
    grid = np.linspace(-0.1, 0.1, 401)
    w = solve_wave(0.0, m / s, s, "I", grid, 1e-10)
    got = qz.q_mm(m, m, obs, s, grid, w.values, w.values)
    beta_int = qz._simpson(obs.phi2(grid) * np.abs(w.values) ** 2,
                           grid[1] - grid[0])
    expect = 1.0 * obs.sigma_ft(0.0) * beta_int
    assert got == pytest.approx(expect, rel=1e-12)
    assert got.imag == pytest.approx(0.0, abs=1e-12)


def test_quad_form_single_frequency_reduces_to_q_mm():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    s, m = 100.0, 20.0
    coeffs = WaveCoeffs(l=L, entries={m: (1.0, 0.0)})
    full = qz.quad_form(coeffs, obs, 0.0, s)
    grid = np.linspace(*obs.beta_support(), 801)
    w = solve_wave(0.0, m / s, s, "I", grid, 1e-10)
    assert full == pytest.approx(
        qz.q_mm(m, m, obs, s, grid, w.values, w.values), rel=1e-10)


def test_quad_form_empty_window():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    coeffs = WaveCoeffs(l=L, entries={})
    assert qz.quad_form(coeffs, obs, 0.0, 100.0) == 0.0


def test_quad_form_real_observable_hermitian():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    rng = np.random.default_rng(9)
    s = 100.0
    ms = [18.0, 19.0, 20.0, 21.0, 22.0]
    entries = {m: (complex(rng.normal(), rng.normal()), 0.0) for m in ms}
    coeffs = WaveCoeffs(l=L, entries=entries)
    val = qz.quad_form(coeffs, obs, 0.0, s)
    assert abs(val.imag) < 1e-8 * coeffs.norm_sq()


def test_quad_form_faraway_pairs_small():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    diffs = []
    for s in (100.0, 200.0):
        u = qz.geodesic_packet(s, 0.2, 10, L)
        windowed = qz.quad_form(u, obs, 0.0, s)
        full = qz.quad_form(u, obs, 0.0, s, freq_window=1e9)
        diffs.append(abs(full - windowed) / abs(full))
    for d, s in zip(diffs, (100.0, 200.0)):
        assert d < 2.0 * s ** -0.125
    # widening the window to 2 s^{1/8} changes less than the full gap
    s = 100.0
    u = qz.geodesic_packet(s, 0.2, 10, L)
    w1 = qz.quad_form(u, obs, 0.0, s)
    w2 = qz.quad_form(u, obs, 0.0, s, freq_window=2 * s ** 0.125)
    assert abs(w2 - w1) <= abs(
        qz.quad_form(u, obs, 0.0, s, freq_window=1e9) - w1) + 1e-12


# --- packets ---


def test_packet_single_harmonic():
    u = qz.geodesic_packet(100.0, 0.2, 1, L)
    assert list(u.entries.keys()) == [20.0]
    assert u.entries[20.0][0] == 1.0


def test_packet_normalization_and_lattice():
    u = qz.geodesic_packet(250.0, 0.2, 20, L)
    assert u.norm_sq() == pytest.approx(1.0, abs=1e-12)
    for m in u.entries:
        assert m == pytest.approx(round(m * L / (2 * math.pi))
                                  * 2 * math.pi / L, abs=1e-9)
    assert len(u.entries) == 20


def test_packet_rejects_bad_input():
    with pytest.raises(ValueError):
        qz.geodesic_packet(100.0, 0.7, 5, L)
    with pytest.raises(ValueError):
        qz.geodesic_packet(100.0, 0.2, 0, L)


@pytest.mark.slow
def test_packet_concentrates_on_limit_geodesic():
    s, K = 400.0, 20
    u = qz.geodesic_packet(s, 0.2, K, L)
    betas = np.linspace(-1.0, 1.0, 161)
    sigmas = np.linspace(0, L, 256, endpoint=False)
    dens = qz.packet_position_density(u, s, betas, sigmas)
    sigma_ref = sigmas[np.argmax(dens[np.argmin(np.abs(betas))])]
    bc = np.linspace(-1.3, 1.3, 400)
    sc = qz.limit_geodesic_sigma(0.2, sigma_ref, bc)
    cx, cy = np.exp(sc) * np.sin(bc), np.exp(sc) * np.cos(bc)
    mass_in = mass_tot = 0.0
    for i, b in enumerate(betas):
        for j, sg in enumerate(sigmas):
            w = dens[i, j]
            mass_tot += w
            best = min(
                np.min(np.arccosh(
                    1 + ((math.exp(sg + d) * math.sin(b) - cx) ** 2
                         + (math.exp(sg + d) * math.cos(b) - cy) ** 2)
                    / (2 * math.exp(sg + d) * math.cos(b) * cy)))
                for d in (-L, 0.0, L))
            if best < 0.2:
                mass_in += w
    assert mass_in / mass_tot > 0.8


# --- coefficient ascension ---


def test_ascend_coeffs_zero_steps_identity():
    u = qz.geodesic_packet(100.0, 0.2, 5, L)
    assert qz.ascend_coeffs(u, 100.0, 0.005) is u


def test_ascend_coeffs_modulus_matches_b7():
    s, B = 400.0, 0.5
    u = qz.geodesic_packet(s, 0.2, 5, L)
    uB = qz.ascend_coeffs(u, s, B)
    for m in u.entries:
        ratio = abs(uB.entries[m][0]) / abs(u.entries[m][0])
        assert ratio == pytest.approx(math.exp(tr.b7(B, m / s)),
                                      abs=10.0 / s)


def test_ascend_coeffs_matches_exact_chain():
    from hyperlab.waves import ascend

    s, B, m = 100.0, 0.5, 20.0
    grid = np.linspace(-0.4, 0.4, 81)
    u = WaveCoeffs(l=L, entries={m: (1.0, 0.0)})
    uB = qz.ascend_coeffs(u, s, B)
    wB = solve_wave(math.floor(B * s) / s, m / s, s, "I", grid, 1e-11)
    approx = uB.entries[m][0] * wB.values
    exact, _, _ = ascend(m, s, B, grid, tol=1e-11)
    rel = np.max(np.abs(approx - exact.values)) / np.max(np.abs(exact.values))
    assert rel < 10.0 / s


def test_ascend_coeffs_rejects_mixed_branches():
    u = WaveCoeffs(l=L, entries={20.0: (1.0, 0.5)})
    with pytest.raises(ValueError):
        qz.ascend_coeffs(u, 100.0, 0.5)


# --- measure transport ---


def test_measure_transport_zero_field_exact():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    rows = qz.measure_transport_check([100.0], 0.0, obs, K=5)
    assert rows[0]["rel_diff"] == 0.0


def test_a1_inverts_to_a0():
    obs = qz.Observable(eta0=0.2, eps=0.2)
    B = 0.5
    rng = np.random.default_rng(2)
    for _ in range(5):
        beta = rng.uniform(-0.09, 0.09)
        sigma = rng.uniform(-0.09, 0.09)
        eta = rng.uniform(0.12, 0.28)
        table = tr.PhaseTable(B=B, mtilde=eta)
        bp = table.Phi(beta)
        a1 = qz.a1_density(obs, B, bp, sigma + table.f4(beta), eta)
        h = 1e-6
        dphi = (table.Phi(beta + h) - table.Phi(beta - h)) / (2 * h)
        a0 = (float(obs.phi1(eta)) * float(obs.phi2(beta))
              * float(obs.phi3(sigma)))
        assert a1 * dphi * math.exp(2 * table.f3(beta)) == pytest.approx(
            a0, abs=1e-8)


# --- energy shell ---


def test_energy_shell_zero_observable():
    u = qz.geodesic_packet(100.0, 0.2, 3, L)
    val = qz.energy_shell_test(u, 100.0, 0.0, lambda xi: np.zeros_like(xi))
    assert val == 0.0


def test_energy_shell_off_shell_small():
    u = qz.geodesic_packet(100.0, 0.2, 5, L)
    ref = qz.energy_shell_test(u, 100.0, 0.0, lambda xi: np.ones_like(xi))
    off = qz.energy_shell_test(u, 100.0, 0.0,
                               lambda xi: qz._bump_arr(xi / 0.8))
    assert abs(off) < 1e-8 * abs(ref)
