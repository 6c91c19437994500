from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cavraman.constants import RADS_PER_HARTREE
from cavraman.polarizability import (ExcitedStateCurve, NearResonance,
                                     PolarizabilityCurves, TransitionStrengths,
                                     WindowCoversPhysicalRegion, dynamic_alpha,
                                     load_alpha_curve_file, placzek_teller,
                                     smooth_resonances, two_term_sum)
from cavraman.config import data_dir


def pt_fraction(j, jp):
    """Independent exact-rational evaluation of the line-strength table."""
    if jp == j:
        if j == 0:
            return Fraction(0)
        return Fraction(j * (j + 1), 1) ** 2 / Fraction(
            j * (j + 1) * (2 * j - 1) * (2 * j + 3))
    if jp == j + 2:
        return Fraction(3 * (j + 1) ** 2 * (j + 2) ** 2,
                        2 * (j + 1) * (j + 2) * (2 * j + 1) * (2 * j + 3))
    if jp == j - 2 and j >= 2:
        return Fraction(3 * (j - 1) ** 2 * j ** 2,
                        2 * (j - 1) * j * (2 * j + 1) * (2 * j - 1))
    return Fraction(0)


def test_hand_values():
    assert placzek_teller(0, 0) == 0.0
    assert placzek_teller(2, 0) == pytest.approx(0.2, abs=1e-15)
    assert placzek_teller(1, 1) == pytest.approx(0.4, abs=1e-15)
    assert placzek_teller(0, 2) == pytest.approx(1.0, abs=1e-15)


def test_forbidden_deltas_are_zero():
    assert placzek_teller(3, 4) == 0.0
    assert placzek_teller(5, 1) == 0.0
    assert placzek_teller(0, 4) == 0.0


@given(st.integers(min_value=0, max_value=80))
def test_table_matches_rational_oracle(j):
    for jp in (j - 2, j, j + 2):
        if jp < 0:
            continue
        assert placzek_teller(j, jp) == pytest.approx(
            float(pt_fraction(j, jp)), abs=1e-12)


@given(st.integers(min_value=0, max_value=80))
def test_sum_rule(j):
    total = sum(placzek_teller(j, jp) for jp in (j - 2, j, j + 2) if jp >= 0)
    assert total == pytest.approx(1.0, abs=1e-12)


@given(st.integers(min_value=0, max_value=200),
       st.integers(min_value=0, max_value=200))
def test_non_negative(j, jp):
    assert placzek_teller(j, jp) >= 0.0


# ---------------------------------------------------------------------------


def test_two_term_sum_hand_value():
    # single state, D = 1 au, Delta = -0.1 au, omega_L = 0: 2/Delta = -20
    assert two_term_sum(1.0, -0.1, 0.0) == pytest.approx(-20.0, rel=1e-12)


def test_static_limit_doubles_first_term():
    first = 1.3**2 / -0.2
    assert two_term_sum(1.3, -0.2, 0.0) == pytest.approx(2 * first, rel=1e-12)


def test_two_term_guard_band():
    with pytest.raises(NearResonance):
        two_term_sum(1.0, 5e-4, 0.0)
    with pytest.raises(NearResonance):
        two_term_sum(1.0, 0.3, 0.15 - 1e-5)


def test_dynamic_alpha_tensor_assembly():
    energy = 0.1 * RADS_PER_HARTREE     # excited state 0.1 hartree up
    par = ExcitedStateCurve(label="par", dipole=1.0, energy=energy,
                            orientation="parallel")
    per = ExcitedStateCurve(label="per", dipole=1.0, energy=energy,
                            orientation="perpendicular")
    term = two_term_sum(1.0, -0.1, 0.0)
    iso_p, trl_p = dynamic_alpha([par], r=1.0, omega_l=0.0)
    assert iso_p == pytest.approx(term / 3.0, rel=1e-12)
    assert trl_p == pytest.approx(term * 2.0 / 3.0, rel=1e-12)
    iso_x, trl_x = dynamic_alpha([per], r=1.0, omega_l=0.0)
    assert iso_x == pytest.approx(term / 3.0, rel=1e-12)
    assert trl_x == pytest.approx(-term / 3.0, rel=1e-12)


def test_dynamic_alpha_continuity_in_frequency():
    energy = 0.2 * RADS_PER_HARTREE
    st_ = ExcitedStateCurve(label="e", dipole=0.5, energy=energy)
    omegas = np.linspace(0.0, 0.05, 40) * RADS_PER_HARTREE
    vals = [dynamic_alpha([st_], 1.0, w)[0] for w in omegas]
    assert np.all(np.abs(np.diff(vals)) < 0.05)


# ---------------------------------------------------------------------------


def test_smoothing_identity_without_windows():
    r = np.linspace(0.5, 3.0, 101)
    y = np.sin(r)
    out = smooth_resonances(r, y, [])
    assert np.array_equal(out, y)


def test_smoothing_linear_curve_is_exact():
    r = np.linspace(0.5, 3.0, 101)
    y = 2.0 * r + 1.0
    out = smooth_resonances(r, y, [(1.4, 1.9)])
    assert np.allclose(out, y, atol=1e-12)


def test_smoothing_removes_spike():
    r = np.linspace(0.5, 3.0, 401)
    y = 5.0 + 0.5 * r
    spike = 1.0 / np.maximum(np.abs(r - 1.8), 1e-3)
    y_bad = y + np.where((r > 1.6) & (r < 2.0), spike, 0.0)
    out = smooth_resonances(r, y_bad, [(1.55, 2.05)])
    assert np.max(np.abs(out - y)) < 0.5
    assert np.all(np.abs(np.diff(out, 2)) < 1e-2)   # no kinks left


def test_smoothing_protects_physical_region():
    r = np.linspace(0.5, 3.0, 101)
    with pytest.raises(WindowCoversPhysicalRegion):
        smooth_resonances(r, np.ones_like(r), [(0.9, 1.1)], protected=(0.97,))


# ---------------------------------------------------------------------------


def test_bundled_curve_values_at_equilibrium():
    curves = load_alpha_curve_file(str(data_dir() / "oh_alpha_532nm.dat"))
    assert curves.laser_wavelength_nm == 532.0
    assert curves.iso_on(np.array([0.96966]))[0] == pytest.approx(7.39, abs=1e-6)
    assert curves.traceless_on(np.array([0.96966]))[0] == pytest.approx(
        1.15, abs=1e-6)


def test_transition_strengths(oh_small):
    ts = oh_small.strengths
    b = oh_small.basis
    # Delta J = 1 forbidden
    assert ts.alpha_sq(b.state(0, 1), b.state(0, 0)) == 0.0
    # cross-ladder forbidden
    assert ts.alpha_sq(b.state(0, 3), b.state(0, 0)) == 0.0
    # J 0->2 with v unchanged: traceless^2 * S(0->2) = traceless^2
    expect = ts.traceless_me[0, 0] ** 2
    assert ts.alpha_sq(b.state(0, 0), b.state(0, 2)) == pytest.approx(expect)
    # J 0->0 carries no strength
    assert ts.strength(b.state(0, 0), b.state(0, 0)).alpha_sq == 0.0


def test_strength_radial_integral_symmetric(oh_rovib_ws):
    ts = oh_rovib_ws.strengths
    b = oh_rovib_ws.basis
    up = ts.strength(b.state(0, 2), b.state(1, 0))
    down = ts.strength(b.state(1, 2), b.state(0, 0))
    # same |<0|alpha|1>| radial integral in both directions
    assert abs(ts.traceless_me[0, 1]) == abs(ts.traceless_me[1, 0])
    assert up.component_used == down.component_used == "traceless"


def test_iso_and_traceless_add_for_elastic_j2(oh_small):
    ts = oh_small.strengths
    b = oh_small.basis
    s22 = placzek_teller(2, 2)
    expect = (ts.iso_me[0, 0] ** 2 + ts.traceless_me[0, 0] ** 2) * s22
    assert ts.alpha_sq(b.state(0, 2), b.state(0, 2)) == pytest.approx(expect)


def test_synthetic_constant_traceless_curve():
    from cavraman.vibsolver import RadialGrid, morse_from_constants, solve_levels
    grid = RadialGrid(0.45, 2.8, 256)
    pot = morse_from_constants(3735.21, 82.81, 0.96966, 0.948086)
    levels = solve_levels(pot, 0.948086, grid, 3)
    r = np.linspace(0.40, 2.9, 60)
    curves = PolarizabilityCurves(r=r, iso=np.zeros_like(r),
                                  traceless=np.full_like(r, 0.7),
                                  laser_wavelength_nm=532.0)
    ts = TransitionStrengths(curves, levels)
    # <0|c|0> = c by normalization; S(0->2) = 1.0
    assert ts.traceless_me[0, 0] == pytest.approx(0.7, abs=1e-9)
    assert ts.traceless_me[0, 1] == pytest.approx(0.0, abs=1e-9)
