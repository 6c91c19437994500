import math

import numpy as np
import pytest

from cavraman.vibsolver import (GridMismatch, GridTooSmall, MorsePotential,
                                NotEnoughBoundStates, RadialGrid,
                                TabulatedPotential, count_nodes,
                                matrix_element, morse_from_constants,
                                morse_level_cm1, overlap, sinc_dvr_eigen,
                                solve_levels)


def dimensionless_morse(x_e=0.01, n=900, lo=-5.0, hi=30.0):
    """Morse with hbar = m = omega = 1, anharmonicity x_e:
    E_v = (v + 1/2) - x_e (v + 1/2)^2."""
    d_e = 1.0 / (4.0 * x_e)
    a = math.sqrt(2.0 * x_e)
    x = np.linspace(lo, hi, n)
    v = d_e * (1.0 - np.exp(-a * x)) ** 2
    return x, v


def test_dimensionless_morse_ground_state():
    x, v = dimensionless_morse()
    energies, _ = sinc_dvr_eigen(x, v, mass=1.0)
    assert energies[0] == pytest.approx(0.4975, abs=1e-6)


def test_dimensionless_morse_ladder():
    x, v = dimensionless_morse()
    energies, _ = sinc_dvr_eigen(x, v, mass=1.0)
    for vq in range(9):
        exact = (vq + 0.5) - 0.01 * (vq + 0.5) ** 2
        assert energies[vq] == pytest.approx(exact, rel=1e-6)


def test_harmonic_levels_equidistant():
    x = np.linspace(-12.0, 12.0, 512)
    v = 0.5 * x**2
    energies, _ = sinc_dvr_eigen(x, v, mass=1.0)
    gaps = np.diff(energies[:8])
    assert np.all(np.abs(gaps - 1.0) < 1e-6)


def test_harmonic_ladder_matrix_element():
    # <v+1| x |v> = sqrt((v+1)/2) for hbar = m = omega = 1
    x = np.linspace(-12.0, 12.0, 512)
    pot = 0.5 * x**2
    _, vecs = sinc_dvr_eigen(x, pot, mass=1.0)
    dx = x[1] - x[0]
    for vq in range(4):
        me = np.sum(vecs[:, vq + 1] * x * vecs[:, vq]) * dx
        assert abs(me) == pytest.approx(math.sqrt((vq + 1) / 2.0), rel=1e-6)


@pytest.fixture(scope="module")
def oh_levels():
    pot = morse_from_constants(3735.21, 82.81, 0.96966, 0.948086)
    grid = RadialGrid(0.45, 2.8, 512)
    return solve_levels(pot, 0.948086, grid, 9), pot, grid


def test_oh_morse_fundamental(oh_levels):
    levels, _, _ = oh_levels
    gap = levels[1].energy - levels[0].energy
    assert gap == pytest.approx(3735.21 - 2 * 82.81, rel=1e-6)


def test_oh_morse_vs_analytic(oh_levels):
    levels, _, _ = oh_levels
    zero = morse_level_cm1(3735.21, 82.81, 0)
    for lev in levels:
        exact = morse_level_cm1(3735.21, 82.81, lev.v)
        assert lev.energy == pytest.approx(exact, rel=1e-6)
        assert lev.energy - zero == pytest.approx(exact - zero, abs=1e-3)


def test_orthonormality(oh_levels):
    levels, _, _ = oh_levels
    for a in levels:
        for b in levels:
            expected = 1.0 if a.v == b.v else 0.0
            assert overlap(a, b) == pytest.approx(expected, abs=1e-8)


def test_node_counts(oh_levels):
    levels, _, _ = oh_levels
    for lev in levels[:6]:
        assert count_nodes(lev) == lev.v


def test_matrix_element_symmetry(oh_levels):
    levels, _, grid = oh_levels
    f = grid.points - 0.96966
    a, b = levels[0], levels[3]
    assert matrix_element(f, a, b) == matrix_element(f, b, a)


def test_grid_doubling_convergence():
    pot = morse_from_constants(3735.21, 82.81, 0.96966, 0.948086)
    coarse = solve_levels(pot, 0.948086, RadialGrid(0.45, 2.8, 512), 6)
    fine = solve_levels(pot, 0.948086, RadialGrid(0.45, 2.8, 1024), 6)
    for c, f in zip(coarse, fine):
        assert c.energy == pytest.approx(f.energy, rel=1e-8)


def test_grid_mismatch_raises(oh_levels):
    levels, pot, _ = oh_levels
    other = solve_levels(pot, 0.948086, RadialGrid(0.45, 2.8, 256), 2)
    with pytest.raises(GridMismatch):
        matrix_element(np.ones(512), levels[0], other[0])


def test_grid_too_small():
    pot = morse_from_constants(3735.21, 82.81, 0.96966, 0.948086)
    with pytest.raises((GridTooSmall, NotEnoughBoundStates)):
        solve_levels(pot, 0.948086, RadialGrid(0.8, 1.2, 64), 4)


def test_not_enough_bound_states():
    # a shallow Morse supports few levels
    pot = MorsePotential(d_e=2000.0, a=2.0, r_e=1.0)
    with pytest.raises(NotEnoughBoundStates):
        solve_levels(pot, 0.948086, RadialGrid(0.4, 3.5, 256), 12)


def test_tabulated_matches_morse():
    morse = morse_from_constants(3735.21, 82.81, 0.96966, 0.948086)
    r = np.linspace(0.40, 2.9, 1200)
    tab = TabulatedPotential(r=r, v=morse.evaluate(r))
    grid = RadialGrid(0.45, 2.8, 512)
    lm = solve_levels(morse, 0.948086, grid, 4)
    lt = solve_levels(tab, 0.948086, grid, 4)
    for a, b in zip(lm, lt):
        assert a.energy == pytest.approx(b.energy, rel=1e-6)


def test_tabulated_no_extrapolation():
    r = np.linspace(0.9, 1.4, 32)
    tab = TabulatedPotential(r=r, v=(r - 1.1) ** 2 * 1e4)
    with pytest.raises(ValueError):
        solve_levels(tab, 1.0, RadialGrid(0.5, 2.5, 128), 1)


def test_tabulated_requires_sorted_samples():
    with pytest.raises(ValueError):
        TabulatedPotential(r=np.array([1.0, 0.9, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6]),
                           v=np.zeros(8))
