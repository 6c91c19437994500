"""Vibrational eigenstates of a 1-D potential curve on a radial grid.

Uses a sinc-function discrete variable representation (Colbert-Miller
DVR): the kinetic matrix on a uniform grid is analytic and the full
Hamiltonian is diagonalized with a dense symmetric eigensolver.  For
smooth bound potentials the eigenvalues converge exponentially with the
number of grid points.

Wavefunctions are returned on the grid, L2-normalized with the grid
weight dr, so that sum(psi_a * f * psi_b) * dr is the matrix element of
f(R).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .constants import AMU_KG, HBAR_JS, RADS_PER_CM1


class GridTooSmall(ValueError):
    pass


class NotEnoughBoundStates(ValueError):
    pass


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class RadialGrid:
    r_min: float       # angstrom
    r_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("need at least 64 grid points")
        if self.r_min >= self.r_max:
            raise ValueError("r_min must be < r_max")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_points)

    @property
    def dr(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)


@dataclass(frozen=True)
class MorsePotential:
    """V(R) = D_e (1 - exp(-a (R - r_e)))^2, D_e in cm^-1, a in 1/angstrom."""

    d_e: float
    a: float
    r_e: float

    def __post_init__(self):
        if self.d_e <= 0 or self.a <= 0:
            raise ValueError("Morse D_e and a must be > 0")

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        return self.d_e * (1.0 - np.exp(-self.a * (r - self.r_e))) ** 2

    def domain(self) -> tuple[float, float]:
        return (-np.inf, np.inf)


@dataclass
class TabulatedPotential:
    """Monotone-cubic interpolation of (R, V) samples; no extrapolation."""

    r: np.ndarray      # angstrom, strictly increasing
    v: np.ndarray      # cm^-1
    _interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if len(self.r) < 8:
            raise ValueError("tabulated potential needs >= 8 samples")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("tabulated R samples must be strictly increasing")
        self._interp = PchipInterpolator(self.r, self.v, extrapolate=False)

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        out = self._interp(r)
        if np.any(np.isnan(out)):
            raise ValueError("grid extends beyond tabulated potential range")
        return out

    def domain(self) -> tuple[float, float]:
        return (float(self.r[0]), float(self.r[-1]))


def morse_from_constants(omega_e: float, omega_e_x_e: float, r_e: float,
                         reduced_mass_amu: float) -> MorsePotential:
    """Morse curve matching the spectroscopic omega_e and omega_e x_e.

    D_e = omega_e^2 / (4 omega_e x_e) (cm^-1) and
    a = sqrt(2 mu omega_e_x_e / hbar) expressed in 1/angstrom.
    """
    if omega_e_x_e <= 0:
        raise ValueError("omega_e_x_e must be > 0 for a Morse curve")
    d_e = omega_e**2 / (4.0 * omega_e_x_e)
    mu_kg = reduced_mass_amu * AMU_KG
    wexe_rads = omega_e_x_e * RADS_PER_CM1
    a_per_m = np.sqrt(2.0 * mu_kg * wexe_rads / HBAR_JS)
    return MorsePotential(d_e=d_e, a=a_per_m * 1e-10, r_e=r_e)


@dataclass(frozen=True)
class VibrationalLevel:
    v: int
    energy: float             # cm^-1 (absolute within the potential)
    wavefunction: np.ndarray  # on grid.points, sum(psi^2) dr = 1
    grid: RadialGrid


def sinc_dvr_eigen(x: np.ndarray, v: np.ndarray, mass: float, hbar: float = 1.0):
    """Eigenpairs of -(hbar^2/2m) d2/dx2 + V on a uniform grid.

    Works in whatever consistent unit system x, v, mass, hbar are given
    in.  Returns (energies, columns of eigenvectors normalized to
    sum(psi^2) dx = 1).
    """
    n = len(x)
    dx = x[1] - x[0]
    i = np.arange(n)
    dij = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = 2.0 * (-1.0) ** dij / dij.astype(float) ** 2
    np.fill_diagonal(t, np.pi**2 / 3.0)
    t *= hbar**2 / (2.0 * mass * dx**2)
    h = t + np.diag(v)
    energies, vectors = np.linalg.eigh(h)
    vectors = vectors / np.sqrt(dx)
    # fix the sign convention: first significant lobe positive
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        idx = np.argmax(np.abs(col) > 1e-3 * np.max(np.abs(col)))
        if col[idx] < 0:
            vectors[:, k] = -col
    return energies, vectors


def solve_levels(potential, reduced_mass_amu: float, grid: RadialGrid,
                 n_levels: int, tail_tol: float = 1e-6) -> list[VibrationalLevel]:
    """Lowest n_levels bound eigenpairs of the radial Schroedinger problem.

    Energies come back in cm^-1.  Raises GridTooSmall when a requested
    wavefunction has not decayed below tail_tol at either boundary, and
    NotEnoughBoundStates when fewer than n_levels lie below the potential
    value at the grid edges.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    lo, hi = potential.domain()
    if grid.r_min < lo or grid.r_max > hi:
        raise ValueError("grid extends beyond the potential's domain")
    r = grid.points
    v_cm1 = potential.evaluate(r)
    v_rads = v_cm1 * RADS_PER_CM1
    mu_kg = reduced_mass_amu * AMU_KG
    # Schroedinger operator divided by hbar: kinetic coefficient
    # hbar/(2 mu) in units of angstrom^2 rad/s.
    coeff = HBAR_JS / (2.0 * mu_kg) * 1e20
    energies, vectors = sinc_dvr_eigen(r, v_rads, mass=1.0, hbar=np.sqrt(2.0 * coeff))

    barrier = min(v_rads[0], v_rads[-1])
    n_bound = int(np.sum(energies < barrier))
    if n_bound < n_levels:
        raise NotEnoughBoundStates(
            f"only {n_bound} bound states below the grid-edge potential, "
            f"{n_levels} requested"
        )
    levels = []
    for k in range(n_levels):
        psi = vectors[:, k]
        amp = np.max(np.abs(psi))
        if abs(psi[0]) > tail_tol * amp or abs(psi[-1]) > tail_tol * amp:
            raise GridTooSmall(
                f"wavefunction v={k} does not decay below {tail_tol} at the "
                f"grid boundary; widen the grid"
            )
        levels.append(
            VibrationalLevel(
                v=k,
                energy=float(energies[k] / RADS_PER_CM1),
                wavefunction=psi,
                grid=grid,
            )
        )
    return levels


def matrix_element(f_on_grid: np.ndarray, bra: VibrationalLevel,
                   ket: VibrationalLevel) -> float:
    """Quadrature of psi_bra(R) f(R) psi_ket(R) dR on the shared grid."""
    if bra.grid != ket.grid:
        raise GridMismatch("bra and ket live on different grids")
    f = np.asarray(f_on_grid, dtype=float)
    if f.shape != bra.wavefunction.shape:
        raise GridMismatch("f is not sampled on the levels' grid")
    return float(np.sum(bra.wavefunction * f * ket.wavefunction) * bra.grid.dr)


def overlap(bra: VibrationalLevel, ket: VibrationalLevel) -> float:
    return matrix_element(np.ones_like(bra.wavefunction), bra, ket)


def count_nodes(level: VibrationalLevel, threshold: float = 1e-4) -> int:
    """Sign changes interior to the grid, ignoring numerical noise."""
    psi = level.wavefunction
    amp = np.max(np.abs(psi))
    significant = psi[np.abs(psi) > threshold * amp]
    return int(np.sum(np.diff(np.sign(significant)) != 0))


def morse_level_cm1(omega_e: float, omega_e_x_e: float, v: int) -> float:
    """Analytic Morse term value (v+1/2) omega_e - (v+1/2)^2 omega_e x_e."""
    x = v + 0.5
    return omega_e * x - omega_e_x_e * x * x
