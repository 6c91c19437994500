"""Polarizability tensor components and Raman transition strengths.

Two sources are supported: ingested alpha(R) curves (isotropic and
traceless components on a radial grid, the production route) and an
explicit two-term sum over electronically excited states (used for
synthetic tests and sanity checks).

The squared transition moment between ro-vibrational states factorizes
into a radial integral over the appropriate tensor component times a
rotational line-strength factor S(J -> J'):

    |alpha_{vJ -> v'J'}|^2 = |<chi_v| alpha |chi_v'>|^2 * S(J, J')

S carries the Delta J = 0, +-2 selection rule; S(0 -> 0) = 0, so a
J=0 -> J'=0 line has zero strength for any v, v'.  For Delta J = 0
lines with J > 0 the isotropic and traceless channels both contribute
and their intensities add (randomly oriented molecules; amplitudes of
distinct tensor ranks do not interfere).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .constants import RADS_PER_HARTREE
from .molecule import RoVibState
from .vibsolver import VibrationalLevel, matrix_element


class NearResonance(ValueError):
    pass


class WindowCoversPhysicalRegion(ValueError):
    pass


def placzek_teller(j: int, j_prime: int) -> float:
    """Rotational line-strength factor S(J -> J') for a diatomic.

    Nonzero only for Delta J = 0, +-2.  The degenerate 0/0 case at
    J = J' = 0 is 0 by convention (the J 0->0 line carries no strength).
    """
    if j < 0 or j_prime < 0:
        raise ValueError("J values must be non-negative")
    if j_prime == j:
        if j == 0:
            return 0.0
        return (j * (j + 1.0)) / ((2.0 * j - 1.0) * (2.0 * j + 3.0))
    if j_prime == j + 2:
        return (3.0 * (j + 1.0) * (j + 2.0)) / (2.0 * (2.0 * j + 1.0) * (2.0 * j + 3.0))
    if j_prime == j - 2:
        return (3.0 * (j - 1.0) * j) / (2.0 * (2.0 * j + 1.0) * (2.0 * j - 1.0))
    return 0.0


# ---------------------------------------------------------------------------
# Sum-over-states source


@dataclass(frozen=True)
class ExcitedStateCurve:
    """Transition-dipole and vertical-energy data for one excited state.

    dipole(R) in atomic units and excitation energy in rad/s, both given
    either as constants or callables of R (angstrom).  Orientation tells
    how the transition moment sits relative to the molecular axis:
    "parallel" feeds alpha_zz, "perpendicular" feeds alpha_xx = alpha_yy.
    """

    label: str
    dipole: object          # float or callable R -> au
    energy: object          # float or callable R -> rad/s
    orientation: str = "perpendicular"

    def dipole_at(self, r):
        return self.dipole(r) if callable(self.dipole) else float(self.dipole)

    def energy_at(self, r):
        return self.energy(r) if callable(self.energy) else float(self.energy)


def two_term_sum(dipole_au: float, delta_au: float, omega_l_au: float,
                 guard_band_au: float = 1e-3) -> float:
    """D^2/Delta + D^2/(Delta - 2 omega_L), all in atomic units.

    Delta is the laser detuning from the excited state.  Raises
    NearResonance when either denominator falls inside the guard band.
    """
    d2 = delta_au - 2.0 * omega_l_au
    if abs(delta_au) < guard_band_au or abs(d2) < guard_band_au:
        raise NearResonance(
            f"denominator within guard band ({guard_band_au} au); smooth the curve"
        )
    return dipole_au**2 / delta_au + dipole_au**2 / d2


def dynamic_alpha(states: list[ExcitedStateCurve], r: float, omega_l: float,
                  guard_band_au: float = 1e-3) -> tuple[float, float]:
    """Isotropic and traceless polarizability at bond length r, rad/s laser.

    Evaluates the two-term sum over the supplied excited states and
    assembles the tensor: iso = Tr(alpha)/3 and traceless = alpha_zz - iso.
    """
    omega_l_au = omega_l / RADS_PER_HARTREE
    a_xx = a_zz = 0.0
    for st in states:
        delta_au = (omega_l - st.energy_at(r)) / RADS_PER_HARTREE
        term = two_term_sum(st.dipole_at(r), delta_au, omega_l_au, guard_band_au)
        if st.orientation == "parallel":
            a_zz += term
        elif st.orientation == "perpendicular":
            a_xx += term / 2.0          # split over the two degenerate components
        else:
            raise ValueError(f"unknown orientation {st.orientation!r}")
    iso = (2.0 * a_xx + a_zz) / 3.0
    return iso, a_zz - iso


def smooth_resonances(r: np.ndarray, values: np.ndarray,
                      windows: list[tuple[float, float]],
                      protected: tuple[float, ...] = ()) -> np.ndarray:
    """Replace samples inside each window by monotone-cubic interpolation.

    Used to bridge artifacts where an excitation energy crosses the laser
    frequency.  Windows must not cover any protected coordinate (the
    equilibrium distance, classically allowed turning points ...).
    """
    r = np.asarray(r, dtype=float)
    out = np.array(values, dtype=float)
    for lo, hi in windows:
        for p in protected:
            if lo <= p <= hi:
                raise WindowCoversPhysicalRegion(
                    f"smoothing window [{lo}, {hi}] covers protected point {p}"
                )
        inside = (r > lo) & (r < hi)
        if not np.any(inside):
            continue
        if inside[0] or inside[-1]:
            raise ValueError("smoothing window must be interior to the grid")
        interp = PchipInterpolator(r[~inside], out[~inside])
        out[inside] = interp(r[inside])
    return out


# ---------------------------------------------------------------------------
# Curve source


@dataclass
class PolarizabilityCurves:
    """alpha^0(R) and alpha^(2)_zz(R) in au at a fixed laser wavelength."""

    r: np.ndarray
    iso: np.ndarray
    traceless: np.ndarray
    laser_wavelength_nm: float
    smoothing_windows: tuple = ()
    source: str = "curve"
    _iso_i: PchipInterpolator = field(init=False, repr=False)
    _trl_i: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.iso = np.asarray(self.iso, dtype=float)
        self.traceless = np.asarray(self.traceless, dtype=float)
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("R samples must be strictly increasing")
        self._iso_i = PchipInterpolator(self.r, self.iso, extrapolate=False)
        self._trl_i = PchipInterpolator(self.r, self.traceless, extrapolate=False)

    def iso_on(self, r: np.ndarray) -> np.ndarray:
        return self._eval(self._iso_i, r)

    def traceless_on(self, r: np.ndarray) -> np.ndarray:
        return self._eval(self._trl_i, r)

    @staticmethod
    def _eval(interp, r):
        out = interp(r)
        if np.any(np.isnan(out)):
            raise ValueError("grid extends beyond the polarizability curve range")
        return out


def load_alpha_curve_file(path: str) -> PolarizabilityCurves:
    """Three-column text file: R (angstrom), alpha^0 (au), alpha^(2)_zz (au).

    Comments start with '#'; a '# wavelength_nm:' directive records the
    laser wavelength the curve was evaluated at.
    """
    wavelength = None
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("#"):
                if "wavelength_nm:" in line:
                    wavelength = float(line.split("wavelength_nm:", 1)[1])
                continue
            if not line:
                continue
            cols = line.split()
            if len(cols) != 3:
                raise ValueError(f"{path}: expected 3 columns, got {line!r}")
            rows.append([float(c) for c in cols])
    if wavelength is None:
        raise ValueError(f"{path}: missing '# wavelength_nm:' directive")
    data = np.array(rows)
    return PolarizabilityCurves(
        r=data[:, 0], iso=data[:, 1], traceless=data[:, 2],
        laser_wavelength_nm=wavelength,
    )


# ---------------------------------------------------------------------------
# Transition strengths


@dataclass(frozen=True)
class TransitionStrength:
    from_state: RoVibState
    to_state: RoVibState
    alpha_sq: float            # au^2
    component_used: str        # "traceless" | "iso+traceless" | "none"


class TransitionStrengths:
    """Radial integrals of the tensor components over vibrational states,
    combined with S(J -> J') into per-transition |alpha|^2 values."""

    def __init__(self, curves: PolarizabilityCurves,
                 levels: list[VibrationalLevel]):
        self.curves = curves
        self.levels = levels
        grid_r = levels[0].grid.points
        iso_g = curves.iso_on(grid_r)
        trl_g = curves.traceless_on(grid_r)
        n = len(levels)
        self.iso_me = np.empty((n, n))
        self.traceless_me = np.empty((n, n))
        for a in range(n):
            for b in range(a, n):
                i = matrix_element(iso_g, levels[a], levels[b])
                t = matrix_element(trl_g, levels[a], levels[b])
                self.iso_me[a, b] = self.iso_me[b, a] = i
                self.traceless_me[a, b] = self.traceless_me[b, a] = t

    def strength(self, from_state: RoVibState, to_state: RoVibState) -> TransitionStrength:
        f, t = from_state, to_state
        dj = abs(t.j - f.j)
        if f.ladder != t.ladder or dj not in (0, 2):
            return TransitionStrength(f, t, 0.0, "none")
        s = placzek_teller(f.j, t.j)
        if dj == 2:
            a_sq = self.traceless_me[f.v, t.v] ** 2 * s
            return TransitionStrength(f, t, a_sq, "traceless")
        # Delta J = 0: both channels, intensities added; s = 0 at J = 0.
        a_sq = (self.iso_me[f.v, t.v] ** 2 + self.traceless_me[f.v, t.v] ** 2) * s
        return TransitionStrength(f, t, a_sq, "iso+traceless")

    def alpha_sq(self, from_state: RoVibState, to_state: RoVibState) -> float:
        return self.strength(from_state, to_state).alpha_sq

    def rayleigh_reference(self) -> float:
        """|<chi_0| alpha^(2) |chi_0>|, the strength unit the reference
        couplings are quoted for."""
        return abs(self.traceless_me[0, 0])
