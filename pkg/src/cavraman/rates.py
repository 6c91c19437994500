"""Momentum-dependent Raman scattering rates: spontaneous and into the cavity.

Each Raman transition (v,J) -> (v',J') proceeds through the set of
vibrational levels of electronically excited states.  Per excited
channel the laser leg contributes a pair of Lorentzian weights (the
co-rotating and counter-rotating terms; the laser is far enough detuned
that the rotating-wave approximation must not be applied):

    gamma+ = Omega^2 / ((Delta + k.p/M)^2 + Gamma^2/4)
    gamma- = Omega^2 / ((Delta - 2 omega_L - k.p/M)^2 + Gamma^2/4)

with Delta = omega_from - omega_excited + omega_L.  The spontaneous
Raman rate sums decay branching times these weights over the channels.
The cavity rate multiplies the weights with the cavity Lorentzians of
the retained comb modes,

    Gamma_kappa(+-) = 2 kappa sum_c |g(+-)|^2 [ gamma+ / ((dw+ +- k_c p/M)^2 + kappa^2)
                                              + gamma- / ((dw- +- k_c p/M)^2 + kappa^2) ]

where dw(+-) = omega_from - omega_to +- omega_L - Omega_c, and +- labels
the emission direction along the cavity axis.  The standing-wave
decomposition puts |g(+)|^2 = |g(-)|^2 = g^2/4.

Couplings for individual ro-vibrational lines are not independently
known; they are scaled from the reference couplings by the transition's
|alpha|^2 relative to a configured reference strength (see the bundled
data files for the calibration caveats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import AMU_KG, C_M_PER_S, wavelength_nm_to_rads, wavenumber_to_rads
from .molecule import MoleculeSpec, RoVibBasis, RoVibState
from .polarizability import TransitionStrengths, placzek_teller
from .vibsolver import RadialGrid, VibrationalLevel, morse_from_constants, overlap, solve_levels


class NonGenerator(ValueError):
    pass


@dataclass(frozen=True)
class LaserSpec:
    """Pump laser: propagates perpendicular to the cavity axis.

    rabi_reference is the total electronic coupling Omega_{L,0->0} in
    rad/s; detuning_offset shifts the absolute frequency within one FSR.
    """

    wavelength_nm: float
    rabi_reference: float
    detuning_offset: float = 0.0
    polarization: str = "lin"

    def __post_init__(self):
        if self.wavelength_nm <= 0:
            raise ValueError("wavelength must be > 0")

    @property
    def omega(self) -> float:
        return wavelength_nm_to_rads(self.wavelength_nm) + self.detuning_offset

    def with_offset(self, offset: float) -> "LaserSpec":
        return replace(self, detuning_offset=offset)


@dataclass(frozen=True)
class CavitySpec:
    """Standing-wave resonator parameters; kappa is the half-linewidth.

    enhancement is a documented calibration factor on the collection of
    scattered photons (near-degenerate transverse modes); it multiplies
    the cavity rate only.
    """

    length_cm: float
    fsr: float
    kappa: float
    g_reference: float
    waist_um: float
    mode_window: int = 3
    lorentz_cut: float = 1e-8
    enhancement: float = 1.0

    def __post_init__(self):
        if self.fsr <= 200.0 * self.kappa:
            raise ValueError("cavity comb must satisfy FSR >> 2 kappa")

    def with_fsr(self, fsr: float) -> "CavitySpec":
        return replace(self, fsr=fsr)


@dataclass
class ExcitedManifold:
    """Vibrational levels of one excited electronic state, with
    Franck-Condon factors against the ground-state levels.

    energies are rad/s relative to the ground (v=0, J=0) level.
    fc_up[v, v''] distributes the laser coupling (rows sum to 1);
    branch_down[v'', v'] are absolute decay rates (rad/s) summing to the
    state linewidth over the retained ground levels.

    ground_origins[v] are the rotationless vibrational origins of the
    ground state.  Detunings are taken between rotationless vibronic
    levels: the excited state rotates along with the ground state
    (B' ~ B), so rotational energy cancels out of the electronic
    detuning and must not be added to it.
    """

    label: str
    linewidth: float
    energies: np.ndarray
    fc_up: np.ndarray
    branch_down: np.ndarray
    ground_origins: np.ndarray

    @property
    def n_levels(self) -> int:
        return len(self.energies)


def build_excited_manifolds(molecule: MoleculeSpec,
                            ground_levels: list[VibrationalLevel],
                            grid: RadialGrid,
                            n_excited_levels: int = 6) -> list[ExcitedManifold]:
    """Solve each excited-state Morse curve on the shared grid and build
    Franck-Condon weights against the supplied ground levels."""
    manifolds = []
    e_g0 = ground_levels[0].energy
    for ex in molecule.excited_states:
        pot = morse_from_constants(ex.omega_e, ex.omega_e_x_e, ex.r_e,
                                   molecule.reduced_mass)
        ex_levels = solve_levels(pot, molecule.reduced_mass, grid, n_excited_levels)
        energies = np.array([
            wavenumber_to_rads(ex.t_e + lev.energy - e_g0) for lev in ex_levels
        ])
        famp = np.array([
            [overlap(g, e) for e in ex_levels] for g in ground_levels
        ])
        fc = famp**2
        fc_up = fc / fc.sum(axis=1, keepdims=True)
        down = fc.T
        branch_down = ex.linewidth * down / down.sum(axis=1, keepdims=True)
        origins = np.array([
            wavenumber_to_rads(lev.energy - e_g0) for lev in ground_levels
        ])
        manifolds.append(ExcitedManifold(
            label=ex.label, linewidth=ex.linewidth, energies=energies,
            fc_up=fc_up, branch_down=branch_down, ground_origins=origins,
        ))
    return manifolds


def load_branching_override(path: str, manifolds: list[ExcitedManifold]):
    """Apply decay-rate overrides from a delimited text file.

    Columns: excited_label  v_excited  v_ground  rate_1_per_s.  Entries
    replace the Franck-Condon-derived branching rates in place.
    """
    by_label = {m.label: m for m in manifolds}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            cols = line.split()
            if len(cols) != 4:
                raise ValueError(f"{path}: expected 4 columns, got {line!r}")
            label, v_ex, v_g, rate = cols[0], int(cols[1]), int(cols[2]), float(cols[3])
            m = by_label.get(label)
            if m is None:
                raise ValueError(f"{path}: unknown excited state {label!r}")
            if not (0 <= v_ex < m.n_levels) or not (0 <= v_g < m.branch_down.shape[1]):
                raise ValueError(f"{path}: channel ({v_ex}, {v_g}) out of range")
            m.branch_down[v_ex, v_g] = rate
    return manifolds


def lorentzian_weights(manifold: ExcitedManifold, from_state: RoVibState,
                       laser: LaserSpec, doppler: float = 0.0):
    """(gamma+, gamma-) per excited vibrational channel.

    doppler is the laser-leg Doppler shift k_L.p/M in rad/s (zero in the
    perpendicular-pump geometry).
    """
    delta = (manifold.ground_origins[from_state.v] - manifold.energies
             + laser.omega)
    omega_sq = laser.rabi_reference**2 * manifold.fc_up[from_state.v]
    hw_sq = manifold.linewidth**2 / 4.0
    gp = omega_sq / ((delta + doppler) ** 2 + hw_sq)
    gm = omega_sq / ((delta - 2.0 * laser.omega - doppler) ** 2 + hw_sq)
    return gp, gm


def spontaneous_rate(manifolds: list[ExcitedManifold], from_state: RoVibState,
                     to_state: RoVibState, laser: LaserSpec,
                     doppler: float = 0.0) -> float:
    """Spontaneous Raman rate from -> to: decay branching times the
    Lorentzian weights, summed over excited channels."""
    if from_state.ladder != to_state.ladder:
        return 0.0
    b_rot = placzek_teller(from_state.j, to_state.j)
    if b_rot == 0.0:
        return 0.0
    rate = 0.0
    for m in manifolds:
        gp, gm = lorentzian_weights(m, from_state, laser, doppler)
        rate += float(np.dot(m.branch_down[:, to_state.v], gp + gm)) * b_rot
    return rate


def _comb_mode_sum(center: float, doppler: float, kappa: float, fsr: float,
                   window: int, cut: float) -> float:
    """sum_n 1/((center - n FSR + doppler)^2 + kappa^2) over retained modes."""
    n0 = max(1, round(center / fsr))
    total = 0.0
    for n in range(max(1, n0 - window), n0 + window + 1):
        d = center - n * fsr + doppler
        lor = 1.0 / (d * d + kappa * kappa)
        if lor * kappa * kappa >= cut:
            total += lor
    return total


def cavity_rate(manifolds: list[ExcitedManifold], from_state: RoVibState,
                to_state: RoVibState, laser: LaserSpec, cavity: CavitySpec,
                strength_ratio: float, momentum: float = 0.0,
                mass_amu: float | None = None) -> tuple[float, float]:
    """(Gamma_kappa_plus, Gamma_kappa_minus) for the transition from -> to.

    strength_ratio is |alpha_t|^2 over the reference strength the
    couplings are anchored to.  momentum (kg m/s along the cavity axis)
    enters through the Doppler shift of the emitted photon.
    """
    if from_state.ladder != to_state.ladder or strength_ratio == 0.0:
        return 0.0, 0.0
    shift = from_state.energy - to_state.energy
    kc = laser.omega / C_M_PER_S
    dop = 0.0
    if momentum != 0.0:
        if mass_amu is None:
            raise ValueError("momentum-dependent rates need the molecular mass")
        dop = kc * momentum / (mass_amu * AMU_KG)
    g_pm_sq = cavity.g_reference**2 / 4.0
    pref = 2.0 * cavity.kappa * g_pm_sq * strength_ratio * cavity.enhancement
    center_p = shift + laser.omega
    center_m = shift - laser.omega
    out = []
    for sign in (+1.0, -1.0):
        total = 0.0
        for m in manifolds:
            gp, gm = lorentzian_weights(m, from_state, laser)
            lor_p = _comb_mode_sum(center_p, sign * dop, cavity.kappa, cavity.fsr,
                                   cavity.mode_window, cavity.lorentz_cut)
            lor_m = _comb_mode_sum(center_m, sign * dop, cavity.kappa, cavity.fsr,
                                   cavity.mode_window, cavity.lorentz_cut)
            total += float(np.sum(gp)) * lor_p + float(np.sum(gm)) * lor_m
        out.append(pref * total)
    return out[0], out[1]


@dataclass
class RateTable:
    """All rates between basis states at one laser setting and momentum.

    Arrays are indexed [from, to]; entries between different parity
    ladders are exactly zero.  The diagonal holds elastic (Rayleigh)
    rates; they do not enter the population generator.
    """

    basis: RoVibBasis
    gamma_spont: np.ndarray
    gamma_cavity_plus: np.ndarray
    gamma_cavity_minus: np.ndarray
    momentum: float
    laser_detuning: float

    def gamma_cavity(self) -> np.ndarray:
        return self.gamma_cavity_plus + self.gamma_cavity_minus

    def total(self) -> np.ndarray:
        return self.gamma_spont + self.gamma_cavity()

    def generator(self) -> np.ndarray:
        """Rate-equation generator M with dP/dt = M P (columns sum to 0)."""
        rates = self.total().copy()
        np.fill_diagonal(rates, 0.0)
        m = rates.T.copy()
        np.fill_diagonal(m, -rates.sum(axis=1))
        colsum = np.abs(m.sum(axis=0))
        scale = max(np.max(np.abs(rates)), 1.0)
        if np.any(colsum > 1e-9 * scale):
            raise NonGenerator("generator columns do not sum to zero")
        return m

    def elastic_rate_sum(self, populations: np.ndarray | None = None) -> float:
        """Population-weighted sum of elastic scattering rates, the
        Gamma'(0) entering the translational cooling rate."""
        diag = np.diag(self.gamma_cavity()) + np.diag(self.gamma_spont) / 2.0
        if populations is None:
            return float(diag.sum())
        return float(np.dot(populations, diag))


@dataclass
class RateModel:
    """Everything needed to produce RateTables at arbitrary laser offsets."""

    basis: RoVibBasis
    manifolds: list[ExcitedManifold]
    strengths: TransitionStrengths
    laser: LaserSpec
    cavity: CavitySpec
    reference_strength: float      # au^2, |alpha_ref|^2
    _cache: dict = field(default_factory=dict, repr=False)

    def strength_ratio(self, f: RoVibState, t: RoVibState) -> float:
        return self.strengths.alpha_sq(f, t) / self.reference_strength

    def build(self, offset: float = 0.0, fsr: float | None = None,
              momentum: float = 0.0, cavity_on: bool = True) -> RateTable:
        key = (round(offset, 3), fsr and round(fsr, 3), momentum, cavity_on)
        if key in self._cache:
            return self._cache[key]
        laser = self.laser.with_offset(offset)
        cavity = self.cavity if fsr is None else self.cavity.with_fsr(fsr)
        n = len(self.basis)
        spont = np.zeros((n, n))
        cav_p = np.zeros((n, n))
        cav_m = np.zeros((n, n))
        mass = self.basis.molecule.total_mass
        for i, f in enumerate(self.basis.states):
            for k, t in enumerate(self.basis.states):
                if f.ladder != t.ladder or abs(f.j - t.j) not in (0, 2):
                    continue
                spont[i, k] = spontaneous_rate(self.manifolds, f, t, laser)
                if cavity_on:
                    ratio = self.strength_ratio(f, t)
                    if ratio > 0.0:
                        cav_p[i, k], cav_m[i, k] = cavity_rate(
                            self.manifolds, f, t, laser, cavity, ratio,
                            momentum, mass)
        table = RateTable(
            basis=self.basis, gamma_spont=spont, gamma_cavity_plus=cav_p,
            gamma_cavity_minus=cav_m, momentum=momentum, laser_detuning=offset,
        )
        self._cache[key] = table
        return table


# ---------------------------------------------------------------------------
# Validity checks


@dataclass
class RegimeLine:
    label: str
    cavity_rate: float
    spontaneous_rate: float

    @property
    def ratio(self) -> float:
        if self.spontaneous_rate == 0.0:
            return math.inf
        return self.cavity_rate / self.spontaneous_rate


@dataclass
class RegimeReport:
    lines: list[RegimeLine]
    coupling_ratio: float          # kappa / |g Omega_L / Delta|
    threshold: float

    @property
    def cavity_wins(self) -> bool:
        return all(l.ratio > self.threshold for l in self.lines)

    @property
    def couplings_ok(self) -> bool:
        return self.coupling_ratio > self.threshold

    @property
    def all_pass(self) -> bool:
        return bool(self.lines) and self.cavity_wins and self.couplings_ok

    def format_text(self) -> str:
        out = ["# cavity-cooling validity report"]
        out.append(f"# threshold factor: {self.threshold:g}")
        out.append(
            f"couplings kappa/|g*Omega_L/Delta| = {self.coupling_ratio:.6g} "
            f"-> {'pass' if self.couplings_ok else 'FAIL'}"
        )
        out.append("# line\tGamma_cavity_1/s\tGamma_spont_1/s\tratio\tverdict")
        for l in self.lines:
            out.append(
                f"{l.label}\t{l.cavity_rate:.6e}\t{l.spontaneous_rate:.6e}\t"
                f"{l.ratio:.6g}\t{'pass' if l.ratio > self.threshold else 'FAIL'}"
            )
        out.append(f"overall: {'pass' if self.all_pass else 'FAIL'}")
        return "\n".join(out) + "\n"


def check_regime(model: RateModel, driven: list[tuple[RoVibState, RoVibState]],
                 threshold: float = 10.0) -> RegimeReport:
    """Evaluate both validity inequalities on each driven transition,
    with the laser tuned to bring that line onto cavity resonance."""
    from .spectrum import detuning_for        # local import, no cycle

    lines = []
    for f, t in driven:
        offset = detuning_for((f, t), model.cavity, model.laser)
        laser = model.laser.with_offset(offset)
        ratio = model.strength_ratio(f, t)
        gk = sum(cavity_rate(model.manifolds, f, t, laser, model.cavity, ratio))
        gg = spontaneous_rate(model.manifolds, f, t, laser)
        lines.append(RegimeLine(
            label=f"{_transition_label(f, t)}", cavity_rate=gk,
            spontaneous_rate=gg,
        ))
    ground = model.basis.states[0]
    best = math.inf
    for m in model.manifolds:
        delta0 = abs(ground.energy - m.energies[0] + model.laser.omega)
        raman = model.cavity.g_reference * model.laser.rabi_reference / delta0
        best = min(best, model.cavity.kappa / raman)
    return RegimeReport(lines=lines, coupling_ratio=best, threshold=threshold)


def _transition_label(f: RoVibState, t: RoVibState) -> str:
    return f"v{f.v}-{t.v}:J{f.j}-{t.j}"
