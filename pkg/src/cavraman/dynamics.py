"""Population dynamics under piecewise-constant rate matrices.

Rates are constant within one schedule step, so propagation over a step
is the exact matrix exponential of the rate-equation generator; no ODE
stepping or tolerance choices are involved.  The translational degree of
freedom is treated semiclassically on a uniform momentum grid whose
spacing divides the photon recoil exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .constants import HBAR_JS, KB_J_PER_K
from .molecule import RoVibBasis, mean_j, mean_v
from .rates import RateTable


class Reducible(ValueError):
    pass


class CFLViolation(ValueError):
    pass


_NEG_TOL = -1e-12


def _clamp(p: np.ndarray) -> np.ndarray:
    if np.min(p) < _NEG_TOL * max(1.0, np.max(np.abs(p))) - 1e-30:
        if np.min(p) < -1e-9:
            raise ValueError(f"population went negative: min = {np.min(p):.3e}")
    p = np.where(p < 0.0, 0.0, p)
    return p / p.sum()


@dataclass
class Propagator:
    """exp(M dt) applied repeatedly; reuse it when stepping many times
    with the same rates."""

    generator: np.ndarray
    dt: float
    _u: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        self._u = expm(self.generator * self.dt)

    def step(self, p: np.ndarray) -> np.ndarray:
        return _clamp(self._u @ p)


def propagate_step(p: np.ndarray, rates: RateTable, dt: float) -> np.ndarray:
    """P(t+dt) = exp(M dt) P(t); total population conserved."""
    return Propagator(rates.generator(), dt).step(np.asarray(p, dtype=float))


@dataclass
class StationaryBlock:
    indices: list[int]
    populations: np.ndarray     # normalized to 1 within the block


@dataclass
class StationarySolution:
    blocks: list[StationaryBlock]
    size: int

    @property
    def unique(self) -> bool:
        return len(self.blocks) == 1

    def vector(self) -> np.ndarray:
        if not self.unique:
            raise Reducible(
                f"{len(self.blocks)} disconnected blocks; combine with weights"
            )
        return self.combined()

    def combined(self, block_weights: list[float] | None = None) -> np.ndarray:
        if block_weights is None:
            block_weights = [1.0 / len(self.blocks)] * len(self.blocks)
        out = np.zeros(self.size)
        for blk, w in zip(self.blocks, block_weights):
            out[blk.indices] = w * blk.populations
        return out

    def weights_from(self, p0: np.ndarray) -> list[float]:
        return [float(np.sum(p0[blk.indices])) for blk in self.blocks]


def _connected_components(adjacency: np.ndarray) -> list[list[int]]:
    n = adjacency.shape[0]
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and (adjacency[i, j] or adjacency[j, i]):
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def stationary(rates: RateTable) -> StationarySolution:
    """Null vector(s) of the generator, one per connected component.

    The parity ladders never connect, so a mixed basis always yields at
    least two blocks; weight them with the initial populations.
    """
    m = rates.generator()
    r = rates.total().copy()
    np.fill_diagonal(r, 0.0)
    comps = _connected_components(r > 0.0)
    blocks = []
    for comp in comps:
        sub = m[np.ix_(comp, comp)]
        w, v = np.linalg.eig(sub)
        idx = int(np.argmin(np.abs(w)))
        vec = np.real(v[:, idx])
        vec = np.where(np.abs(vec) < 1e-14 * np.max(np.abs(vec)), 0.0, vec)
        if vec.sum() < 0:
            vec = -vec
        if np.min(vec) < -1e-9 * np.max(np.abs(vec)):
            raise Reducible("component stationary state is not a distribution")
        vec = np.clip(vec, 0.0, None)
        blocks.append(StationaryBlock(indices=comp, populations=vec / vec.sum()))
    return StationarySolution(blocks=blocks, size=m.shape[0])


# ---------------------------------------------------------------------------
# Trajectories


@dataclass
class PopulationTrajectory:
    basis: RoVibBasis
    times: list[float] = field(default_factory=list)
    populations: list[np.ndarray] = field(default_factory=list)
    e_kin: list[float] = field(default_factory=list)

    def append(self, t: float, p: np.ndarray, e_kin: float | None = None):
        if self.times and t <= self.times[-1]:
            raise ValueError("snapshot times must be strictly increasing")
        self.times.append(t)
        self.populations.append(np.array(p))
        if e_kin is not None:
            self.e_kin.append(e_kin)

    def mean_j_series(self) -> np.ndarray:
        return np.array([mean_j(self.basis, p) for p in self.populations])

    def mean_v_series(self) -> np.ndarray:
        return np.array([mean_v(self.basis, p) for p in self.populations])

    def final(self) -> np.ndarray:
        return self.populations[-1]

    def export(self) -> str:
        labels = "\t".join(s.label for s in self.basis.states)
        out = ["# population trajectory"]
        header = f"# t_s\t{labels}\tmeanJ\tmeanV"
        if self.e_kin:
            header += "\tEkin_J"
        out.append(header)
        for i, (t, p) in enumerate(zip(self.times, self.populations)):
            cols = [f"{t:.9e}"] + [f"{x:.12e}" for x in p]
            cols.append(f"{mean_j(self.basis, p):.9e}")
            cols.append(f"{mean_v(self.basis, p):.9e}")
            if self.e_kin:
                cols.append(f"{self.e_kin[i]:.9e}")
            out.append("\t".join(cols))
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Translational motion


@dataclass
class MomentumGrid:
    """Uniform momenta whose spacing is the recoil over an integer."""

    recoil: float              # hbar k, kg m/s
    subdivision: int = 4       # bins per recoil
    half_width: float = 1.0    # +- extent, kg m/s

    def __post_init__(self):
        if self.subdivision < 1:
            raise ValueError("subdivision must be >= 1")
        self.dp = self.recoil / self.subdivision
        n_half = int(math.ceil(self.half_width / self.dp))
        self.points = np.arange(-n_half, n_half + 1) * self.dp

    @classmethod
    def thermal(cls, recoil: float, mass_kg: float, temperature_k: float,
                subdivision: int = 4, sigmas: float = 8.0) -> "MomentumGrid":
        width = sigmas * math.sqrt(mass_kg * KB_J_PER_K * temperature_k)
        return cls(recoil=recoil, subdivision=subdivision, half_width=width)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass
class MomentumRates:
    """Directional scattering rates on the momentum grid.

    plus[f, t, ip] / minus[f, t, ip] are the rates of processes kicking
    the molecule by +recoil / -recoil.  A cavity photon emitted along +
    kicks the molecule along -, so builders must map emission-labelled
    rates onto recoil labels accordingly; spontaneous Raman splits
    half/half.
    """

    grid: MomentumGrid
    plus: np.ndarray
    minus: np.ndarray


def elastic_momentum_rates(model, state, grid: MomentumGrid,
                           offset: float = 0.0) -> MomentumRates:
    """Directional Rayleigh scattering rates vs momentum for one internal
    state, for the translational pre-cooling stage (internal state
    frozen, laser parked red of the Rayleigh line).

    Emission along + recoils the molecule along -, so the emission-
    labelled cavity rates fill the opposite recoil channels; spontaneous
    scattering splits half/half.
    """
    from .rates import cavity_rate, spontaneous_rate

    laser = model.laser.with_offset(offset)
    ratio = model.strength_ratio(state, state)
    mass = model.basis.molecule.total_mass
    n_p = grid.n
    plus = np.zeros((1, 1, n_p))
    minus = np.zeros((1, 1, n_p))
    g_spont = spontaneous_rate(model.manifolds, state, state, laser)
    for ip, p in enumerate(grid.points):
        emit_p, emit_m = cavity_rate(model.manifolds, state, state, laser,
                                     model.cavity, ratio, momentum=float(p),
                                     mass_amu=mass)
        plus[0, 0, ip] = emit_m + g_spont / 2.0
        minus[0, 0, ip] = emit_p + g_spont / 2.0
    return MomentumRates(grid=grid, plus=plus, minus=minus)


def maxwell_boltzmann(grid: MomentumGrid, mass_kg: float,
                      temperature_k: float) -> np.ndarray:
    w = np.exp(-grid.points**2 / (2.0 * mass_kg * KB_J_PER_K * temperature_k))
    return w / w.sum()


def run_translational_stage(model, temperature_k: float, duration_s: float,
                            offset_kappa: float = -0.5, populations=None,
                            subdivision: int = 4, sample_every: int = 200):
    """Doppler pre-cooling of the external motion.

    Parks the laser offset_kappa half-linewidths from the comb mode
    nearest the Rayleigh line of the most-populated elastic scatterer and
    evolves the 1-D momentum distribution with the internal state frozen.
    Returns (times, kinetic energies in J, final distribution).
    """
    from .constants import AMU_KG, C_M_PER_S, HBAR_JS
    from .spectrum import detuning_for

    basis = model.basis
    if populations is None:
        populations = np.ones(len(basis)) / len(basis)
    candidates = [(p, s) for s, p in zip(basis.states, populations)
                  if model.strength_ratio(s, s) > 0.0]
    if not candidates:
        raise ValueError("no state with elastic strength in the basis")
    state = max(candidates)[1]
    offset = (detuning_for((state, state), model.cavity, model.laser)
              + offset_kappa * model.cavity.kappa)
    mass_kg = basis.molecule.total_mass * AMU_KG
    recoil = HBAR_JS * model.laser.omega / C_M_PER_S
    grid = MomentumGrid.thermal(recoil=recoil, mass_kg=mass_kg,
                                temperature_k=temperature_k,
                                subdivision=subdivision)
    mrates = elastic_momentum_rates(model, state, grid, offset)
    total = float((mrates.plus.sum(axis=1) + mrates.minus.sum(axis=1)).max())
    dt = min(0.09 / total, duration_s)
    n_steps = max(1, int(round(duration_s / dt)))
    w = maxwell_boltzmann(grid, mass_kg, temperature_k)[None, :]
    times = [0.0]
    energies = [kinetic_energy(w, grid, mass_kg)]
    for i in range(1, n_steps + 1):
        w = evolve_momentum(w, mrates, dt)
        if i % sample_every == 0 or i == n_steps:
            times.append(i * dt)
            energies.append(kinetic_energy(w, grid, mass_kg))
    return np.array(times), np.array(energies), w


def evolve_momentum(w: np.ndarray, mrates: MomentumRates, dt: float) -> np.ndarray:
    """One explicit step of the semiclassical momentum master equation.

    w has shape (n_states, n_momenta).  Gains land shifted by one recoil
    (the grid subdivision in bins); probability leaving through the grid
    edge is folded back into the edge bin, so population is conserved.
    """
    w = np.asarray(w, dtype=float)
    total_out = mrates.plus.sum(axis=1) + mrates.minus.sum(axis=1)
    if dt * float(np.max(total_out)) > 0.1:
        raise CFLViolation("dt * max rate exceeds 0.1; reduce the step")
    shift = mrates.grid.subdivision
    out = w * (1.0 - dt * total_out)
    n_p = w.shape[1]
    for (rates, sgn) in ((mrates.plus, +1), (mrates.minus, -1)):
        flux = dt * np.einsum("ftp,fp->tp", rates, w)
        shifted = np.zeros_like(flux)
        if sgn > 0:
            shifted[:, shift:] = flux[:, : n_p - shift]
            shifted[:, -1] += flux[:, n_p - shift:].sum(axis=1)
        else:
            shifted[:, : n_p - shift] = flux[:, shift:]
            shifted[:, 0] += flux[:, :shift].sum(axis=1)
        out += shifted
    return out


def kinetic_energy(w: np.ndarray, grid: MomentumGrid, mass_kg: float) -> float:
    return float(np.sum(w * grid.points[None, :] ** 2) / (2.0 * mass_kg))


# ---------------------------------------------------------------------------
# Doppler limit


@dataclass(frozen=True)
class DopplerResult:
    e_kin_inf: float               # J
    cooling: bool
    cooling_power: float | None    # J/s, when an elastic rate sum is given


def doppler_limit(kappa: float, delta: float, recoil_energy: float | None = None,
                  elastic_rate_sum: float | None = None) -> DopplerResult:
    """Asymptotic kinetic energy (hbar/4)(delta^2 + kappa^2)/|delta| and,
    optionally, the initial cooling power E_recoil * Gamma_elastic.

    delta = omega_L - Omega_c must be negative (red side) for cooling;
    a non-negative delta is flagged as heating.
    """
    if delta == 0.0:
        raise ValueError("delta = 0 is singular; detune the laser")
    e_inf = HBAR_JS / 4.0 * (delta**2 + kappa**2) / abs(delta)
    power = None
    if recoil_energy is not None and elastic_rate_sum is not None:
        power = recoil_energy * elastic_rate_sum
    return DopplerResult(e_kin_inf=e_inf, cooling=delta < 0.0, cooling_power=power)
