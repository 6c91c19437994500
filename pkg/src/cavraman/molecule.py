"""Ro-vibrational level structure of a diatomic radical.

Rotational energies follow the standard expansion
E_J = B(v) J(J+1) - D_J J^2 (J+1)^2 with
B(v) = B_e + B_ex1 (v+1/2) + B_ex2 (v+1/2)^2.

Because Raman selection rules only connect Delta J = 0, +-2, even-J and
odd-J states form two disconnected ladders with ground states (v=0, J=0)
and (v=0, J=1).  Only one lambda-doublet / spin-orbit component is
modeled; the splitting is carried as metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import RADS_PER_KELVIN, wavenumber_to_rads


class EmptyBasis(ValueError):
    pass


@dataclass(frozen=True)
class ExcitedElectronicState:
    """One electronically excited state contributing to the Raman process.

    T_e, omega_e, omega_e_x_e in cm^-1; r_e in angstrom; linewidth is the
    total spontaneous decay rate of the state in 1/s.
    """

    label: str
    t_e: float
    omega_e: float
    omega_e_x_e: float
    r_e: float
    linewidth: float
    dipole_orientation: str = "perpendicular"   # transition moment vs axis


@dataclass(frozen=True)
class MoleculeSpec:
    """Spectroscopic constants of one diatomic in its ground electronic state.

    Rotational/vibrational constants in cm^-1, masses in amu, r_e in
    angstrom.  omega_e_x_e may be None, in which case the vibrational
    ladder defaults to harmonic.
    """

    name: str
    reduced_mass: float
    total_mass: float
    b_e: float
    b_ex1: float
    b_ex2: float
    omega_e: float
    r_e: float
    ground_state_label: str
    d_j: float = 0.0
    omega_e_x_e: float | None = None
    spin_orbit_splitting: float = 0.0          # cm^-1, metadata only
    excited_states: tuple[ExcitedElectronicState, ...] = ()

    def __post_init__(self):
        if self.b_e <= 0 or self.omega_e <= 0 or self.reduced_mass <= 0:
            raise ValueError(f"{self.name}: B_e, omega_e, reduced_mass must be > 0")

    def b_v(self, v: int) -> float:
        """Effective rotational constant of vibrational level v, cm^-1."""
        x = v + 0.5
        return self.b_e + self.b_ex1 * x + self.b_ex2 * x * x


@dataclass(frozen=True)
class RoVibState:
    v: int
    j: int
    ladder: str        # "even" | "odd", fixed by parity of J
    energy: float      # rad/s, relative to (v=0, J=0)

    @property
    def label(self) -> str:
        return f"v{self.v}:J{self.j}"


@dataclass(frozen=True)
class RoVibBasis:
    molecule: MoleculeSpec
    states: tuple[RoVibState, ...]
    v_max: int
    j_max: int
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "index", {(s.v, s.j): i for i, s in enumerate(self.states)}
        )

    def __len__(self) -> int:
        return len(self.states)

    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.states])

    def j_values(self) -> np.ndarray:
        return np.array([s.j for s in self.states])

    def v_values(self) -> np.ndarray:
        return np.array([s.v for s in self.states])

    def state(self, v: int, j: int) -> RoVibState:
        return self.states[self.index[(v, j)]]


def rotational_energy(m: MoleculeSpec, v: int, j: int) -> float:
    """Rotational term value of (v, J) in rad/s."""
    if v < 0 or j < 0:
        raise ValueError("v and J must be non-negative")
    jj = j * (j + 1)
    e_cm1 = m.b_v(v) * jj - m.d_j * jj * jj
    return wavenumber_to_rads(e_cm1)


def vibrational_origin(m: MoleculeSpec, v: int) -> float:
    """G(v) - G(0) in rad/s from the Morse/harmonic constants.

    Used as the analytic fallback when no solved potential is supplied.
    """
    if v < 0:
        raise ValueError("v must be non-negative")
    wexe = m.omega_e_x_e or 0.0

    def g(n: int) -> float:
        x = n + 0.5
        return m.omega_e * x - wexe * x * x

    return wavenumber_to_rads(g(v) - g(0))


def build_basis(
    m: MoleculeSpec,
    v_max: int,
    j_max: int,
    vib_energies: np.ndarray | None = None,
) -> RoVibBasis:
    """All (v, J) states with v <= v_max, J <= j_max, sorted by (v, J).

    vib_energies, when given, are solver eigenvalues in rad/s (absolute
    within the potential); energies are referenced to (v=0, J=0).
    Otherwise the Morse/harmonic term formula is used.
    """
    if v_max < 0 or j_max < 0:
        raise ValueError("v_max and j_max must be non-negative")
    if vib_energies is not None:
        if len(vib_energies) < v_max + 1:
            raise ValueError("vib_energies does not cover v_max")
        vib = np.asarray(vib_energies, dtype=float)
        vib = vib - vib[0]
    else:
        vib = np.array([vibrational_origin(m, v) for v in range(v_max + 1)])

    states = []
    for v in range(v_max + 1):
        for j in range(j_max + 1):
            states.append(
                RoVibState(
                    v=v,
                    j=j,
                    ladder="even" if j % 2 == 0 else "odd",
                    energy=vib[v] + rotational_energy(m, v, j),
                )
            )
    return RoVibBasis(molecule=m, states=tuple(states), v_max=v_max, j_max=j_max)


def boltzmann_populations(
    basis: RoVibBasis, temperature_k: float, degeneracy: bool = True
) -> np.ndarray:
    """Thermal populations P proportional to g exp(-E/kT), normalized.

    g = 2J+1 when degeneracy is on (the default; it reproduces the known
    initial <J> of OH at 300 K), otherwise 1.
    """
    if len(basis) == 0:
        raise EmptyBasis("basis has no states")
    if temperature_k < 0:
        raise ValueError("temperature must be >= 0")
    e = basis.energies()
    if temperature_k == 0:
        p = np.zeros(len(basis))
        p[int(np.argmin(e))] = 1.0
        return p
    kt = temperature_k * RADS_PER_KELVIN
    w = np.exp(-(e - e.min()) / kt)
    if degeneracy:
        w = w * (2.0 * basis.j_values() + 1.0)
    return w / w.sum()


def mean_j(basis: RoVibBasis, populations: np.ndarray) -> float:
    return float(np.dot(populations, basis.j_values()))


def mean_v(basis: RoVibBasis, populations: np.ndarray) -> float:
    return float(np.dot(populations, basis.v_values()))


# ---------------------------------------------------------------------------
# Molecule spec files: one molecule per file, "key [unit] = value" lines.

_FIELD_UNITS = {
    "reduced_mass": "amu",
    "total_mass": "amu",
    "B_e": "cm-1",
    "B_ex1": "cm-1",
    "B_ex2": "cm-1",
    "D_J": "cm-1",
    "omega_e": "cm-1",
    "omega_e_x_e": "cm-1",
    "r_e": "angstrom",
    "spin_orbit_splitting": "cm-1",
}

_EXCITED_UNITS = {
    "T_e": "cm-1",
    "omega_e": "cm-1",
    "omega_e_x_e": "cm-1",
    "r_e": "angstrom",
    "linewidth": "1/s",
}


class MoleculeFileError(ValueError):
    pass


def _parse_keyval(line: str, path: str):
    if "=" not in line:
        raise MoleculeFileError(f"{path}: malformed line {line!r}")
    key, value = line.split("=", 1)
    key = key.strip()
    unit = None
    if "[" in key:
        key, rest = key.split("[", 1)
        key = key.strip()
        unit = rest.rstrip("]").strip()
    return key, unit, value.strip()


def load_molecule_file(path: str) -> MoleculeSpec:
    """Parse a .mol file into a MoleculeSpec, checking unit annotations."""
    fields: dict = {}
    excited: list[ExcitedElectronicState] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, unit, value = _parse_keyval(line, path)
            if key == "excited_state":
                excited.append(_parse_excited(value, path))
                continue
            if key in ("name", "ground_state_label"):
                fields[key] = value
                continue
            expected = _FIELD_UNITS.get(key)
            if expected is None:
                raise MoleculeFileError(f"{path}: unknown key {key!r}")
            if unit != expected:
                raise MoleculeFileError(
                    f"{path}: key {key!r} must carry unit [{expected}], got [{unit}]"
                )
            fields[_pyname(key)] = float(value)
    try:
        return MoleculeSpec(excited_states=tuple(excited), **fields)
    except TypeError as exc:
        raise MoleculeFileError(f"{path}: {exc}") from exc


def _pyname(key: str) -> str:
    return {
        "B_e": "b_e",
        "B_ex1": "b_ex1",
        "B_ex2": "b_ex2",
        "D_J": "d_j",
    }.get(key, key)


def _parse_excited(value: str, path: str) -> ExcitedElectronicState:
    parts = [p.strip() for p in value.split(";")]
    label = parts[0]
    kwargs: dict = {}
    for part in parts[1:]:
        key, unit, val = _parse_keyval(part, path)
        if key == "dipole_orientation":
            kwargs[key] = val
            continue
        expected = _EXCITED_UNITS.get(key)
        if expected is None:
            raise MoleculeFileError(f"{path}: unknown excited-state key {key!r}")
        if unit != expected:
            raise MoleculeFileError(
                f"{path}: excited key {key!r} must carry unit [{expected}]"
            )
        kwargs[{"T_e": "t_e"}.get(key, key)] = float(val)
    return ExcitedElectronicState(label=label, **kwargs)
