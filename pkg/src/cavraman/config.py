"""Run configuration: parsing .cfg files and assembling the rate model.

Config files are INI-style (configparser).  Frequency-like entries are
ordinary frequencies in Hz (suffix _hz) and converted to angular
frequencies internally; durations are milliseconds in schedule files and
seconds in code.

The default data directory holds the bundled molecule files,
polarizability curves, configs and schedules; override it with the
CAVRAMAN_DATA environment variable.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import hz_to_rads, wavenumber_to_rads
from .molecule import (MoleculeSpec, RoVibBasis, boltzmann_populations,
                       build_basis, load_molecule_file)
from .polarizability import PolarizabilityCurves, TransitionStrengths, load_alpha_curve_file
from .rates import (CavitySpec, ExcitedManifold, LaserSpec, RateModel,
                    build_excited_manifolds, load_branching_override)
from .vibsolver import (RadialGrid, TabulatedPotential, morse_from_constants,
                        solve_levels)


class ConfigError(ValueError):
    pass


def data_dir() -> Path:
    env = os.environ.get("CAVRAMAN_DATA")
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def resolve_data_path(name: str, base: Path | None = None) -> Path:
    """A path is looked up next to the config file first, then in the
    bundled data directory."""
    p = Path(name)
    if p.is_absolute() and p.exists():
        return p
    if base is not None and (base / p).exists():
        return base / p
    if (data_dir() / p).exists():
        return data_dir() / p
    raise ConfigError(f"cannot find data file {name!r}")


@dataclass
class RunConfig:
    molecule_file: Path
    alpha_file: Path
    pes_file: Path | None
    branching_file: Path | None
    wavelength_nm: float
    rabi_reference_hz: float
    laser_offset_hz: float
    cavity_length_cm: float
    fsr_hz: float
    kappa_hz: float
    g_reference_hz: float
    waist_um: float
    enhancement: float
    reference_alpha_au: float
    temperature_k: float
    initial_state: str | None      # e.g. "v1:thermalJ" or "v0:J0"
    v_max: int
    j_max: int
    degeneracy: bool
    grid_r_min: float
    grid_r_max: float
    grid_points: int
    n_ground_levels: int
    n_excited_levels: int
    schedule: str
    step_duration_ms: float
    momentum_model: bool
    translational_temperature_k: float
    translational_duration_ms: float
    translational_offset_kappa: float
    threshold: float
    seed: int
    regime_threshold: float
    raw_text: str = ""

    def content_hash(self) -> str:
        blob = self.raw_text.encode() + self.molecule_file.read_bytes() \
            + self.alpha_file.read_bytes()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text()
    return parse_config(text, base=path.parent)


def parse_config(text: str, base: Path | None = None) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc

    def get(section, key, cast=float, default=None):
        try:
            raw = cp.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            if default is not None:
                return default
            raise ConfigError(f"missing config entry [{section}] {key}") from None
        try:
            if cast is bool:
                return raw.strip().lower() in ("1", "true", "on", "yes")
            return cast(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc

    mol_file = resolve_data_path(get("molecule", "file", str), base)
    alpha_file = resolve_data_path(get("polarizability", "file", str), base)
    pes_name = get("molecule", "pes_file", str, default="")
    pes_file = resolve_data_path(pes_name, base) if pes_name else None
    branch_name = get("rates", "branching_file", str, default="")
    branching_file = resolve_data_path(branch_name, base) if branch_name else None
    return RunConfig(
        molecule_file=mol_file,
        alpha_file=alpha_file,
        pes_file=pes_file,
        branching_file=branching_file,
        wavelength_nm=get("laser", "wavelength_nm"),
        rabi_reference_hz=get("laser", "rabi_reference_hz"),
        laser_offset_hz=get("laser", "offset_hz", default=0.0),
        cavity_length_cm=get("cavity", "length_cm"),
        fsr_hz=get("cavity", "fsr_hz"),
        kappa_hz=get("cavity", "kappa_hz"),
        g_reference_hz=get("cavity", "g_reference_hz"),
        waist_um=get("cavity", "waist_um"),
        enhancement=get("cavity", "enhancement", default=1.0),
        reference_alpha_au=get("rates", "reference_alpha_au"),
        temperature_k=get("initial", "temperature_k", default=300.0),
        initial_state=get("initial", "state", str, default="") or None,
        v_max=get("initial", "v_max", int, default=0),
        j_max=get("initial", "j_max", int, default=30),
        degeneracy=get("initial", "degeneracy", bool, default=True),
        grid_r_min=get("grid", "r_min_angstrom"),
        grid_r_max=get("grid", "r_max_angstrom"),
        grid_points=get("grid", "n_points", int, default=512),
        n_ground_levels=get("grid", "n_ground_levels", int, default=10),
        n_excited_levels=get("grid", "n_excited_levels", int, default=6),
        schedule=get("run", "schedule", str, default="topdown"),
        step_duration_ms=get("run", "step_duration_ms", default=60.0),
        momentum_model=get("run", "momentum_model", bool, default=False),
        translational_temperature_k=get("translational", "temperature_k",
                                        default=0.001),
        translational_duration_ms=get("translational", "duration_ms",
                                      default=50.0),
        translational_offset_kappa=get("translational", "offset_kappa",
                                       default=-0.5),
        threshold=get("run", "threshold", default=1e-3),
        seed=get("run", "seed", int, default=1),
        regime_threshold=get("run", "regime_threshold", default=10.0),
        raw_text=text,
    )


@dataclass
class Workspace:
    """Fully assembled simulation objects for one configuration."""

    config: RunConfig
    molecule: MoleculeSpec
    basis: RoVibBasis
    grid: RadialGrid
    curves: PolarizabilityCurves
    strengths: TransitionStrengths
    manifolds: list[ExcitedManifold]
    laser: LaserSpec
    cavity: CavitySpec
    model: RateModel

    def initial_populations(self) -> np.ndarray:
        cfg = self.config
        if cfg.initial_state:
            return parse_initial_state(cfg.initial_state, self.basis,
                                       cfg.temperature_k, cfg.degeneracy)
        return boltzmann_populations(self.basis, cfg.temperature_k, cfg.degeneracy)


def parse_initial_state(spec: str, basis: RoVibBasis, temperature_k: float,
                        degeneracy: bool) -> np.ndarray:
    """'v0:J0' pins one state; 'v1:thermalJ' puts a thermal rotational
    distribution inside vibrational level 1."""
    spec = spec.strip()
    p = np.zeros(len(basis))
    if ":thermalJ" in spec:
        v = int(spec.split(":", 1)[0][1:])
        ref = boltzmann_populations(basis, temperature_k, degeneracy)
        for i, s in enumerate(basis.states):
            if s.v == 0:
                p[basis.index[(v, s.j)]] = ref[i]
        return p / p.sum()
    v_part, j_part = spec.split(":", 1)
    p[basis.index[(int(v_part[1:]), int(j_part[1:]))]] = 1.0
    return p


def build_workspace(cfg: RunConfig) -> Workspace:
    molecule = load_molecule_file(str(cfg.molecule_file))
    grid = RadialGrid(cfg.grid_r_min, cfg.grid_r_max, cfg.grid_points)
    if cfg.pes_file is not None:
        pot = load_pes_file(str(cfg.pes_file))
    elif molecule.omega_e_x_e:
        pot = morse_from_constants(molecule.omega_e, molecule.omega_e_x_e,
                                   molecule.r_e, molecule.reduced_mass)
    else:
        raise ConfigError(
            f"{molecule.name}: need omega_e_x_e or a PES file for the "
            f"vibrational potential")
    n_levels = max(cfg.n_ground_levels, cfg.v_max + 1)
    ground = solve_levels(pot, molecule.reduced_mass, grid, n_levels)
    vib_rads = np.array([wavenumber_to_rads(l.energy) for l in ground])
    basis = build_basis(molecule, cfg.v_max, cfg.j_max, vib_energies=vib_rads)
    curves = load_alpha_curve_file(str(cfg.alpha_file))
    strengths = TransitionStrengths(curves, ground)
    manifolds = build_excited_manifolds(molecule, ground, grid,
                                        cfg.n_excited_levels)
    if cfg.branching_file is not None:
        load_branching_override(str(cfg.branching_file), manifolds)
    laser = LaserSpec(
        wavelength_nm=cfg.wavelength_nm,
        rabi_reference=hz_to_rads(cfg.rabi_reference_hz),
        detuning_offset=hz_to_rads(cfg.laser_offset_hz),
    )
    cavity = CavitySpec(
        length_cm=cfg.cavity_length_cm,
        fsr=hz_to_rads(cfg.fsr_hz),
        kappa=hz_to_rads(cfg.kappa_hz),
        g_reference=hz_to_rads(cfg.g_reference_hz),
        waist_um=cfg.waist_um,
        enhancement=cfg.enhancement,
    )
    model = RateModel(
        basis=basis, manifolds=manifolds, strengths=strengths, laser=laser,
        cavity=cavity, reference_strength=cfg.reference_alpha_au**2,
    )
    return Workspace(
        config=cfg, molecule=molecule, basis=basis, grid=grid, curves=curves,
        strengths=strengths, manifolds=manifolds, laser=laser, cavity=cavity,
        model=model,
    )


def load_pes_file(path: str) -> TabulatedPotential:
    """Two-column text: R (angstrom), V (cm^-1); '#' comments."""
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            cols = line.split()
            if len(cols) != 2:
                raise ConfigError(f"{path}: expected 2 columns, got {line!r}")
            rows.append((float(cols[0]), float(cols[1])))
    data = np.array(rows)
    return TabulatedPotential(r=data[:, 0], v=data[:, 1])


def workspace_from_file(path: str | Path) -> Workspace:
    return build_workspace(load_config(path))
