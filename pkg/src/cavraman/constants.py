"""Physical constants and unit conversions.

Every module computes in one internal unit system: angular frequency
(rad/s) for energies, detunings and linewidths; angstrom and amu for
nuclear coordinates and masses; atomic units for polarizabilities and
dipoles.  This module is the single place where unit factors live.

Constants are CODATA 2018.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# --- CODATA 2018 ---
C_M_PER_S = 299792458.0                # speed of light, exact
C_CM_PER_S = C_M_PER_S * 100.0
H_JS = 6.62607015e-34                  # Planck constant, exact
HBAR_JS = H_JS / (2.0 * math.pi)
KB_J_PER_K = 1.380649e-23              # Boltzmann constant, exact
E_CHARGE_C = 1.602176634e-19           # elementary charge, exact
AMU_KG = 1.66053906660e-27
ME_KG = 9.1093837015e-31
BOHR_ANGSTROM = 0.529177210903
HARTREE_J = 4.3597447222071e-18
AU_POLARIZABILITY_SI = 1.64877727436e-41   # C^2 m^2 / J
AU_DIPOLE_SI = 8.4783536255e-30            # C m

# rad/s per cm^-1: omega = 2 pi c nu~
RADS_PER_CM1 = 2.0 * math.pi * C_CM_PER_S
# rad/s per Kelvin (temperature treated as energy k_B T)
RADS_PER_KELVIN = KB_J_PER_K / HBAR_JS
# rad/s per eV
RADS_PER_EV = E_CHARGE_C / HBAR_JS
# Hartree expressed as angular frequency
RADS_PER_HARTREE = HARTREE_J / HBAR_JS


class Dimension(enum.Enum):
    FREQUENCY = "frequency"     # any energy-like scale
    TIME = "time"
    LENGTH = "length"
    MASS = "mass"
    POWER = "power"
    POLARIZABILITY = "polarizability"
    DIPOLE = "dipole"


class Unit(enum.Enum):
    """Supported units.  Each carries (dimension, factor to canonical unit).

    Canonical units per dimension: rad/s, s, angstrom, amu, W, au, au.
    """

    WAVENUMBER = (Dimension.FREQUENCY, RADS_PER_CM1)
    ANGULAR_FREQUENCY = (Dimension.FREQUENCY, 1.0)
    HERTZ = (Dimension.FREQUENCY, 2.0 * math.pi)
    EV = (Dimension.FREQUENCY, RADS_PER_EV)
    KELVIN = (Dimension.FREQUENCY, RADS_PER_KELVIN)
    NANOSECOND = (Dimension.TIME, 1e-9)
    MILLISECOND = (Dimension.TIME, 1e-3)
    SECOND = (Dimension.TIME, 1.0)
    ANGSTROM = (Dimension.LENGTH, 1.0)
    AMU = (Dimension.MASS, 1.0)
    WATT = (Dimension.POWER, 1.0)
    AU_POLARIZABILITY = (Dimension.POLARIZABILITY, 1.0)
    AU_DIPOLE = (Dimension.DIPOLE, 1.0)

    @property
    def dimension(self) -> Dimension:
        return self.value[0]

    @property
    def to_canonical(self) -> float:
        return self.value[1]


class UnknownUnitPair(ValueError):
    """Raised when a conversion between incompatible units is requested."""


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: Unit

    def to(self, target: Unit) -> "Quantity":
        return convert(self, target)


def convert(q: Quantity, target: Unit) -> Quantity:
    """Exact linear conversion between units of the same dimension."""
    if q.unit.dimension is not target.dimension:
        raise UnknownUnitPair(f"no conversion {q.unit.name} -> {target.name}")
    return Quantity(q.value * q.unit.to_canonical / target.to_canonical, target)


def wavenumber_to_rads(value_cm1: float) -> float:
    return value_cm1 * RADS_PER_CM1


def rads_to_wavenumber(value_rads: float) -> float:
    return value_rads / RADS_PER_CM1


def hz_to_rads(value_hz: float) -> float:
    return 2.0 * math.pi * value_hz


def rads_to_hz(value_rads: float) -> float:
    return value_rads / (2.0 * math.pi)


def kelvin_to_rads(value_k: float) -> float:
    return value_k * RADS_PER_KELVIN


def wavelength_nm_to_rads(wavelength_nm: float) -> float:
    """Angular frequency of light with the given vacuum wavelength."""
    return 2.0 * math.pi * C_M_PER_S / (wavelength_nm * 1e-9)
