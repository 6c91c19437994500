"""Folding the Raman spectrum into one free spectral range.

The cavity comb is a ladder of modes at integer multiples of the FSR.
Every Raman line (emitted at omega_L + internal shift) is mapped to its
offset from the comb, folded into [0, FSR).  Tuning the laser by x
shifts every folded offset by x mod FSR, which is how individual
anti-Stokes lines are brought onto resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .molecule import RoVibBasis, RoVibState
from .polarizability import placzek_teller
from .rates import CavitySpec, LaserSpec


class ForbiddenTransition(ValueError):
    pass


class NoSolutionInRange(ValueError):
    pass


@dataclass(frozen=True)
class SpectralLine:
    from_state: RoVibState
    to_state: RoVibState
    kind: str               # "stokes" | "anti-stokes" | "rayleigh"
    absolute_shift: float   # internal energy change, rad/s
    folded_offset: float    # emitted frequency mod FSR, in [0, FSR)

    @property
    def label(self) -> str:
        f, t = self.from_state, self.to_state
        return f"v{f.v}-{t.v}:J{f.j}-{t.j}"


@dataclass(frozen=True)
class ReducedSpectrum:
    lines: tuple[SpectralLine, ...]
    fsr: float
    laser_offset: float

    def anti_stokes(self) -> list[SpectralLine]:
        return [l for l in self.lines if l.kind == "anti-stokes"]

    def stokes(self) -> list[SpectralLine]:
        return [l for l in self.lines if l.kind == "stokes"]


def allowed_lines(basis: RoVibBasis):
    """(from, to) pairs connected by the Delta J = 0, +-2 rules with
    nonzero rotational strength, plus the elastic Rayleigh channels."""
    pairs = []
    for f in basis.states:
        for t in basis.states:
            if f.ladder != t.ladder or abs(f.j - t.j) not in (0, 2):
                continue
            if f is t:
                pairs.append((f, t))
                continue
            if placzek_teller(f.j, t.j) == 0.0:
                continue
            pairs.append((f, t))
    return pairs


def fold(basis: RoVibBasis, cavity: CavitySpec, laser: LaserSpec) -> ReducedSpectrum:
    """One folded line per allowed transition at the current laser setting."""
    if len(basis) == 0:
        raise ValueError("empty basis")
    lines = []
    for f, t in allowed_lines(basis):
        shift = f.energy - t.energy
        emitted = laser.omega + shift
        if shift > 0:
            kind = "anti-stokes"
        elif shift < 0:
            kind = "stokes"
        else:
            kind = "rayleigh"
        lines.append(SpectralLine(
            from_state=f, to_state=t, kind=kind, absolute_shift=shift,
            folded_offset=emitted % cavity.fsr,
        ))
    lines.sort(key=lambda l: (l.folded_offset, l.label))
    return ReducedSpectrum(lines=tuple(lines), fsr=cavity.fsr,
                           laser_offset=laser.detuning_offset)


def detuning_for(transition: tuple[RoVibState, RoVibState], cavity: CavitySpec,
                 laser: LaserSpec) -> float:
    """Smallest-magnitude laser offset putting the emitted line on a comb
    mode.  Ties at exactly FSR/2 resolve to the negative offset."""
    f, t = transition
    if f.ladder != t.ladder or abs(f.j - t.j) not in (0, 2) or (
            f is not t and placzek_teller(f.j, t.j) == 0.0):
        raise ForbiddenTransition(f"{f.label} -> {t.label}")
    base = laser.with_offset(0.0)
    emitted = base.omega + (f.energy - t.energy)
    folded = emitted % cavity.fsr
    down = -folded
    up = cavity.fsr - folded
    # folding a ~1e15 rad/s frequency leaves a few-ulp residue; treat
    # offsets within that noise of each other as the documented tie
    tie_tol = 64.0 * np.finfo(float).eps * emitted
    if abs(abs(down) - abs(up)) <= tie_tol:
        return down
    return down if abs(down) < abs(up) else up


def tune_fsr_for_pair(t1, t2, basis: RoVibBasis, cavity: CavitySpec,
                      laser: LaserSpec, tolerance: float,
                      max_fsr_change: float = 0.005):
    """FSR within +-max_fsr_change of nominal such that both lines sit on
    comb modes under one common laser offset.

    Returns (fsr, offset).  The line separation must be an integer number
    of (adjusted) FSRs; candidate divisors near the nominal FSR are
    enumerated exactly and the one closest to nominal wins.
    """
    if t1 == t2:
        raise ValueError("transitions must differ")
    s1 = t1[0].energy - t1[1].energy
    s2 = t2[0].energy - t2[1].energy
    gap = abs(s1 - s2)
    nominal = cavity.fsr
    if gap < 1e-9 * nominal or abs(gap / nominal - round(gap / nominal)) < 1e-12:
        # already commensurate (or identical shift): nominal FSR works
        return nominal, detuning_for(t1, cavity, laser)
    k_lo = math.ceil(gap / (nominal * (1.0 + max_fsr_change)))
    k_hi = math.floor(gap / (nominal * (1.0 - max_fsr_change)))
    best = None
    for k in range(max(1, k_lo), k_hi + 1):
        fsr = gap / k
        if abs(fsr - nominal) > max_fsr_change * nominal:
            continue
        cand_cavity = cavity.with_fsr(fsr)
        offset = detuning_for(t1, cand_cavity, laser)
        shifted = laser.with_offset(offset)
        resid = _comb_residual(shifted.omega + s2, fsr)
        if abs(resid) <= max(tolerance, 1e-6):
            if best is None or abs(fsr - nominal) < abs(best[0] - nominal):
                best = (fsr, offset)
    if best is None:
        raise NoSolutionInRange(
            f"no FSR within +-{max_fsr_change:.1%} places both lines on the comb"
        )
    return best


def _comb_residual(frequency: float, fsr: float) -> float:
    folded = frequency % fsr
    return folded if folded <= fsr / 2.0 else folded - fsr


def stokes_collisions(spectrum: ReducedSpectrum, cavity: CavitySpec,
                      margin: float = 5.0) -> list[SpectralLine]:
    """Stokes lines sitting within margin*kappa of a comb mode; these
    would be pumped along with the intended anti-Stokes lines."""
    hits = []
    for line in spectrum.stokes():
        resid = _comb_residual(line.folded_offset, cavity.fsr)
        if abs(resid) < margin * cavity.kappa:
            hits.append(line)
    return hits


def export_spectrum(spectrum: ReducedSpectrum) -> str:
    """Plot-ready delimited text of the folded spectrum."""
    out = ["# reduced Raman spectrum folded into one FSR"]
    out.append(f"# fsr_hz: {spectrum.fsr / (2 * math.pi):.9e}")
    out.append(f"# laser_offset_hz: {spectrum.laser_offset / (2 * math.pi):.9e}")
    out.append("# folded_offset_hz\tkind\ttransition\tshift_hz")
    for l in spectrum.lines:
        out.append(
            f"{l.folded_offset / (2 * math.pi):.9e}\t{l.kind}\t{l.label}\t"
            f"{l.absolute_shift / (2 * math.pi):.9e}"
        )
    return "\n".join(out) + "\n"
