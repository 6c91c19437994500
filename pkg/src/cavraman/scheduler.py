"""Laser-frequency schedules: construction, execution, optimization.

A schedule is an ordered list of steps, each holding the laser on one
target (a transition brought onto cavity resonance, or an explicit
offset) for a fixed duration.  Schedules run through the dynamics
engine with one exact propagation per step.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .constants import hz_to_rads, rads_to_hz
from .dynamics import PopulationTrajectory, Propagator
from .molecule import RoVibBasis, RoVibState, mean_j, mean_v
from .rates import RateModel
from .spectrum import ForbiddenTransition, detuning_for


class NothingToCool(ValueError):
    pass


_LABEL_RE = re.compile(r"^v(\d+)-(\d+):J(\d+)-(\d+)$")


def transition_label(f: RoVibState, t: RoVibState) -> str:
    return f"v{f.v}-{t.v}:J{f.j}-{t.j}"


def parse_transition_label(label: str, basis: RoVibBasis):
    m = _LABEL_RE.match(label)
    if not m:
        raise ValueError(f"bad transition label {label!r}")
    v0, v1, j0, j1 = (int(g) for g in m.groups())
    try:
        return basis.state(v0, j0), basis.state(v1, j1)
    except KeyError as exc:
        raise ValueError(f"transition {label!r} outside the basis") from exc


@dataclass(frozen=True)
class ScheduleStep:
    """One laser setting: either a transition label or an explicit offset
    (rad/s).  duration in seconds; optional FSR override in rad/s."""

    target: str | float
    duration: float
    fsr_override: float | None = None

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("step duration must be > 0")

    @property
    def is_transition(self) -> bool:
        return isinstance(self.target, str)


@dataclass(frozen=True)
class CoolingSchedule:
    steps: tuple[ScheduleStep, ...]
    repeat_count: int = 1
    label: str = ""

    def __post_init__(self):
        if not self.steps:
            raise ValueError("schedule has no steps")
        if self.repeat_count < 1:
            raise ValueError("repeat_count must be >= 1")

    @property
    def total_duration(self) -> float:
        return self.repeat_count * sum(s.duration for s in self.steps)

    def to_text(self) -> str:
        out = [f"# schedule: {self.label}" if self.label else "# schedule"]
        if self.repeat_count != 1:
            out.append(f"repeat {self.repeat_count}")
        for s in self.steps:
            cols = []
            if s.is_transition:
                cols.append(str(s.target))
            else:
                cols.append(f"{rads_to_hz(float(s.target)):.9e}")
            cols.append(f"{s.duration * 1e3:.9g}")
            if s.fsr_override is not None:
                cols.append(f"{rads_to_hz(s.fsr_override):.9e}")
            out.append("step " + " ".join(cols))
        return "\n".join(out) + "\n"


def parse_schedule(text: str, label: str = "") -> CoolingSchedule:
    """Line format: 'step <transition-label|offset_Hz> <duration_ms>
    [fsr_override_Hz]' plus an optional 'repeat <n>' line."""
    steps = []
    repeat = 1
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "repeat":
            repeat = int(parts[1])
            continue
        if parts[0] != "step":
            raise ValueError(f"bad schedule line {raw!r}")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad schedule line {raw!r}")
        target: str | float
        try:
            target = hz_to_rads(float(parts[1]))
        except ValueError:
            target = parts[1]
        duration = float(parts[2]) * 1e-3
        fsr = hz_to_rads(float(parts[3])) if len(parts) == 4 else None
        steps.append(ScheduleStep(target=target, duration=duration, fsr_override=fsr))
    return CoolingSchedule(steps=tuple(steps), repeat_count=repeat, label=label)


def load_schedule(path: str) -> CoolingSchedule:
    with open(path) as fh:
        return parse_schedule(fh.read(), label=path)


def _validate_anti_stokes(basis: RoVibBasis, step: ScheduleStep):
    if not step.is_transition:
        return
    f, t = parse_transition_label(step.target, basis)
    if f.energy - t.energy < 0:
        raise ValueError(
            f"step target {step.target} is a Stokes transition; schedules may "
            f"only drive anti-Stokes lines or explicit offsets"
        )


# ---------------------------------------------------------------------------
# Construction


def anti_stokes_targets(basis: RoVibBasis) -> list[tuple[RoVibState, RoVibState]]:
    """All energy-lowering transitions with nonzero rotational strength."""
    from .polarizability import placzek_teller

    out = []
    for f in basis.states:
        for t in basis.states:
            if f.ladder != t.ladder or abs(f.j - t.j) not in (0, 2):
                continue
            if f.energy <= t.energy:
                continue
            if placzek_teller(f.j, t.j) == 0.0:
                continue
            out.append((f, t))
    return out


def top_down(basis: RoVibBasis, populations: np.ndarray, threshold: float = 1e-3,
             step_duration: float = 60e-3, repeat_count: int = 6) -> CoolingSchedule:
    """Empty occupied levels from the highest (v, J) downward.

    Rotationally excited levels drive J -> J-2 within their vibrational
    state; v-excited levels with J <= 1 transfer down one vibrational
    quantum (J 1->1, or J 0->2 since the J 0->0 line carries no strength).
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    occupied = [
        (s, p) for s, p in zip(basis.states, populations)
        if p > threshold and not (s.v == 0 and s.j <= 1)
    ]
    if not occupied:
        raise NothingToCool("all population already in the ladder ground states")
    occupied.sort(key=lambda sp: (sp[0].v, sp[0].j), reverse=True)
    steps = []
    seen = set()
    for s, _ in occupied:
        if s.j >= 2:
            tgt = transition_label(s, basis.state(s.v, s.j - 2))
        elif s.j == 1:
            tgt = transition_label(s, basis.state(s.v - 1, 1))
        else:
            tgt = transition_label(s, basis.state(s.v - 1, 2))
        if tgt in seen:
            continue
        seen.add(tgt)
        steps.append(ScheduleStep(target=tgt, duration=step_duration))
    return CoolingSchedule(steps=tuple(steps), repeat_count=repeat_count,
                           label="top-down")


# ---------------------------------------------------------------------------
# Execution


def run(schedule: CoolingSchedule, model: RateModel, p0: np.ndarray,
        snapshots_per_step: int = 1) -> PopulationTrajectory:
    """Propagate the populations through the schedule.

    Each step re-tunes the laser (rebuilding the rate table), then
    propagates exactly for the step duration; snapshots are taken at step
    boundaries plus optional sub-samples.
    """
    basis = model.basis
    for step in schedule.steps:
        _validate_anti_stokes(basis, step)
    traj = PopulationTrajectory(basis=basis)
    p = np.array(p0, dtype=float)
    t = 0.0
    traj.append(t, p)
    for _ in range(schedule.repeat_count):
        for step in schedule.steps:
            if step.is_transition:
                f, tt = parse_transition_label(step.target, basis)
                cavity = model.cavity if step.fsr_override is None else \
                    model.cavity.with_fsr(step.fsr_override)
                offset = detuning_for((f, tt), cavity, model.laser)
            else:
                offset = float(step.target)
            table = model.build(offset=offset, fsr=step.fsr_override)
            dt = step.duration / snapshots_per_step
            prop = Propagator(table.generator(), dt)
            for _ in range(snapshots_per_step):
                p = prop.step(p)
                t += dt
                traj.append(t, p)
    return traj


# ---------------------------------------------------------------------------
# Optimization


def _objective(basis: RoVibBasis, p: np.ndarray, v_weight: float) -> float:
    return mean_j(basis, p) + v_weight * mean_v(basis, p)


def _simulate_step(model: RateModel, p: np.ndarray, f: RoVibState, t: RoVibState,
                   duration: float) -> np.ndarray:
    offset = detuning_for((f, t), model.cavity, model.laser)
    table = model.build(offset=offset)
    return Propagator(table.generator(), duration).step(p)


def greedy_optimize(model: RateModel, p0: np.ndarray, horizon_steps: int,
                    step_duration: float, v_weight: float = 3.0,
                    rotation_first: bool = False) -> CoolingSchedule:
    """At each step pick the transition that most lowers <J> + w <v>.

    w must exceed 2: a vibrational quantum is shed through Delta J = +2
    lines (the J 0->0 line carries no strength), so at w = 2 the escape
    move is objective-neutral and greedy stalls.

    Ties break toward the lower destination J, then lexicographically.
    rotation_first restricts candidates to pure rotational lines while
    any rotationally hot population remains, mirroring the strategy of
    cooling rotations before transferring vibrational quanta.
    """
    if horizon_steps < 1:
        raise ValueError("horizon_steps must be >= 1")
    basis = model.basis
    candidates = anti_stokes_targets(basis)
    if not candidates:
        raise NothingToCool("no anti-Stokes transition available")
    p = np.array(p0, dtype=float)
    steps = []
    for _ in range(horizon_steps):
        pool = candidates
        if rotation_first:
            j_hot = sum(pp for s, pp in zip(basis.states, p) if s.j >= 2) > 0.02
            if j_hot:
                rot = [(f, t) for f, t in candidates if f.v == t.v]
                pool = rot or candidates
        best = None
        for f, t in pool:
            trial = _simulate_step(model, p, f, t, step_duration)
            key = (_objective(basis, trial, v_weight), t.j,
                   transition_label(f, t))
            if best is None or key < best[0]:
                best = (key, (f, t), trial)
        _, (f, t), p = best
        steps.append(ScheduleStep(target=transition_label(f, t),
                                  duration=step_duration))
    return CoolingSchedule(steps=tuple(steps), repeat_count=1, label="greedy")


@dataclass
class _Candidate:
    steps: list[ScheduleStep]
    fitness: float = np.inf


def evolutionary_optimize(model: RateModel, p0: np.ndarray, generations: int,
                          population_size: int, seed: int,
                          step_duration: float = 60e-3, horizon_steps: int = 12,
                          v_weight: float = 3.0) -> CoolingSchedule:
    """Evolve step lists minimizing the final <J> + w <v>.

    Deterministic for a fixed seed.  The initial population contains the
    top-down and greedy schedules, so elitism guarantees the result is
    never worse than either seed.
    """
    if population_size < 2:
        raise ValueError("population_size must be >= 2")
    rng = np.random.default_rng(seed)
    basis = model.basis
    labels = sorted(transition_label(f, t) for f, t in anti_stokes_targets(basis))
    durations = [step_duration / 2, step_duration, 2 * step_duration]

    def random_steps() -> list[ScheduleStep]:
        n = int(rng.integers(max(1, horizon_steps // 2), horizon_steps + 1))
        return [
            ScheduleStep(target=labels[int(rng.integers(len(labels)))],
                         duration=durations[int(rng.integers(len(durations)))])
            for _ in range(n)
        ]

    def evaluate(steps: list[ScheduleStep]) -> float:
        p = np.array(p0, dtype=float)
        for st in steps:
            f, t = parse_transition_label(st.target, basis)
            p = _simulate_step(model, p, f, t, st.duration)
        return _objective(basis, p, v_weight)

    pop: list[_Candidate] = []
    try:
        td = top_down(basis, p0, step_duration=step_duration, repeat_count=1)
        pop.append(_Candidate(list(td.steps)))
    except NothingToCool:
        pass
    greedy = greedy_optimize(model, p0, horizon_steps, step_duration, v_weight)
    pop.append(_Candidate(list(greedy.steps)))
    while len(pop) < population_size:
        pop.append(_Candidate(random_steps()))
    for cand in pop:
        cand.fitness = evaluate(cand.steps)
    pop.sort(key=lambda c: c.fitness)

    for _ in range(generations):
        children = [pop[0]]                      # elitism
        while len(children) < population_size:
            a, b = (pop[int(rng.integers(len(pop) // 2 + 1))] for _ in range(2))
            cut_a = int(rng.integers(1, len(a.steps) + 1))
            cut_b = int(rng.integers(0, len(b.steps) + 1))
            steps = list(a.steps[:cut_a]) + list(b.steps[cut_b:])
            steps = steps[: 2 * horizon_steps] or list(a.steps)
            op = rng.random()
            i = int(rng.integers(len(steps)))
            if op < 0.3 and len(steps) > 1:      # swap neighbours
                j = (i + 1) % len(steps)
                steps[i], steps[j] = steps[j], steps[i]
            elif op < 0.65:                      # replace the transition
                steps[i] = ScheduleStep(
                    target=labels[int(rng.integers(len(labels)))],
                    duration=steps[i].duration)
            else:                                # retime
                steps[i] = ScheduleStep(
                    target=steps[i].target,
                    duration=durations[int(rng.integers(len(durations)))])
            child = _Candidate(steps)
            child.fitness = evaluate(child.steps)
            children.append(child)
        pop = sorted(children, key=lambda c: c.fitness)

    best = pop[0]
    return CoolingSchedule(steps=tuple(best.steps), repeat_count=1,
                           label=f"evolutionary(seed={seed})")


def j_decrease_rate(traj: PopulationTrajectory) -> float:
    """Figure of merit: mean <J> decrease per second over the run."""
    j = traj.mean_j_series()
    t = traj.times
    if t[-1] <= t[0]:
        return 0.0
    return float((j[0] - j[-1]) / (t[-1] - t[0]))
