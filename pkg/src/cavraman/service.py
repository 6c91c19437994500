"""Session-oriented HTTP/JSON API for interactive sequence design.

Each session owns a population vector evolving under operator-chosen
steps, with an undo stack (depth 64) restoring bit-identical prior
states.  All frequencies in the wire format are ordinary frequencies in
Hz, durations are milliseconds, populations are plain floats.  Requests
on one session are serialized; sessions are independent.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import ConfigError, Workspace, data_dir, load_config, parse_config
from .constants import hz_to_rads, rads_to_hz
from .dynamics import PopulationTrajectory, Propagator
from .molecule import mean_j, mean_v
from .scheduler import (ScheduleStep, anti_stokes_targets, parse_transition_label,
                        transition_label)
from .spectrum import detuning_for, export_spectrum, fold

UNDO_DEPTH = 64


class SessionConfig(BaseModel):
    config_file: str | None = None
    config_text: str | None = None
    temperature_k: float | None = None
    v_max: int | None = None
    j_max: int | None = None
    initial_state: str | None = None


class StepRequest(BaseModel):
    transition: str | None = None
    offset_hz: float | None = None
    duration_ms: float


@dataclass
class _Frame:
    time: float
    populations: np.ndarray
    history: list
    traj_times: list
    traj_pops: list


@dataclass
class Session:
    id: str
    workspace: Workspace
    populations: np.ndarray
    time: float = 0.0
    history: list = field(default_factory=list)
    traj: PopulationTrajectory = None
    undo_stack: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def push_undo(self):
        frame = _Frame(
            time=self.time,
            populations=self.populations.copy(),
            history=list(self.history),
            traj_times=list(self.traj.times),
            traj_pops=[p.copy() for p in self.traj.populations],
        )
        self.undo_stack.append(frame)
        if len(self.undo_stack) > UNDO_DEPTH:
            self.undo_stack.pop(0)

    def pop_undo(self) -> bool:
        if not self.undo_stack:
            return False
        frame = self.undo_stack.pop()
        self.time = frame.time
        self.populations = frame.populations
        self.history = frame.history
        self.traj.times = frame.traj_times
        self.traj.populations = frame.traj_pops
        return True


def state_summary(s: Session) -> dict:
    ws = s.workspace
    basis = ws.basis
    pops = [
        {"v": st.v, "j": st.j, "ladder": st.ladder, "label": st.label,
         "p": float(p)}
        for st, p in zip(basis.states, s.populations)
    ]
    transitions = []
    for f, t in anti_stokes_targets(basis):
        offset = detuning_for((f, t), ws.cavity, ws.laser)
        table = ws.model.build(offset=offset)
        i, k = basis.index[(f.v, f.j)], basis.index[(t.v, t.j)]
        transitions.append({
            "label": transition_label(f, t),
            "from": f.label, "to": t.label,
            "shift_hz": rads_to_hz(f.energy - t.energy),
            "offset_hz": rads_to_hz(offset),
            "gamma_cavity": float(table.gamma_cavity()[i, k]),
            "gamma_spont": float(table.gamma_spont[i, k]),
        })
    return {
        "id": s.id,
        "time_s": s.time,
        "mean_j": mean_j(basis, s.populations),
        "mean_v": mean_v(basis, s.populations),
        "populations": pops,
        "transitions": transitions,
        "steps": list(s.history),
        "undo_depth": len(s.undo_stack),
    }


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="cavraman control service")
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request, exc):
        # report the offending field path with a plain 400
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return s

    @app.post("/sessions")
    def create_session(body: SessionConfig):
        try:
            if body.config_text:
                cfg = parse_config(body.config_text, base=data_dir())
            else:
                name = body.config_file or "defaults-oh.cfg"
                path = data_dir() / name
                if not path.exists():
                    path = name
                cfg = load_config(path)
            if body.temperature_k is not None:
                cfg.temperature_k = body.temperature_k
            if body.v_max is not None:
                cfg.v_max = body.v_max
            if body.j_max is not None:
                cfg.j_max = body.j_max
            if body.initial_state is not None:
                cfg.initial_state = body.initial_state
            from .config import build_workspace
            ws = build_workspace(cfg)
            p0 = ws.initial_populations()
        except (ConfigError, FileNotFoundError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        sid = f"s{next(counter)}"
        s = Session(id=sid, workspace=ws, populations=p0,
                    traj=PopulationTrajectory(basis=ws.basis))
        s.traj.append(0.0, p0)
        sessions[sid] = s
        return state_summary(s)

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        s = get_session(session_id)
        with s.lock:
            return state_summary(s)

    @app.post("/sessions/{session_id}/step")
    def apply_step(session_id: str, body: StepRequest):
        s = get_session(session_id)
        ws = s.workspace
        if body.duration_ms is None or body.duration_ms <= 0:
            raise HTTPException(status_code=400, detail="duration must be > 0")
        if (body.transition is None) == (body.offset_hz is None):
            raise HTTPException(
                status_code=400, detail="give exactly one of transition/offset_hz")
        with s.lock:
            if body.transition is not None:
                try:
                    f, t = parse_transition_label(body.transition, ws.basis)
                except ValueError as exc:
                    raise HTTPException(status_code=409, detail=str(exc)) from exc
                if f.energy <= t.energy:
                    raise HTTPException(
                        status_code=409,
                        detail=f"{body.transition} is not an anti-Stokes line")
                if ws.strengths.alpha_sq(f, t) == 0.0:
                    raise HTTPException(
                        status_code=409,
                        detail=f"{body.transition} carries no strength")
                offset = detuning_for((f, t), ws.cavity, ws.laser)
            else:
                offset = hz_to_rads(body.offset_hz)
            s.push_undo()
            table = ws.model.build(offset=offset)
            dt = body.duration_ms * 1e-3
            s.populations = Propagator(table.generator(), dt).step(s.populations)
            s.time += dt
            s.traj.append(s.time, s.populations)
            s.history.append({
                "transition": body.transition,
                "offset_hz": body.offset_hz,
                "duration_ms": body.duration_ms,
            })
            return state_summary(s)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        s = get_session(session_id)
        with s.lock:
            if not s.pop_undo():
                raise HTTPException(status_code=409, detail="nothing to undo")
            return state_summary(s)

    @app.get("/sessions/{session_id}/spectrum")
    def get_spectrum(session_id: str):
        s = get_session(session_id)
        ws = s.workspace
        with s.lock:
            spec = fold(ws.basis, ws.cavity, ws.laser)
            return {
                "fsr_hz": rads_to_hz(spec.fsr),
                "laser_offset_hz": rads_to_hz(spec.laser_offset),
                "kappa_hz": rads_to_hz(ws.cavity.kappa),
                "lines": [
                    {
                        "label": l.label, "kind": l.kind,
                        "from": l.from_state.label, "to": l.to_state.label,
                        "folded_offset_hz": rads_to_hz(l.folded_offset),
                        "shift_hz": rads_to_hz(l.absolute_shift),
                    }
                    for l in spec.lines
                ],
            }

    @app.get("/sessions/{session_id}/rates")
    def get_rates(session_id: str):
        s = get_session(session_id)
        ws = s.workspace
        with s.lock:
            table = ws.model.build(offset=0.0)
            labels = [st.label for st in ws.basis.states]
            return {
                "labels": labels,
                "gamma_spont": table.gamma_spont.tolist(),
                "gamma_cavity_plus": table.gamma_cavity_plus.tolist(),
                "gamma_cavity_minus": table.gamma_cavity_minus.tolist(),
            }

    @app.get("/sessions/{session_id}/export", response_class=PlainTextResponse)
    def export(session_id: str):
        s = get_session(session_id)
        with s.lock:
            return s.traj.export()

    @app.get("/sessions/{session_id}/schedule", response_class=PlainTextResponse)
    def schedule(session_id: str):
        s = get_session(session_id)
        with s.lock:
            lines = ["# session step history (replayable schedule)"]
            for h in s.history:
                if h["transition"]:
                    lines.append(f"step {h['transition']} {h['duration_ms']:.9g}")
                else:
                    lines.append(f"step {h['offset_hz']:.9e} {h['duration_ms']:.9g}")
            return "\n".join(lines) + "\n"

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="studio")

    return app
