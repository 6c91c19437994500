#!/usr/bin/env python3
"""NO rotational cooling at 300 K, and the NO-vs-OH speed comparison on
an identical nine-level initial distribution (NO's larger polarizability
against OH's at the same desk parameters)."""

from pathlib import Path

from cavraman.config import data_dir, load_config, build_workspace
from cavraman.molecule import boltzmann_populations, mean_j
from cavraman.scheduler import greedy_optimize, j_decrease_rate, load_schedule, run

OUT = Path("out/no_comparison")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    ws_no = build_workspace(load_config(data_dir() / "defaults-no.cfg"))
    p0 = ws_no.initial_populations()
    print(f"NO 300 K: <J> = {mean_j(ws_no.basis, p0):.2f}, "
          f"{(p0 > 1e-3).sum()} levels above 1e-3")
    sched = load_schedule(str(data_dir() / "schedules" / "no_optimized.seq"))
    traj = run(sched, ws_no.model, p0, snapshots_per_step=1)
    (OUT / "no_300k_trajectory.tsv").write_text(traj.export())
    frac = sum(pp for s, pp in zip(ws_no.basis.states, traj.final())
               if s.j <= 1)
    print(f"NO optimized: {frac:.4f} in J<=1 after {traj.times[-1]*1e3:.0f} ms; "
          f"rate {j_decrease_rate(traj):.2f} Hz")

    # identical 9-level start (a ~25 K NO sample) under each molecule's
    # per-step duration: 5 ms for NO vs 60 ms for OH
    def nine_level(cfg_name, dur):
        cfg = load_config(data_dir() / cfg_name)
        cfg.j_max = 8
        ws = build_workspace(cfg)
        p9 = boltzmann_populations(
            build_oh_reference().basis, 300.0)
        sched = greedy_optimize(ws.model, p9, horizon_steps=8,
                                step_duration=dur)
        return j_decrease_rate(run(sched, ws.model, p9))

    def build_oh_reference():
        cfg = load_config(data_dir() / "defaults-oh.cfg")
        cfg.j_max = 8
        return build_workspace(cfg)

    r_oh = nine_level("defaults-oh.cfg", 0.060)
    r_no = nine_level("defaults-no.cfg", 0.005)
    print(f"greedy <J> decrease: OH {r_oh:.2f} Hz, NO {r_no:.2f} Hz, "
          f"ratio {r_no / r_oh:.1f}")


if __name__ == "__main__":
    main()
