#!/usr/bin/env python3
"""Semiclassical Doppler pre-cooling of the external motion.

Prints the closed-form asymptotics, then runs the momentum-resolved
stage.  Two regimes are shown:

* a 1 MHz half-linewidth cavity (recoil frequency ~ 0.08 kappa), where
  the ensemble converges to the Doppler scale, and
* the 75 kHz production cavity, where one photon recoil jumps across the
  velocity-selective resonance (recoil frequency ~ 1.1 kappa) and the
  distribution core heats instead: the closed-form microkelvin limit is
  out of the semiclassical model's reach at these parameters.
"""

from pathlib import Path

from cavraman.config import data_dir, load_config, build_workspace
from cavraman.constants import KB_J_PER_K, HBAR_JS
from cavraman.dynamics import doppler_limit, run_translational_stage

OUT = Path("out/translational")


def stage(kappa_hz, t_init, duration):
    cfg = load_config(data_dir() / "defaults-oh.cfg")
    cfg.j_max = 2
    cfg.kappa_hz = kappa_hz
    ws = build_workspace(cfg)
    p0 = ws.initial_populations()
    times, energies, _ = run_translational_stage(ws.model, t_init, duration,
                                                 populations=p0)
    return ws, times, energies


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    kappa = 2 * 3.141592653589793 * 75e3
    res = doppler_limit(kappa, -kappa)
    print(f"closed form, production cavity: E_min/k_B = "
          f"{res.e_kin_inf / KB_J_PER_K * 1e6:.2f} uK at delta = -kappa")

    for kappa_hz, label in ((1e6, "semiclassical (1 MHz)"),
                            (75e3, "recoil-dominated (75 kHz)")):
        ws, times, energies = stage(kappa_hz, 2e-4, 0.4)
        rows = ["# t_s\tEkin_J\tEkin_over_kB_K"]
        rows += [f"{t:.6e}\t{e:.6e}\t{e / KB_J_PER_K:.6e}"
                 for t, e in zip(times, energies)]
        name = f"ekin_kappa_{int(kappa_hz/1e3)}kHz.tsv"
        (OUT / name).write_text("\n".join(rows) + "\n")
        limit = HBAR_JS * ws.cavity.kappa / 2 / KB_J_PER_K
        print(f"{label}: E/k_B {energies[0]/KB_J_PER_K*1e6:.1f} -> "
              f"{energies[-1]/KB_J_PER_K*1e6:.1f} uK over {times[-1]:.2f} s "
              f"(hbar kappa/2 k_B = {limit*1e6:.1f} uK)")


if __name__ == "__main__":
    main()
