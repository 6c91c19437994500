#!/usr/bin/env python3
"""Export the line-strength factors of the seven relevant OH Raman lines
and the reduced (FSR-folded) spectrum, plus the fine-tuned FSR that puts
the J 3-1 and J 2-0 lines on two comb modes simultaneously."""

from pathlib import Path

from cavraman.config import data_dir, load_config, build_workspace
from cavraman.constants import rads_to_hz
from cavraman.polarizability import placzek_teller
from cavraman.spectrum import export_spectrum, fold, tune_fsr_for_pair

OUT = Path("out/spectrum")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    cfg = load_config(data_dir() / "defaults-oh.cfg")
    cfg.j_max = 8
    ws = build_workspace(cfg)

    rows = ["# line-strength factors of the Delta J = -2 anti-Stokes lines",
            "# n\ttransition\tS"]
    for n, j in enumerate(range(2, 9), start=2):
        rows.append(f"{n}\tJ{j}->{j-2}\t{placzek_teller(j, j - 2):.6f}")
    (OUT / "line_strengths.tsv").write_text("\n".join(rows) + "\n")

    spec = fold(ws.basis, ws.cavity, ws.laser)
    (OUT / "reduced_spectrum.tsv").write_text(export_spectrum(spec))
    print(f"{len(spec.anti_stokes())} anti-Stokes lines folded into one FSR")

    b = ws.basis
    fsr, offset = tune_fsr_for_pair((b.state(0, 3), b.state(0, 1)),
                                    (b.state(0, 2), b.state(0, 0)),
                                    b, ws.cavity, ws.laser,
                                    tolerance=ws.cavity.kappa / 10)
    print(f"dual-line FSR: {rads_to_hz(fsr) / 1e9:.6f} GHz "
          f"({(fsr - ws.cavity.fsr) / ws.cavity.fsr:+.3%} from nominal), "
          f"laser offset {rads_to_hz(offset) / 1e6:.1f} MHz")


if __name__ == "__main__":
    main()
