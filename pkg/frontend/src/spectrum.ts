import type { SpectrumLine, SpectrumResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

// Folded-spectrum lane: every Raman line at its offset within one FSR,
// cavity resonances at both edges.  Anti-Stokes lines are clickable and
// prefill the step form; Stokes and Rayleigh lines only show a tooltip.
export function renderSpectrum(
  container: HTMLElement,
  spectrum: SpectrumResponse,
  onPick: (line: SpectrumLine) => void,
): void {
  container.textContent = "";
  const width = 900;
  const height = 120;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "spectrum-lane");

  for (const xFrac of [0, 1]) {
    const mode = document.createElementNS(SVG_NS, "line");
    const x = 10 + xFrac * (width - 20);
    mode.setAttribute("x1", String(x));
    mode.setAttribute("x2", String(x));
    mode.setAttribute("y1", "5");
    mode.setAttribute("y2", String(height - 15));
    mode.setAttribute("class", "cavity-mode");
    svg.appendChild(mode);
  }

  for (const line of spectrum.lines) {
    const x = 10 + (line.folded_offset_hz / spectrum.fsr_hz) * (width - 20);
    const el = document.createElementNS(SVG_NS, "line");
    el.setAttribute("x1", String(x));
    el.setAttribute("x2", String(x));
    el.setAttribute("y1", line.kind === "anti-stokes" ? "15" : "40");
    el.setAttribute("y2", String(height - 15));
    el.setAttribute("class", `raman-line kind-${line.kind}`);
    el.dataset.label = line.label;
    el.dataset.kind = line.kind;
    const tip = document.createElementNS(SVG_NS, "title");
    if (line.kind === "anti-stokes") {
      tip.textContent = `${line.label} (click to queue)`;
      el.addEventListener("click", () => onPick(line));
    } else {
      tip.textContent = `${line.label}: ${line.kind} line, not a cooling target`;
    }
    el.appendChild(tip);
    svg.appendChild(el);
  }
  container.appendChild(svg);
}
