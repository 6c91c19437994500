import type { PopulationEntry } from "./types.js";

// Population bar chart: one bar per (v, J) state, grouped by v, colored
// by ladder parity.  Bar heights and labels come verbatim from the API.
export function renderPopulations(
  container: HTMLElement,
  populations: PopulationEntry[],
): void {
  container.textContent = "";
  if (populations.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no session";
    container.appendChild(empty);
    return;
  }
  const max = Math.max(...populations.map((p) => p.p), 1e-12);
  const groups = new Map<number, PopulationEntry[]>();
  for (const entry of populations) {
    const group = groups.get(entry.v) ?? [];
    group.push(entry);
    groups.set(entry.v, group);
  }
  for (const [v, entries] of [...groups.entries()].sort((a, b) => a[0] - b[0])) {
    const groupEl = document.createElement("div");
    groupEl.className = "vib-group";
    const title = document.createElement("h3");
    title.textContent = `v = ${v}`;
    groupEl.appendChild(title);
    const row = document.createElement("div");
    row.className = "bar-row";
    for (const entry of entries) {
      const cell = document.createElement("div");
      cell.className = "bar-cell";
      const bar = document.createElement("div");
      bar.className = `bar ladder-${entry.ladder}`;
      bar.dataset.label = entry.label;
      bar.dataset.p = String(entry.p);
      bar.style.height = `${Math.max((entry.p / max) * 100, 0.5)}%`;
      bar.title = `${entry.label}: ${entry.p.toPrecision(4)}`;
      const tick = document.createElement("span");
      tick.className = "bar-tick";
      tick.textContent = `J${entry.j}`;
      cell.appendChild(bar);
      cell.appendChild(tick);
      row.appendChild(cell);
    }
    groupEl.appendChild(row);
    container.appendChild(groupEl);
  }
}
