import type { HistoryPoint } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

// <J>(t) and <v>(t) series as simple SVG polylines; every point is an
// API-reported value.
export function renderHistory(container: HTMLElement, series: HistoryPoint[]): void {
  container.textContent = "";
  const width = 900;
  const height = 160;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "history-chart");
  if (series.length === 0) {
    container.appendChild(svg);
    return;
  }
  const tMax = Math.max(series[series.length - 1]!.time_s, 1e-6);
  const yMax = Math.max(...series.map((p) => Math.max(p.mean_j, p.mean_v)), 0.5);

  const toPoints = (pick: (p: HistoryPoint) => number): string =>
    series
      .map((p) => {
        const x = 10 + (p.time_s / tMax) * (width - 20);
        const y = height - 15 - (pick(p) / yMax) * (height - 30);
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");

  for (const [cls, pick] of [
    ["series-j", (p: HistoryPoint) => p.mean_j],
    ["series-v", (p: HistoryPoint) => p.mean_v],
  ] as const) {
    const poly = document.createElementNS(SVG_NS, "polyline");
    poly.setAttribute("points", toPoints(pick));
    poly.setAttribute("class", cls);
    poly.setAttribute("fill", "none");
    svg.appendChild(poly);
  }
  container.appendChild(svg);
}
