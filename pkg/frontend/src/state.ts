import type { StateSummary, StepRecord } from "./types.js";

export interface HistoryPoint {
  time_s: number;
  mean_j: number;
  mean_v: number;
}

// View-level session state: the latest API summary plus the <J>/<v>
// series accumulated from it.  Series entries are exactly the values the
// API reported; undo truncates to match the server's step count.
export class ViewState {
  summary: StateSummary | null = null;
  series: HistoryPoint[] = [];

  update(summary: StateSummary): void {
    this.summary = summary;
    const point: HistoryPoint = {
      time_s: summary.time_s,
      mean_j: summary.mean_j,
      mean_v: summary.mean_v,
    };
    // one series point per applied step (plus the initial state)
    const expected = summary.steps.length + 1;
    if (this.series.length >= expected) {
      this.series = this.series.slice(0, expected - 1);
    }
    this.series.push(point);
  }

  get steps(): StepRecord[] {
    return this.summary?.steps ?? [];
  }

  get undoDepth(): number {
    return this.summary?.undo_depth ?? 0;
  }
}

// CLI-format schedule text from the session's step history; replayable
// with `cavraman run --schedule <file>`.
export function scheduleText(steps: StepRecord[]): string {
  const lines = ["# exported from sequence studio"];
  for (const s of steps) {
    if (s.transition) {
      lines.push(`step ${s.transition} ${s.duration_ms}`);
    } else if (s.offset_hz !== null) {
      lines.push(`step ${s.offset_hz.toExponential(9)} ${s.duration_ms}`);
    }
  }
  return lines.join("\n") + "\n";
}
