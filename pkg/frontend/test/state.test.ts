import { describe, expect, it } from "vitest";

import { ViewState, scheduleText } from "../src/state.js";
import type { StateSummary, StepRecord } from "../src/types.js";

import fresh from "../fixtures/session_fresh.json";
import converged from "../fixtures/session_converged.json";

const freshState = fresh as unknown as StateSummary;
const convergedState = converged as unknown as StateSummary;

function summaryWithSteps(
  base: StateSummary,
  steps: StepRecord[],
  timeS: number,
): StateSummary {
  return { ...base, steps, time_s: timeS, undo_depth: steps.length };
}

describe("view state", () => {
  it("accumulates one history point per applied step", () => {
    const view = new ViewState();
    view.update(freshState);
    expect(view.series.length).toBe(1);
    const step: StepRecord = {
      transition: "v0-0:J2-0",
      offset_hz: null,
      duration_ms: 60,
    };
    view.update(summaryWithSteps(freshState, [step], 0.06));
    view.update(summaryWithSteps(convergedState, [step, step], 0.12));
    expect(view.series.length).toBe(3);
    expect(view.series.at(-1)!.mean_j).toBe(convergedState.mean_j);
  });

  it("truncates the series on undo", () => {
    const view = new ViewState();
    view.update(freshState);
    const step: StepRecord = {
      transition: "v0-0:J2-0",
      offset_hz: null,
      duration_ms: 60,
    };
    view.update(summaryWithSteps(freshState, [step], 0.06));
    view.update(summaryWithSteps(freshState, [step, step], 0.12));
    expect(view.series.length).toBe(3);
    // undo reported by the server: back to one applied step
    view.update(summaryWithSteps(freshState, [step], 0.06));
    expect(view.series.length).toBe(2);
  });
});

describe("schedule export", () => {
  it("is disabled-equivalent for an empty history", () => {
    expect(scheduleText([]).trim().split("\n")).toHaveLength(1); // header only
  });

  it("emits one step line per applied step in CLI format", () => {
    const text = scheduleText(convergedState.steps);
    const lines = text.trim().split("\n").filter((l) => !l.startsWith("#"));
    expect(lines).toHaveLength(convergedState.steps.length);
    expect(lines[0]).toBe("step v0-0:J8-6 60");
    expect(lines.at(-1)).toBe("step v0-0:J2-0 60");
  });

  it("writes explicit offsets in Hz", () => {
    const text = scheduleText([
      { transition: null, offset_hz: -37500.0, duration_ms: 10 },
    ]);
    expect(text).toContain("step -3.750000000e+4 10");
  });
});
