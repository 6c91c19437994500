import { beforeEach, describe, expect, it } from "vitest";

import type { SessionApi } from "../src/api.js";
import { App } from "../src/app.js";
import type {
  SpectrumResponse,
  StateSummary,
  StepRecord,
  StepRequest,
} from "../src/types.js";

import fresh from "../fixtures/session_fresh.json";
import spectrumFixture from "../fixtures/spectrum.json";

const freshState = fresh as unknown as StateSummary;
const spectrum = spectrumFixture as unknown as SpectrumResponse;

const PAGE = `
  <span id="mean-j"></span><span id="mean-v"></span>
  <span id="sim-time"></span><span id="status"></span>
  <div id="populations"></div>
  <div id="spectrum"></div>
  <div id="step-form">
    <input id="step-transition" /><input id="step-duration" />
    <button id="step-submit"></button>
    <button id="undo-button"></button>
    <button id="export-button"></button>
  </div>
  <div id="history"></div>
  <ol id="step-history"></ol>
`;

// A mocked server that replays recorded state but never computes rates:
// the UI must work with exactly what the API returns.
class FakeApi implements SessionApi {
  steps: StepRecord[] = [];

  private summary(): StateSummary {
    return {
      ...freshState,
      steps: [...this.steps],
      undo_depth: this.steps.length,
      time_s: this.steps.reduce((t, s) => t + s.duration_ms, 0) / 1e3,
    };
  }

  async createSession(): Promise<StateSummary> {
    return this.summary();
  }

  async getState(): Promise<StateSummary> {
    return this.summary();
  }

  async applyStep(_id: string, step: StepRequest): Promise<StateSummary> {
    this.steps.push({
      transition: step.transition ?? null,
      offset_hz: step.offset_hz ?? null,
      duration_ms: step.duration_ms,
    });
    return this.summary();
  }

  async undo(): Promise<StateSummary> {
    this.steps.pop();
    return this.summary();
  }

  async getSpectrum(): Promise<SpectrumResponse> {
    return spectrum;
  }

  async exportTrajectory(): Promise<string> {
    return "# population trajectory\n";
  }
}

describe("app wiring", () => {
  let api: FakeApi;
  let app: App;

  beforeEach(async () => {
    document.body.innerHTML = PAGE;
    api = new FakeApi();
    app = new App(api, document);
    await app.start();
  });

  it("renders the fixture populations and readouts on start", () => {
    expect(document.querySelectorAll("#populations .bar").length).toBe(9);
    expect(document.getElementById("mean-j")!.textContent).toBe(
      freshState.mean_j.toFixed(3),
    );
    const exportButton = document.getElementById(
      "export-button",
    ) as HTMLButtonElement;
    expect(exportButton.disabled).toBe(true);
  });

  it("clicking a spectrum line prefills the form with the default duration", () => {
    const line = [...document.querySelectorAll<SVGLineElement>(
      ".raman-line.kind-anti-stokes",
    )].find((el) => el.dataset.label === "v0-0:J3-1")!;
    line.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const transition = document.getElementById(
      "step-transition",
    ) as HTMLInputElement;
    const duration = document.getElementById(
      "step-duration",
    ) as HTMLInputElement;
    expect(transition.value).toBe("v0-0:J3-1");
    expect(duration.value).toBe("60");
  });

  it("submit appends to the history; undo truncates it by one", async () => {
    await app.applyStep("v0-0:J2-0", 60);
    await app.applyStep("v0-0:J4-2", 60);
    expect(document.querySelectorAll("#step-history li").length).toBe(2);
    expect(
      (document.getElementById("export-button") as HTMLButtonElement).disabled,
    ).toBe(false);
    await app.undo();
    expect(document.querySelectorAll("#step-history li").length).toBe(1);
    expect(api.steps.length).toBe(1);
  });
});
