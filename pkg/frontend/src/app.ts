import { ApiClient, ApiError, type SessionApi } from "./api.js";
import { renderHistory } from "./history.js";
import { renderPopulations } from "./populations.js";
import { renderSpectrum } from "./spectrum.js";
import { ViewState, scheduleText } from "./state.js";
import { StepForm } from "./stepform.js";
import type { SpectrumLine, StateSummary } from "./types.js";

// One active session per tab; every state change round-trips the API
// (no optimistic updates, no client-side physics).
export class App {
  private view = new ViewState();
  private sessionId: string | null = null;

  constructor(
    private api: SessionApi,
    private root: Document = document,
  ) {}

  async start(): Promise<void> {
    const form = new StepForm(this.el("step-form"), (step) => {
      void this.applyStep(step.transition, step.duration_ms);
    });
    this.el("undo-button").addEventListener("click", () => void this.undo());
    this.el("export-button").addEventListener("click", () => this.exportSchedule());
    this.stepFormRef = form;

    const summary = await this.api.createSession({
      config_file: "defaults-oh.cfg",
      j_max: 8,
    });
    this.sessionId = summary.id;
    this.apply(summary);
    await this.refreshSpectrum();
  }

  private stepFormRef: StepForm | null = null;

  private el(id: string): HTMLElement {
    const node = this.root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  }

  private apply(summary: StateSummary): void {
    this.view.update(summary);
    renderPopulations(this.el("populations"), summary.populations);
    renderHistory(this.el("history"), this.view.series);
    this.el("mean-j").textContent = summary.mean_j.toFixed(3);
    this.el("mean-v").textContent = summary.mean_v.toFixed(3);
    this.el("sim-time").textContent = `${(summary.time_s * 1e3).toFixed(0)} ms`;
    const exportButton = this.el("export-button") as HTMLButtonElement;
    exportButton.disabled = summary.steps.length === 0;
    const undoButton = this.el("undo-button") as HTMLButtonElement;
    undoButton.disabled = summary.undo_depth === 0;
    this.renderSteps(summary);
  }

  private renderSteps(summary: StateSummary): void {
    const list = this.el("step-history");
    list.textContent = "";
    for (const step of summary.steps) {
      const item = document.createElement("li");
      item.textContent = step.transition
        ? `${step.transition} for ${step.duration_ms} ms`
        : `offset ${step.offset_hz} Hz for ${step.duration_ms} ms`;
      list.appendChild(item);
    }
  }

  private async refreshSpectrum(): Promise<void> {
    if (!this.sessionId) return;
    const spectrum = await this.api.getSpectrum(this.sessionId);
    renderSpectrum(this.el("spectrum"), spectrum, (line: SpectrumLine) => {
      this.stepFormRef?.prefill(line);
    });
  }

  async applyStep(transition: string, durationMs: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const summary = await this.api.applyStep(this.sessionId, {
        transition,
        duration_ms: durationMs,
      });
      this.apply(summary);
      this.status("");
    } catch (err) {
      this.status(err instanceof ApiError ? err.message : String(err));
    }
  }

  async undo(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.apply(await this.api.undo(this.sessionId));
    } catch (err) {
      this.status(err instanceof ApiError ? err.message : String(err));
    }
  }

  exportSchedule(): void {
    const steps = this.view.steps;
    if (steps.length === 0) return;
    const blob = new Blob([scheduleText(steps)], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "sequence.seq";
    link.click();
    URL.revokeObjectURL(link.href);
  }

  private status(text: string): void {
    this.el("status").textContent = text;
  }
}

if (typeof window !== "undefined" && document.getElementById("populations")) {
  const app = new App(new ApiClient(""));
  void app.start().catch((err) => {
    const status = document.getElementById("status");
    if (status) status.textContent = `failed to start: ${err}`;
  });
}
