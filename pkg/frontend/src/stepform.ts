import type { SpectrumLine } from "./types.js";

export const DEFAULT_DURATION_MS = 60;

export interface PendingStep {
  transition: string;
  duration_ms: number;
}

// The pending-step form: picking a spectrum line prefills it; submission
// goes through the app's onSubmit (which round-trips the API).
export class StepForm {
  private labelEl: HTMLInputElement;
  private durationEl: HTMLInputElement;
  private submitEl: HTMLButtonElement;

  constructor(
    root: HTMLElement,
    onSubmit: (step: PendingStep) => void,
  ) {
    this.labelEl = root.querySelector<HTMLInputElement>("#step-transition")!;
    this.durationEl = root.querySelector<HTMLInputElement>("#step-duration")!;
    this.submitEl = root.querySelector<HTMLButtonElement>("#step-submit")!;
    this.submitEl.addEventListener("click", () => {
      const step = this.value();
      if (step) onSubmit(step);
    });
  }

  prefill(line: SpectrumLine): void {
    if (line.kind !== "anti-stokes") return;
    this.labelEl.value = line.label;
    if (!this.durationEl.value) {
      this.durationEl.value = String(DEFAULT_DURATION_MS);
    }
  }

  value(): PendingStep | null {
    const transition = this.labelEl.value.trim();
    const duration = Number(this.durationEl.value || DEFAULT_DURATION_MS);
    if (!transition || !(duration > 0)) return null;
    return { transition, duration_ms: duration };
  }
}
