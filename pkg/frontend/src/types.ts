// Wire types mirroring the control-service JSON.  All frequencies are
// ordinary frequencies in Hz, durations in milliseconds.

export interface PopulationEntry {
  v: number;
  j: number;
  ladder: "even" | "odd";
  label: string;
  p: number;
}

export interface TransitionEntry {
  label: string;
  from: string;
  to: string;
  shift_hz: number;
  offset_hz: number;
  gamma_cavity: number;
  gamma_spont: number;
}

export interface StepRecord {
  transition: string | null;
  offset_hz: number | null;
  duration_ms: number;
}

export interface StateSummary {
  id: string;
  time_s: number;
  mean_j: number;
  mean_v: number;
  populations: PopulationEntry[];
  transitions: TransitionEntry[];
  steps: StepRecord[];
  undo_depth: number;
}

export interface SpectrumLine {
  label: string;
  kind: "stokes" | "anti-stokes" | "rayleigh";
  from: string;
  to: string;
  folded_offset_hz: number;
  shift_hz: number;
}

export interface SpectrumResponse {
  fsr_hz: number;
  laser_offset_hz: number;
  kappa_hz: number;
  lines: SpectrumLine[];
}

export interface SessionRequest {
  config_file?: string;
  config_text?: string;
  temperature_k?: number;
  v_max?: number;
  j_max?: number;
  initial_state?: string;
}

export interface StepRequest {
  transition?: string;
  offset_hz?: number;
  duration_ms: number;
}
