import type {
  SessionRequest,
  SpectrumResponse,
  StateSummary,
  StepRequest,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      detail = JSON.stringify(body.detail ?? body);
    } catch {
      // keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

export interface SessionApi {
  createSession(req: SessionRequest): Promise<StateSummary>;
  getState(id: string): Promise<StateSummary>;
  applyStep(id: string, step: StepRequest): Promise<StateSummary>;
  undo(id: string): Promise<StateSummary>;
  getSpectrum(id: string): Promise<SpectrumResponse>;
  exportTrajectory(id: string): Promise<string>;
}

// Every number shown in the UI comes from these calls: the client holds
// no physics of its own.
export class ApiClient implements SessionApi {
  constructor(private base: string = "") {}

  createSession(req: SessionRequest): Promise<StateSummary> {
    return post(`${this.base}/sessions`, req);
  }

  getState(id: string): Promise<StateSummary> {
    return request(`${this.base}/sessions/${id}`);
  }

  applyStep(id: string, step: StepRequest): Promise<StateSummary> {
    return post(`${this.base}/sessions/${id}/step`, step);
  }

  undo(id: string): Promise<StateSummary> {
    return post(`${this.base}/sessions/${id}/undo`, {});
  }

  getSpectrum(id: string): Promise<SpectrumResponse> {
    return request(`${this.base}/sessions/${id}/spectrum`);
  }

  async exportTrajectory(id: string): Promise<string> {
    const res = await fetch(`${this.base}/sessions/${id}/export`);
    if (!res.ok) throw new ApiError(res.status, res.statusText);
    return res.text();
  }
}
