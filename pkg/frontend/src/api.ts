// Thin client for the control API. Every server state change the panel
// makes goes through this class and nowhere else.

import type { FieldProblem, Status } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ValidationFailure extends Error {
  constructor(public problems: FieldProblem[]) {
    super(problems.map((p) => `${p.field}: ${p.message}`).join("; "));
  }
}

export class ControlApi {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Status> {
    const response = await this.fetchImpl(this.base + path, init);
    if (response.status === 422) {
      const body = await response.json();
      throw new ValidationFailure(body.detail as FieldProblem[]);
    }
    if (!response.ok) {
      const body = await response.json().catch(() => ({ detail: response.statusText }));
      throw new Error(String(body.detail ?? response.statusText));
    }
    return (await response.json()) as Status;
  }

  getStatus(): Promise<Status> {
    return this.request("/api/status");
  }

  putConfig(patch: Record<string, unknown>): Promise<Status> {
    return this.request("/api/config", {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(patch),
    });
  }

  start(): Promise<Status> {
    return this.request("/api/start", { method: "POST" });
  }

  stop(): Promise<Status> {
    return this.request("/api/stop", { method: "POST" });
  }

  logsUrl(tail: number): string {
    return `${this.base}/api/logs?tail=${tail}`;
  }
}
