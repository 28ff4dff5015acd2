/** Typed client for the planning service HTTP API. */

import type {
  InstanceDoc,
  SolutionDocument,
  SolveRequest,
  SweepResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(typeof detail === "string" ? detail : `HTTP ${status}`);
  }
}

/** Thrown for 422: the scenario solved but is infeasible; carries the
 * diagnostics document. */
export class InfeasibleError extends ApiError {
  constructor(public doc: SolutionDocument) {
    super(422, doc);
  }
}

const JOB_POLL_MS = 1000;

async function finish<T>(resp: Response, fetcher: typeof fetch): Promise<T> {
  if (resp.status === 202) {
    // long solve: poll the job until it completes
    const { job_id } = await resp.json() as { job_id: string };
    for (;;) {
      await new Promise((r) => setTimeout(r, JOB_POLL_MS));
      const poll = await fetcher(`/api/v1/jobs/${job_id}`);
      if (poll.status === 409) continue;
      return finish<T>(poll, fetcher);
    }
  }
  const body = await resp.json().catch(() => null);
  if (resp.ok) return body as T;
  const detail = (body as { detail?: unknown } | null)?.detail ?? body;
  if (resp.status === 422 && detail && typeof detail === "object") {
    throw new InfeasibleError(detail as SolutionDocument);
  }
  throw new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(private fetcher: typeof fetch = fetch) {}

  async uploadInstance(doc: InstanceDoc): Promise<string> {
    const resp = await this.fetcher("/api/v1/instances", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    const { id } = await finish<{ id: string }>(resp, this.fetcher);
    return id;
  }

  async instanceMetadata(id: string): Promise<Record<string, number | string>> {
    const resp = await this.fetcher(`/api/v1/instances/${id}`);
    return finish(resp, this.fetcher);
  }

  async solve(request: SolveRequest): Promise<SolutionDocument> {
    const resp = await this.fetcher("/api/v1/solve", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    return finish(resp, this.fetcher);
  }

  async sweep(kind: "weights" | "hogs" | "moq" | "demand",
              params: Record<string, unknown>): Promise<SweepResponse> {
    const resp = await this.fetcher(`/api/v1/sweeps/${kind}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(params),
    });
    return finish(resp, this.fetcher);
  }
}
