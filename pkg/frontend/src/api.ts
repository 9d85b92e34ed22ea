// Typed client for the labeling service. Every method resolves only on a
// 2xx response with a body of the expected shape; anything else throws, so
// the controller never advances on an unacknowledged action.

import type { Ack, Doc, ExportEntry, Label, Progress } from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class Exhausted extends Error {
  constructor() {
    super("no documents left to label");
    this.name = "Exhausted";
  }
}

export interface LabelApi {
  next(session: string): Promise<Doc>;
  label(id: string, label: Label, session: string): Promise<Ack>;
  skip(id: string, session: string): Promise<Ack>;
  progress(session?: string): Promise<Progress>;
  exportLabels(): Promise<ExportEntry[]>;
}

function isNum(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

export function parseProgress(payload: unknown): Progress {
  const p = payload as Record<string, unknown>;
  if (
    p === null ||
    typeof p !== "object" ||
    !isNum(p.labeled_R) ||
    !isNum(p.labeled_NR) ||
    !isNum(p.skipped) ||
    !isNum(p.remaining) ||
    !(p.percent_R === null || isNum(p.percent_R))
  ) {
    throw new ApiError(200, "malformed progress payload");
  }
  return {
    labeled_R: p.labeled_R,
    labeled_NR: p.labeled_NR,
    skipped: p.skipped,
    remaining: p.remaining,
    percent_R: p.percent_R as number | null,
  };
}

export class HttpApi implements LabelApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (response.status === 404 && path.startsWith("/api/next")) {
      throw new Exhausted();
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; statusText is all we have
      }
      throw new ApiError(response.status, `HTTP ${response.status}: ${detail}`);
    }
    return response.json();
  }

  private post(path: string, body: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async next(session: string): Promise<Doc> {
    const doc = (await this.request(
      `/api/next?session=${encodeURIComponent(session)}`,
    )) as Doc;
    if (typeof doc.id !== "string" || typeof doc.text !== "string") {
      throw new ApiError(200, "malformed document payload");
    }
    return doc;
  }

  async label(id: string, label: Label, session: string): Promise<Ack> {
    return (await this.post("/api/label", { id, label, session })) as Ack;
  }

  async skip(id: string, session: string): Promise<Ack> {
    return (await this.post("/api/skip", { id, session })) as Ack;
  }

  async progress(session?: string): Promise<Progress> {
    const query = session === undefined ? "" : `?session=${encodeURIComponent(session)}`;
    return parseProgress(await this.request(`/api/progress${query}`));
  }

  async exportLabels(): Promise<ExportEntry[]> {
    return (await this.request("/api/export")) as ExportEntry[];
  }
}
