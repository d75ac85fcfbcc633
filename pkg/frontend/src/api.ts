/** Typed client for the visualizer service. All program semantics live on
 * the server; this module only moves JSON across the wire. */

export type SessionStatus =
  | "ready"
  | "awaiting_input"
  | "finished"
  | "faulted"
  | "truncated";

export interface Diagnostic {
  severity: string;
  line: number;
  column: number;
  message: string;
  suggestion: string;
}

export type RamCell =
  | { cell: string; state: "reserved" }
  | { cell: string; state: "value"; type: "Integer" | "String"; value: number | string };

export type IoEvent =
  | { type: "input_requested"; prompt: string }
  | { type: "input_consumed"; prompt: string; raw: string }
  | { type: "output"; text: string };

export interface TraceStep {
  index: number;
  line: number;
  statement: string;
  annotations: string[];
  io: IoEvent[];
  ram: RamCell[];
}

export interface Fault {
  line: number;
  kind: string;
  message: string;
  suggestion: string;
}

export interface SessionInfo {
  id: string;
  status: SessionStatus;
}

export interface StepResponse {
  status: SessionStatus;
  step?: TraceStep;
  prompt?: string;
  fault?: Fault;
}

export interface RunResponse {
  status: SessionStatus;
  steps_added: number;
}

export interface ThreeBlock {
  before: RamCell[];
  after_declaration: RamCell[];
  after_assignment: RamCell[];
}

export interface SnapshotResponse {
  ram: RamCell[];
  three_block: ThreeBlock;
}

export interface Snippet {
  lines: string[];
  cursor_hint: { line: number; column: number };
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  suggestion: string;
}

/** Non-2xx response. `body` is the parsed JSON error payload when the
 * service sent one (422 diagnostics, {code,message,suggestion} otherwise). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`service responded ${status}`);
    this.name = "ApiError";
  }

  get diagnostics(): Diagnostic[] | null {
    const body = this.body as { diagnostics?: Diagnostic[] } | null;
    return body && Array.isArray(body.diagnostics) ? body.diagnostics : null;
  }

  get errorBody(): ServiceErrorBody | null {
    const body = this.body as ServiceErrorBody | null;
    return body && typeof body.code === "string" ? body : null;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const text = await response.text();
  let body: unknown = null;
  if (text) {
    try {
      body = JSON.parse(text);
    } catch {
      body = text;
    }
  }
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

function post(payload: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  };
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  createSession(
    source: string,
    mode: "line_by_line" | "complete_run" = "line_by_line",
    inputs: string[] = [],
  ): Promise<SessionInfo> {
    return request(this.url("/sessions"), post({ source, mode, inputs }));
  }

  step(sessionId: string): Promise<StepResponse> {
    return request(this.url(`/sessions/${sessionId}/step`), post({}));
  }

  provideInput(sessionId: string, value: string): Promise<{ status: SessionStatus }> {
    return request(this.url(`/sessions/${sessionId}/input`), post({ value }));
  }

  run(sessionId: string): Promise<RunResponse> {
    return request(this.url(`/sessions/${sessionId}/run`), post({}));
  }

  snapshot(sessionId: string, k: number): Promise<SnapshotResponse> {
    return request(this.url(`/sessions/${sessionId}/snapshot/${k}`));
  }

  snippet(kind: string, params: Record<string, string>): Promise<Snippet> {
    return request(this.url("/snippets"), post({ kind, params }));
  }

  health(): Promise<unknown> {
    return request(this.url("/healthz"));
  }
}
