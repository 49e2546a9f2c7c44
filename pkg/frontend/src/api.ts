// Typed client for the pwim HTTP API. Wire shapes mirror the server
// exactly; nothing here reorders, filters, or re-scores what it returns.

export interface ActionView {
  action_id: string;
  summary: string;
}

export interface RankedView {
  action_id: string;
  summary: string;
  similarity: number;
  intensity: number;
  enlarged: boolean;
}

export interface TranscriptRow {
  step: number;
  action_id: string;
  summary: string;
  intent_text: string | null;
}

export interface SessionCreated {
  session_id: string;
  step: number;
  actions: ActionView[];
}

export interface SessionDetail extends SessionCreated {
  facts: string[];
  transcript: TranscriptRow[];
}

export interface IntentResponse {
  step: number;
  ranked: RankedView[];
}

export interface ActResponse {
  event: TranscriptRow;
  actions: ActionView[];
}

/** Error payloads are {"error": kebab-code, "detail": text}. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function request<T>(
  fetchImpl: FetchLike,
  method: string,
  url: string,
  body?: unknown,
): Promise<T> {
  let response: Response;
  try {
    response = await fetchImpl(url, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch (err) {
    throw new ApiError(0, "provider-unavailable", `network failure: ${String(err)}`);
  }
  let payload: unknown;
  try {
    payload = await response.json();
  } catch {
    throw new ApiError(response.status, "bad-response", "response was not JSON");
  }
  if (!response.ok) {
    const err = payload as { error?: string; detail?: string };
    throw new ApiError(
      response.status,
      err.error ?? "error",
      err.detail ?? `request failed with status ${response.status}`,
    );
  }
  return payload as T;
}

export class PwimClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  listDomains(): Promise<{ domains: string[] }> {
    return request(this.fetchImpl, "GET", `${this.baseUrl}/api/domains`);
  }

  createSession(domain: string): Promise<SessionCreated> {
    return request(this.fetchImpl, "POST", `${this.baseUrl}/api/session`, { domain });
  }

  getSession(sessionId: string): Promise<SessionDetail> {
    return request(this.fetchImpl, "GET", `${this.baseUrl}/api/session/${sessionId}`);
  }

  submitIntent(sessionId: string, text: string): Promise<IntentResponse> {
    return request(this.fetchImpl, "POST", `${this.baseUrl}/api/session/${sessionId}/intent`, {
      text,
    });
  }

  act(
    sessionId: string,
    actionId: string,
    step: number,
    intentText: string | null,
  ): Promise<ActResponse> {
    return request(this.fetchImpl, "POST", `${this.baseUrl}/api/session/${sessionId}/act`, {
      action_id: actionId,
      step,
      intent_text: intentText,
    });
  }
}
