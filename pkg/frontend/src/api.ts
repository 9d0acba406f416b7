/** Thin typed client for the explanation service. */

import type { ExplainResponse, QueryDoc, SessionInfo, Variant } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function requestJson(url: string, init?: RequestInit): Promise<any> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, body?.detail ?? response.statusText);
  }
  return body;
}

export class ExplainClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  createSession(body: object): Promise<{ session_id: string }> {
    return requestJson(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return requestJson(this.url(`/sessions/${sessionId}`));
  }

  solve(sessionId: string, body: object): Promise<{ solution: Record<string, number>; cost: number | "inf" }> {
    return requestJson(this.url(`/sessions/${sessionId}/solve`), {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  explain(
    sessionId: string,
    body: { query: QueryDoc; variant: Variant },
  ): Promise<ExplainResponse> {
    return requestJson(this.url(`/sessions/${sessionId}/explain`), {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  history(sessionId: string): Promise<{ history: unknown[] }> {
    return requestJson(this.url(`/sessions/${sessionId}/history`));
  }
}

export function defaultBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? "http://127.0.0.1:8345";
}
