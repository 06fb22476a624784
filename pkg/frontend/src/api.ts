import type {
  ActionRequest,
  ActionResponse,
  CreateSessionDoc,
  CreateSessionRequest,
  EventsDoc,
  MetaDoc,
  StateEnvelope,
} from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed client over the gateway HTTP surface. User-level failures
 * (a blocked step, a failed search) arrive as ok responses with spoken
 * messages; ApiError only covers malformed requests, unknown sessions,
 * and transport problems.
 */
export class GatewayClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { 'Content-Type': 'application/json' } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    let doc: unknown = null;
    try {
      doc = await res.json();
    } catch {
      doc = null;
    }
    if (!res.ok) {
      const detail = (doc as { error?: string } | null)?.error ?? `HTTP ${res.status}`;
      throw new ApiError(res.status, detail);
    }
    return doc as T;
  }

  createSession(body: CreateSessionRequest = {}): Promise<CreateSessionDoc> {
    return this.request('POST', '/sessions', body);
  }

  postAction(sessionId: string, request: ActionRequest): Promise<ActionResponse> {
    return this.request('POST', `/sessions/${sessionId}/actions`, request);
  }

  getEvents(sessionId: string, from: number): Promise<EventsDoc> {
    return this.request('GET', `/sessions/${sessionId}/events?from=${from}`);
  }

  getState(sessionId: string): Promise<StateEnvelope> {
    return this.request('GET', `/sessions/${sessionId}/state`);
  }

  getMeta(): Promise<MetaDoc> {
    return this.request('GET', '/meta/actions');
  }

  deleteSession(sessionId: string): Promise<{ v: number; closed: string }> {
    return this.request('DELETE', `/sessions/${sessionId}`);
  }
}
