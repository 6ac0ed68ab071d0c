// Thin typed client for the review service. The console never computes
// scores or features itself; every number displayed comes from here.

import type { GraphData, PairDetail, QueuePage, Stats, StatusFilter, Verdict } from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = (await res.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  listPairs(status: StatusFilter = '', limit = 25, offset = 0): Promise<QueuePage> {
    const params = new URLSearchParams({ limit: String(limit), offset: String(offset) });
    if (status) params.set('status', status);
    return this.request<QueuePage>(`/api/v1/pairs?${params}`);
  }

  getPair(a: string, b: string): Promise<PairDetail> {
    return this.request<PairDetail>(`/api/v1/pairs/${encodeURIComponent(a)}/${encodeURIComponent(b)}`);
  }

  getNetwork(a: string, b: string, radius: number): Promise<GraphData> {
    return this.request<GraphData>(
      `/api/v1/pairs/${encodeURIComponent(a)}/${encodeURIComponent(b)}/network?radius=${radius}`,
    );
  }

  postVerdict(
    a: string,
    b: string,
    body: { status: string; notes?: string; reviewer?: string },
  ): Promise<{ verdict: Verdict; appended: boolean }> {
    return this.request(`/api/v1/pairs/${encodeURIComponent(a)}/${encodeURIComponent(b)}/verdict`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  getStats(): Promise<Stats> {
    return this.request<Stats>('/api/v1/stats');
  }
}

export interface PagerState {
  offset: number;
  limit: number;
  total: number;
}

export function nextOffset(state: PagerState): number | null {
  const candidate = state.offset + state.limit;
  return candidate < state.total ? candidate : null;
}

export function prevOffset(state: PagerState): number | null {
  if (state.offset === 0) return null;
  return Math.max(0, state.offset - state.limit);
}
