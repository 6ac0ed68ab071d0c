// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';
import { QueueView } from '../src/queue.js';
import type { QueueEntry } from '../src/types.js';

function entry(i: number, verdict: QueueEntry['verdict'] = null): QueueEntry {
  return {
    pair_a: `a${i}`,
    pair_b: `b${i}`,
    rank: i + 1,
    score: -0.2 + 0.01 * i,
    acquaintance: i % 2 === 0,
    avg_rank_diff: 1.5,
    max_consecutive: 3,
    avg_distance: 2500.0,
    n_matches: 8,
    dominant_feature: 'avg_distance',
    verdict,
  };
}

function makeApi(entries: QueueEntry[], failPost = false) {
  const fetchFn = vi.fn(async (url: string, init?: RequestInit) => {
    if (url.includes('/verdict')) {
      if (failPost) {
        return new Response(JSON.stringify({ detail: 'nope' }), { status: 400 });
      }
      const body = JSON.parse(init?.body as string);
      const m = url.match(/pairs\/([^/]+)\/([^/]+)\/verdict/)!;
      const verdict = {
        pair_a: m[1]!,
        pair_b: m[2]!,
        status: body.status,
        notes: body.notes ?? '',
        reviewer: body.reviewer ?? '',
        timestamp: '2025-06-02T00:00:00.000Z',
      };
      const target = entries.find((e) => e.pair_a === m[1] && e.pair_b === m[2]);
      if (target) target.verdict = verdict;
      return new Response(JSON.stringify({ verdict, appended: true }), { status: 200 });
    }
    const params = new URL(url).searchParams;
    const status = params.get('status') ?? '';
    let filtered = entries;
    if (status === 'unreviewed') filtered = entries.filter((e) => e.verdict === null);
    else if (status) filtered = entries.filter((e) => e.verdict?.status === status);
    const offset = Number(params.get('offset') ?? 0);
    const limit = Number(params.get('limit') ?? 25);
    return new Response(
      JSON.stringify({
        total: filtered.length,
        limit,
        offset,
        entries: filtered.slice(offset, offset + limit),
      }),
      { status: 200 },
    );
  });
  return { api: new ApiClient('http://svc', fetchFn), fetchFn };
}

describe('QueueView', () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<main id="app"></main>';
    root = document.getElementById('app')!;
  });

  it('renders rows sorted by the service with table2 headers', async () => {
    const { api } = makeApi([entry(0), entry(1), entry(2)]);
    const view = new QueueView(api, root, () => undefined);
    await view.load();
    const headers = [...root.querySelectorAll('thead th')].map((th) => th.textContent);
    expect(headers).toContain('Anomaly Score');
    expect(headers).toContain('Max # Consec Games');
    const firstScore = root.querySelector('tbody tr td[data-key="score"]')!.textContent;
    expect(firstScore).toBe('-0.200'); // lowest score first
  });

  it('clicking a row opens the pair', async () => {
    const opened: string[] = [];
    const { api } = makeApi([entry(0)]);
    const view = new QueueView(api, root, (a, b) => opened.push(`${a}/${b}`));
    await view.load();
    (root.querySelector('tbody tr') as HTMLElement).click();
    expect(opened).toEqual(['a0/b0']);
  });

  it('optimistic verdict removes the row from the unreviewed view without reload', async () => {
    const entries = [entry(0), entry(1)];
    const { api, fetchFn } = makeApi(entries);
    const view = new QueueView(api, root, () => undefined);
    await view.load();
    expect(root.querySelectorAll('tbody tr')).toHaveLength(2);

    const callsBefore = fetchFn.mock.calls.length;
    (root.querySelector('tbody tr button.verdict.confirmed') as HTMLElement).click();
    // the row leaves the default unreviewed filter synchronously
    expect(root.querySelectorAll('tbody tr')).toHaveLength(1);
    await vi.waitFor(() => {
      expect(entries[0]!.verdict?.status).toBe('confirmed');
    });
    const listCalls = fetchFn.mock.calls
      .slice(callsBefore)
      .filter(([u]) => !(u as string).includes('/verdict'));
    expect(listCalls).toHaveLength(0); // no queue re-fetch needed
  });

  it('rolls back the optimistic update when the API rejects', async () => {
    const entries = [entry(0), entry(1)];
    const { api } = makeApi(entries, true);
    const view = new QueueView(api, root, () => undefined);
    await view.load();
    (root.querySelector('tbody tr button.verdict.confirmed') as HTMLElement).click();
    expect(root.querySelectorAll('tbody tr')).toHaveLength(1); // optimistic
    await vi.waitFor(() => {
      expect(root.querySelectorAll('tbody tr')).toHaveLength(2); // rolled back
    });
    expect(entries[0]!.verdict).toBeNull();
  });

  it('filter chips drive the status query', async () => {
    const confirmed = entry(3, {
      pair_a: 'a3', pair_b: 'b3', status: 'confirmed', notes: '', reviewer: 'r',
      timestamp: '2025-06-02T00:00:00.000Z',
    });
    const { api, fetchFn } = makeApi([entry(0), confirmed]);
    const view = new QueueView(api, root, () => undefined);
    await view.load();
    (root.querySelector('button.chip[data-filter="confirmed"]') as HTMLElement).click();
    await vi.waitFor(() => {
      const urls = fetchFn.mock.calls.map(([u]) => u as string);
      expect(urls.some((u) => u.includes('status=confirmed'))).toBe(true);
    });
    expect(root.querySelectorAll('tbody tr')).toHaveLength(1);
  });
});
