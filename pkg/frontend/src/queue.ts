// Queue screen: ranked outlier table with verdict chips and pagination.
// Verdict submission is optimistic: the row updates immediately and
// rolls back if the API rejects the write.

import { ApiClient, nextOffset, prevOffset } from './api.js';
import { TABLE2_COLUMNS } from './format.js';
import type { QueueEntry, StatusFilter, VerdictStatus } from './types.js';

const FILTERS: StatusFilter[] = ['unreviewed', '', 'confirmed', 'rejected', 'inconclusive'];

export class QueueView {
  private status: StatusFilter = 'unreviewed';
  private offset = 0;
  private readonly limit: number;
  private entries: QueueEntry[] = [];
  private total = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly onOpenPair: (a: string, b: string) => void,
    limit = 25,
  ) {
    this.limit = limit;
  }

  async load(): Promise<void> {
    try {
      const page = await this.api.listPairs(this.status, this.limit, this.offset);
      this.entries = page.entries;
      this.total = page.total;
      this.render();
    } catch (err) {
      this.renderError(err);
    }
  }

  private async setFilter(status: StatusFilter): Promise<void> {
    this.status = status;
    this.offset = 0;
    await this.load();
  }

  /** Optimistically apply a verdict to a row; roll back on API error. */
  async submitVerdict(entry: QueueEntry, status: VerdictStatus, reviewer: string): Promise<void> {
    const previous = entry.verdict;
    entry.verdict = {
      pair_a: entry.pair_a,
      pair_b: entry.pair_b,
      status,
      notes: '',
      reviewer,
      timestamp: new Date().toISOString(),
    };
    this.applyFilterLocally();
    this.render();
    try {
      const res = await this.api.postVerdict(entry.pair_a, entry.pair_b, { status, reviewer });
      entry.verdict = res.verdict;
      this.render();
    } catch (err) {
      entry.verdict = previous;
      this.entries = [...this.entries];
      await this.load(); // restore server truth after rollback
      throw err;
    }
  }

  private applyFilterLocally(): void {
    if (this.status === 'unreviewed') {
      this.entries = this.entries.filter((e) => e.verdict === null);
    } else if (this.status !== '') {
      this.entries = this.entries.filter((e) => e.verdict?.status === this.status);
    }
  }

  private renderError(err: unknown): void {
    this.root.replaceChildren();
    const div = this.root.ownerDocument.createElement('div');
    div.className = 'error';
    div.textContent = `queue unavailable: ${err instanceof Error ? err.message : String(err)}`;
    this.root.appendChild(div);
  }

  private render(): void {
    const doc = this.root.ownerDocument;
    this.root.replaceChildren();

    const chips = doc.createElement('div');
    chips.className = 'chips';
    for (const f of FILTERS) {
      const chip = doc.createElement('button');
      chip.className = 'chip' + (f === this.status ? ' active' : '');
      chip.textContent = f === '' ? 'all' : f;
      chip.dataset.filter = f;
      chip.addEventListener('click', () => void this.setFilter(f));
      chips.appendChild(chip);
    }
    this.root.appendChild(chips);

    const table = doc.createElement('table');
    table.className = 'queue';
    const thead = doc.createElement('thead');
    const headRow = doc.createElement('tr');
    for (const col of TABLE2_COLUMNS) {
      const th = doc.createElement('th');
      th.textContent = col.label;
      th.dataset.key = col.key;
      headRow.appendChild(th);
    }
    headRow.appendChild(doc.createElement('th')); // verdict buttons
    thead.appendChild(headRow);
    table.appendChild(thead);

    const tbody = doc.createElement('tbody');
    for (const entry of this.entries) {
      const tr = doc.createElement('tr');
      tr.dataset.pair = `${entry.pair_a}/${entry.pair_b}`;
      for (const col of TABLE2_COLUMNS) {
        const td = doc.createElement('td');
        td.textContent = col.value(entry);
        td.dataset.key = col.key;
        tr.appendChild(td);
      }
      const actions = doc.createElement('td');
      for (const status of ['confirmed', 'rejected', 'inconclusive'] as VerdictStatus[]) {
        const btn = doc.createElement('button');
        btn.className = `verdict ${status}`;
        btn.textContent = status[0]!.toUpperCase();
        btn.title = `mark ${status}`;
        btn.addEventListener('click', (ev) => {
          ev.stopPropagation();
          void this.submitVerdict(entry, status, currentReviewer(this.root)).catch(() => undefined);
        });
        actions.appendChild(btn);
      }
      tr.appendChild(actions);
      tr.addEventListener('click', () => this.onOpenPair(entry.pair_a, entry.pair_b));
      tbody.appendChild(tr);
    }
    table.appendChild(tbody);
    this.root.appendChild(table);

    const pager = doc.createElement('div');
    pager.className = 'pager';
    const state = { offset: this.offset, limit: this.limit, total: this.total };
    const prev = doc.createElement('button');
    prev.textContent = 'prev';
    const prevTo = prevOffset(state);
    prev.disabled = prevTo === null;
    prev.addEventListener('click', () => {
      if (prevTo !== null) {
        this.offset = prevTo;
        void this.load();
      }
    });
    const next = doc.createElement('button');
    next.textContent = 'next';
    const nextTo = nextOffset(state);
    next.disabled = nextTo === null;
    next.addEventListener('click', () => {
      if (nextTo !== null) {
        this.offset = nextTo;
        void this.load();
      }
    });
    const span = doc.createElement('span');
    const hi = Math.min(this.offset + this.limit, this.total);
    span.textContent = this.total ? `${this.offset + 1}-${hi} of ${this.total}` : 'no pairs';
    pager.append(prev, span, next);
    this.root.appendChild(pager);
  }
}

function currentReviewer(root: HTMLElement): string {
  const field = root.ownerDocument.querySelector<HTMLInputElement>('#reviewer');
  return field?.value || 'reviewer';
}
