// Pair detail screen: feature summary, shared-match timeline, verdict
// form with history, and the ego network with a 0-2 hop radius
// selector that re-renders in place.

import { ApiClient } from './api.js';
import { formatBool, formatScore, formatTimestamp, formatUnits } from './format.js';
import { renderNetwork } from './network.js';
import type { PairDetail, VerdictStatus } from './types.js';

export class PairDetailView {
  private radius = 1;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly onBack: () => void,
  ) {}

  async load(a: string, b: string): Promise<void> {
    let detail: PairDetail;
    try {
      detail = await this.api.getPair(a, b);
    } catch (err) {
      this.root.textContent = `pair unavailable: ${err instanceof Error ? err.message : err}`;
      return;
    }
    this.render(detail);
    await this.refreshNetwork(detail);
  }

  private async refreshNetwork(detail: PairDetail): Promise<void> {
    const host = this.root.querySelector<HTMLElement>('#network');
    if (!host) return;
    try {
      const graph = await this.api.getNetwork(detail.pair_a, detail.pair_b, this.radius);
      renderNetwork(host, graph, { focus: [detail.pair_a, detail.pair_b] });
    } catch (err) {
      host.textContent = `network unavailable: ${err instanceof Error ? err.message : err}`;
    }
  }

  private render(detail: PairDetail): void {
    const doc = this.root.ownerDocument;
    this.root.replaceChildren();

    const back = doc.createElement('button');
    back.id = 'back';
    back.textContent = 'back to queue';
    back.addEventListener('click', () => this.onBack());
    this.root.appendChild(back);

    const h = doc.createElement('h2');
    h.textContent = `${detail.pair_a} / ${detail.pair_b}`;
    this.root.appendChild(h);

    const summary = doc.createElement('dl');
    summary.id = 'summary';
    const rows: [string, string][] = [
      ['Rank in report', String(detail.rank)],
      ['Anomaly score', formatScore(detail.score)],
      ['Acquaintance', formatBool(detail.features.acquaintance)],
      ['Rank difference', formatUnits(detail.features.avg_rank_diff)],
      ['Max # consec games', String(detail.features.max_consecutive)],
      ['Proximity', formatUnits(detail.features.avg_distance)],
      ['# Matches', String(detail.features.n_matches)],
      ['Dominant feature', detail.features.dominant_feature],
    ];
    for (const [label, value] of rows) {
      const dt = doc.createElement('dt');
      dt.textContent = label;
      const dd = doc.createElement('dd');
      dd.textContent = value;
      summary.append(dt, dd);
    }
    this.root.appendChild(summary);

    const netSection = doc.createElement('section');
    const netHead = doc.createElement('h3');
    netHead.textContent = 'ego network';
    netSection.appendChild(netHead);
    const radiusBox = doc.createElement('div');
    radiusBox.className = 'radius';
    for (const r of [0, 1, 2]) {
      const btn = doc.createElement('button');
      btn.textContent = `radius ${r}`;
      btn.dataset.radius = String(r);
      btn.className = r === this.radius ? 'active' : '';
      btn.addEventListener('click', () => {
        this.radius = r;
        radiusBox.querySelectorAll('button').forEach((el) => {
          el.className = el.dataset.radius === String(r) ? 'active' : '';
        });
        void this.refreshNetwork(detail);
      });
      radiusBox.appendChild(btn);
    }
    netSection.appendChild(radiusBox);
    const host = doc.createElement('div');
    host.id = 'network';
    netSection.appendChild(host);
    this.root.appendChild(netSection);

    const timelineHead = doc.createElement('h3');
    timelineHead.textContent = `shared matches (${detail.timeline.length})`;
    this.root.appendChild(timelineHead);
    const table = doc.createElement('table');
    table.id = 'timeline';
    const thead = doc.createElement('thead');
    thead.innerHTML =
      '<tr><th>match</th><th>start</th><th>distance</th><th>rank a</th>' +
      '<th>rank b</th><th>diff</th><th>ordinals</th></tr>';
    table.appendChild(thead);
    const tbody = doc.createElement('tbody');
    for (const row of detail.timeline) {
      const tr = doc.createElement('tr');
      tr.innerHTML =
        `<td>${row.match_id}</td><td>${formatTimestamp(row.start_time)}</td>` +
        `<td>${formatUnits(row.distance)}</td><td>${row.rank_a}</td>` +
        `<td>${row.rank_b}</td><td>${row.rank_diff}</td>` +
        `<td>${row.ordinal_a}/${row.ordinal_b}</td>`;
      tbody.appendChild(tr);
    }
    table.appendChild(tbody);
    this.root.appendChild(table);

    if (detail.teammate_matches.length) {
      const note = doc.createElement('p');
      note.id = 'teammate-note';
      note.textContent = `also teammates in: ${detail.teammate_matches.join(', ')}`;
      this.root.appendChild(note);
    }

    const form = doc.createElement('form');
    form.id = 'verdict-form';
    const select = doc.createElement('select');
    select.id = 'verdict-status';
    for (const status of ['confirmed', 'rejected', 'inconclusive']) {
      const opt = doc.createElement('option');
      opt.value = status;
      opt.textContent = status;
      select.appendChild(opt);
    }
    const notes = doc.createElement('input');
    notes.id = 'verdict-notes';
    notes.placeholder = 'notes';
    const reviewer = doc.createElement('input');
    reviewer.id = 'verdict-reviewer';
    reviewer.placeholder = 'reviewer';
    const submit = doc.createElement('button');
    submit.type = 'submit';
    submit.textContent = 'record verdict';
    form.append(select, notes, reviewer, submit);
    form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.api
        .postVerdict(detail.pair_a, detail.pair_b, {
          status: select.value as VerdictStatus,
          notes: notes.value,
          reviewer: reviewer.value || 'reviewer',
        })
        .then(() => this.load(detail.pair_a, detail.pair_b))
        .catch((err) => {
          const warn = doc.createElement('p');
          warn.className = 'error';
          warn.textContent = `verdict rejected: ${err instanceof Error ? err.message : err}`;
          form.appendChild(warn);
        });
    });
    this.root.appendChild(form);

    const history = doc.createElement('ul');
    history.id = 'verdict-history';
    for (const v of detail.verdicts) {
      const li = doc.createElement('li');
      li.textContent = `${formatTimestamp(v.timestamp)} ${v.reviewer}: ${v.status}` +
        (v.notes ? ` (${v.notes})` : '');
      history.appendChild(li);
    }
    this.root.appendChild(history);
  }
}
