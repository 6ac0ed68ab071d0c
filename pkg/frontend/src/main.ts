// App shell: hash routing between the queue and pair detail screens.
// API base comes from ?api=<url>, defaulting to the page origin.

import { ApiClient } from './api.js';
import { PairDetailView } from './detail.js';
import { QueueView } from './queue.js';

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('api') ?? window.location.origin;
}

function route(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const api = new ApiClient(apiBase());
  const hash = window.location.hash;
  const m = hash.match(/^#\/pair\/([^/]+)\/([^/]+)$/);
  if (m) {
    const view = new PairDetailView(api, root, () => {
      window.location.hash = '#/queue';
    });
    void view.load(decodeURIComponent(m[1]!), decodeURIComponent(m[2]!));
  } else {
    const view = new QueueView(api, root, (a, b) => {
      window.location.hash = `#/pair/${encodeURIComponent(a)}/${encodeURIComponent(b)}`;
    });
    void view.load();
  }
}

window.addEventListener('hashchange', route);
window.addEventListener('DOMContentLoaded', route);
