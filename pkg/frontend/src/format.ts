// Display formatting. Column set mirrors the published triage table:
// acquaintance, rank difference, max consecutive games, proximity,
// match count, anomaly score, plus the reviewer verdict.

import type { QueueEntry } from './types.js';

export interface ColumnDef {
  key: string;
  label: string;
  value: (e: QueueEntry) => string;
}

export function formatScore(score: number): string {
  return score.toFixed(3);
}

export function formatBool(flag: boolean): string {
  return flag ? 'TRUE' : 'FALSE';
}

export function formatUnits(value: number): string {
  return value.toFixed(2);
}

export const TABLE2_COLUMNS: ColumnDef[] = [
  { key: 'pair', label: 'Pair', value: (e) => `${e.pair_a} / ${e.pair_b}` },
  { key: 'acquaintance', label: 'Acquaintance', value: (e) => formatBool(e.acquaintance) },
  { key: 'rank_diff', label: 'Rank Difference', value: (e) => formatUnits(e.avg_rank_diff) },
  { key: 'max_consec', label: 'Max # Consec Games', value: (e) => String(e.max_consecutive) },
  { key: 'proximity', label: 'Proximity', value: (e) => formatUnits(e.avg_distance) },
  { key: 'n_matches', label: '# Matches', value: (e) => String(e.n_matches) },
  { key: 'score', label: 'Anomaly Score', value: (e) => formatScore(e.score) },
  { key: 'verdict', label: 'Verdict', value: (e) => e.verdict?.status ?? 'unreviewed' },
];

export function formatTimestamp(iso: string): string {
  return iso.replace('T', ' ').replace(/\.\d+Z$/, ' UTC');
}
