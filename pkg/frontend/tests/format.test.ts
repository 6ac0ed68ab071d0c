import { describe, expect, it } from 'vitest';

import { TABLE2_COLUMNS, formatBool, formatScore, formatTimestamp } from '../src/format.js';
import type { QueueEntry } from '../src/types.js';

const entry: QueueEntry = {
  pair_a: 'p1',
  pair_b: 'p2',
  rank: 1,
  score: -0.1731,
  acquaintance: true,
  avg_rank_diff: 1.18,
  max_consecutive: 2,
  avg_distance: 1971.32,
  n_matches: 11,
  dominant_feature: 'avg_distance',
  verdict: null,
};

describe('formatting', () => {
  it('prints scores with three decimals', () => {
    expect(formatScore(-0.1731)).toBe('-0.173');
    expect(formatScore(0.5)).toBe('0.500');
  });

  it('prints booleans as TRUE/FALSE', () => {
    expect(formatBool(true)).toBe('TRUE');
    expect(formatBool(false)).toBe('FALSE');
  });

  it('column set mirrors the published triage table plus verdict', () => {
    const labels = TABLE2_COLUMNS.map((c) => c.label);
    expect(labels).toContain('Acquaintance');
    expect(labels).toContain('Rank Difference');
    expect(labels).toContain('Max # Consec Games');
    expect(labels).toContain('Proximity');
    expect(labels).toContain('# Matches');
    expect(labels).toContain('Anomaly Score');
    expect(labels).toContain('Verdict');
  });

  it('renders the sample row like the published table', () => {
    const byKey = Object.fromEntries(TABLE2_COLUMNS.map((c) => [c.key, c.value(entry)]));
    expect(byKey['acquaintance']).toBe('TRUE');
    expect(byKey['score']).toBe('-0.173');
    expect(byKey['proximity']).toBe('1971.32');
    expect(byKey['n_matches']).toBe('11');
    expect(byKey['verdict']).toBe('unreviewed');
  });

  it('formats timestamps for humans', () => {
    expect(formatTimestamp('2025-06-01T00:03:00.000Z')).toBe('2025-06-01 00:03:00 UTC');
  });
});
