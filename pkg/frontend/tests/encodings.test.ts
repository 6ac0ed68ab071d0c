import { describe, expect, it } from 'vitest';

import { TEAMMATE_COLOR, edgeColor, edgeOpacity, edgeWidth, nodeRadius } from '../src/encodings.js';
import type { GraphEdge } from '../src/types.js';

function edge(partial: Partial<GraphEdge>): GraphEdge {
  return {
    a: 'p1',
    b: 'p2',
    kind: 'opponent',
    weight: 4,
    thickness: 1,
    closeness: 0.5,
    avg_rank_diff: 5,
    ...partial,
  };
}

describe('edge encodings', () => {
  it('teammate edges are blue regardless of attributes', () => {
    expect(edgeColor(edge({ kind: 'teammate', closeness: null }))).toBe(TEAMMATE_COLOR);
  });

  it('opponent color ramps from yellow to maroon with closeness', () => {
    const far = edgeColor(edge({ closeness: 0 }));
    const near = edgeColor(edge({ closeness: 1 }));
    expect(far).toBe('#f5d42a');
    expect(near).toBe('#800000');
    expect(edgeColor(edge({ closeness: 0.5 }))).not.toBe(far);
  });

  it('width scales with the longest consecutive run', () => {
    const w1 = edgeWidth(edge({ thickness: 1 }));
    const w3 = edgeWidth(edge({ thickness: 3 }));
    const w6 = edgeWidth(edge({ thickness: 6 }));
    expect(w3).toBeGreaterThan(w1);
    expect(w6).toBeGreaterThan(w3);
  });

  it('opacity grows with shared matches and stays in (0, 1]', () => {
    const light = edgeOpacity(edge({ weight: 1 }), 10);
    const heavy = edgeOpacity(edge({ weight: 10 }), 10);
    expect(heavy).toBeGreaterThan(light);
    expect(light).toBeGreaterThan(0);
    expect(heavy).toBeLessThanOrEqual(1);
  });

  it('node radius grows with matches played', () => {
    expect(nodeRadius({ id: 'a', size: 100 }, 100)).toBeGreaterThan(
      nodeRadius({ id: 'b', size: 4 }, 100),
    );
  });
});
