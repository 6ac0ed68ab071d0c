// Small deterministic force layout: nodes start on a circle, then a
// fixed number of repulsion + spring + centering iterations. No
// randomness, so a given graph always renders the same picture.

import type { GraphData } from './types.js';

export interface Point {
  x: number;
  y: number;
}

export function layoutPositions(
  graph: GraphData,
  width: number,
  height: number,
  iterations = 150,
): Map<string, Point> {
  const nodes = graph.nodes;
  const n = nodes.length;
  const pos = new Map<string, Point>();
  if (n === 0) return pos;

  const cx = width / 2;
  const cy = height / 2;
  const ring = Math.min(width, height) * 0.36;
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / n;
    pos.set(node.id, { x: cx + ring * Math.cos(angle), y: cy + ring * Math.sin(angle) });
  });
  if (n === 1) {
    pos.set(nodes[0]!.id, { x: cx, y: cy });
    return pos;
  }

  const area = width * height;
  const k = Math.sqrt(area / n) * 0.6;
  const springs = graph.edges.map((e) => [e.a, e.b] as const);

  for (let it = 0; it < iterations; it++) {
    const cool = 1 - it / iterations;
    const step = 0.08 * k * cool;
    const disp = new Map<string, Point>();
    for (const node of nodes) disp.set(node.id, { x: 0, y: 0 });

    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const a = nodes[i]!.id;
        const b = nodes[j]!.id;
        const pa = pos.get(a)!;
        const pb = pos.get(b)!;
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        let dist = Math.hypot(dx, dy);
        if (dist < 1e-6) {
          dx = 0.01 * (i - j);
          dy = 0.01;
          dist = Math.hypot(dx, dy);
        }
        const force = (k * k) / dist / dist;
        disp.get(a)!.x += dx * force;
        disp.get(a)!.y += dy * force;
        disp.get(b)!.x -= dx * force;
        disp.get(b)!.y -= dy * force;
      }
    }

    for (const [a, b] of springs) {
      const pa = pos.get(a);
      const pb = pos.get(b);
      if (!pa || !pb) continue;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(1e-6, Math.hypot(dx, dy));
      const pull = (dist - k) / dist / 6;
      const da = disp.get(a)!;
      const db = disp.get(b)!;
      da.x += dx * pull;
      da.y += dy * pull;
      db.x -= dx * pull;
      db.y -= dy * pull;
    }

    for (const node of nodes) {
      const p = pos.get(node.id)!;
      const d = disp.get(node.id)!;
      const mag = Math.max(1e-6, Math.hypot(d.x, d.y));
      const capped = Math.min(mag, step);
      p.x += (d.x / mag) * capped;
      p.y += (d.y / mag) * capped;
      // gentle pull to the center keeps disconnected nodes on screen
      p.x += (cx - p.x) * 0.01;
      p.y += (cy - p.y) * 0.01;
      p.x = Math.min(width - 12, Math.max(12, p.x));
      p.y = Math.min(height - 12, Math.max(12, p.y));
    }
  }
  return pos;
}
