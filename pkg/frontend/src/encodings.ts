// Visual encodings for the ego-network view. Teammate edges are blue;
// opponent edges ramp yellow (far ranks) to maroon (adjacent ranks),
// opacity tracks shared matches, stroke width tracks the longest
// consecutive run.

import type { GraphEdge, GraphNode } from './types.js';

export const TEAMMATE_COLOR = '#1f5fd0';

const RAMP_FROM = { r: 0xf5, g: 0xd4, b: 0x2a }; // yellow
const RAMP_TO = { r: 0x80, g: 0x00, b: 0x00 }; // maroon

export function edgeColor(edge: GraphEdge): string {
  if (edge.kind === 'teammate') return TEAMMATE_COLOR;
  const t = Math.min(1, Math.max(0, edge.closeness ?? 0));
  const mix = (a: number, b: number) => Math.round(a + (b - a) * t);
  const r = mix(RAMP_FROM.r, RAMP_TO.r);
  const g = mix(RAMP_FROM.g, RAMP_TO.g);
  const b = mix(RAMP_FROM.b, RAMP_TO.b);
  return `#${[r, g, b].map((v) => v.toString(16).padStart(2, '0')).join('')}`;
}

export function edgeOpacity(edge: GraphEdge, maxWeight: number): number {
  if (maxWeight <= 0) return 0.35;
  return 0.35 + 0.65 * Math.min(1, edge.weight / maxWeight);
}

export function edgeWidth(edge: GraphEdge): number {
  // linear in the longest consecutive run, clamped for sanity
  return 1 + 1.5 * Math.min(8, Math.max(0, edge.thickness - 1));
}

export function nodeRadius(node: GraphNode, maxSize: number): number {
  if (maxSize <= 0) return 6;
  return 5 + 11 * Math.sqrt(node.size / maxSize);
}
