// Payload shapes delivered by the review service (/api/v1).

export type VerdictStatus = 'confirmed' | 'rejected' | 'inconclusive';

export interface Verdict {
  pair_a: string;
  pair_b: string;
  status: VerdictStatus;
  notes: string;
  reviewer: string;
  timestamp: string;
}

export interface QueueEntry {
  pair_a: string;
  pair_b: string;
  rank: number;
  score: number;
  acquaintance: boolean;
  avg_rank_diff: number;
  max_consecutive: number;
  avg_distance: number;
  n_matches: number;
  dominant_feature: string;
  verdict: Verdict | null;
}

export interface QueuePage {
  total: number;
  limit: number;
  offset: number;
  entries: QueueEntry[];
}

export interface TimelineRow {
  match_id: string;
  start_time: string;
  distance: number;
  rank_a: number;
  rank_b: number;
  rank_diff: number;
  ordinal_a: number;
  ordinal_b: number;
}

export interface PairDetail {
  pair_a: string;
  pair_b: string;
  rank: number;
  score: number;
  features: QueueEntry;
  timeline: TimelineRow[];
  teammate_matches: string[];
  verdict: Verdict | null;
  verdicts: Verdict[];
}

export interface GraphNode {
  id: string;
  size: number;
}

export interface GraphEdge {
  a: string;
  b: string;
  kind: 'teammate' | 'opponent';
  weight: number;
  thickness: number;
  closeness: number | null;
  avg_rank_diff: number | null;
}

export interface GraphData {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface Stats {
  summary: Record<string, unknown> | null;
  verdicts: Record<string, number>;
}

export type StatusFilter = '' | 'unreviewed' | VerdictStatus;
