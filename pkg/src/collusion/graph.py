"""Teammate/opponent social network: construction, clusters, export.

Node size encodes matches played; opponent edges carry a rank-closeness
attribute in [0,1] (1 = identical average rank placement), edge weight
is the shared-match count and thickness the longest consecutive run,
mirroring how the downstream console renders them.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CorruptModelError, UnknownPlayerError
from .features import PairContext, PairFeatures, extract_pairs
from .model import Dataset, PairKey, PlayerId, canonical_pair

DEFAULT_TEAM_COUNT = 20


@dataclass(frozen=True)
class SocialEdge:
    pair: PairKey
    kind: PairContext
    matches: int
    max_streak: int
    avg_rank_diff: float | None  # opponent edges only
    rank_closeness: float | None  # opponent edges only


@dataclass(frozen=True)
class SocialGraph:
    nodes: dict[PlayerId, int]  # player -> matches played
    edges: tuple[SocialEdge, ...]

    def adjacency(self) -> dict[PlayerId, set[PlayerId]]:
        adj: dict[PlayerId, set[PlayerId]] = {p: set() for p in self.nodes}
        for e in self.edges:
            a, b = e.pair
            adj[a].add(b)
            adj[b].add(a)
        return adj


def rank_closeness(avg_rank_diff: float, team_count: int = DEFAULT_TEAM_COUNT) -> float:
    return max(0.0, 1.0 - avg_rank_diff / (team_count - 1))


def appearance_counts(d: Dataset) -> dict[PlayerId, int]:
    counts: dict[PlayerId, int] = {}
    for m in d.matches:
        for p in m.roster():
            counts[p] = counts.get(p, 0) + 1
    return counts


def build_graph(
    features: Iterable[PairFeatures],
    min_matches: int = 3,
    node_counts: Mapping[PlayerId, int] | None = None,
    team_count: int = DEFAULT_TEAM_COUNT,
) -> SocialGraph:
    """Edges for pairs with >= min_matches shared matches per context.

    A pair can produce one teammate and one opponent edge. Node match
    counts come from `node_counts` (the dataset's appearance counts);
    without them, nodes are inferred from the feature rows with count 0.
    """
    rows: dict[PairKey, PairFeatures] = {}
    for row in features:
        rows.setdefault(row.pair, row)

    edges: list[SocialEdge] = []
    for pair in sorted(rows):
        row = rows[pair]
        if row.num_matches_team >= min_matches:
            edges.append(
                SocialEdge(
                    pair=pair,
                    kind=PairContext.TEAMMATE,
                    matches=row.num_matches_team,
                    max_streak=row.max_consecutive_team,
                    avg_rank_diff=None,
                    rank_closeness=None,
                )
            )
        if row.num_matches_opp >= min_matches and row.avg_rank_diff_opp is not None:
            edges.append(
                SocialEdge(
                    pair=pair,
                    kind=PairContext.OPPONENT,
                    matches=row.num_matches_opp,
                    max_streak=row.max_consecutive_opp,
                    avg_rank_diff=row.avg_rank_diff_opp,
                    rank_closeness=rank_closeness(row.avg_rank_diff_opp, team_count),
                )
            )

    edges.sort(key=lambda e: (e.pair, e.kind.value))
    if node_counts is not None:
        nodes = dict(sorted(node_counts.items()))
    else:
        nodes = {p: 0 for pair in sorted(rows) for p in pair}
    return SocialGraph(nodes=nodes, edges=tuple(edges))


def build_graph_from_dataset(
    d: Dataset, min_matches: int = 3, team_count: int = DEFAULT_TEAM_COUNT
) -> SocialGraph:
    rows = extract_pairs(d, min_matches, None)
    return build_graph(
        rows, min_matches=min_matches, node_counts=appearance_counts(d), team_count=team_count
    )


def clusters(g: SocialGraph) -> list[set[PlayerId]]:
    """Connected components over both edge kinds, largest first."""
    adj = g.adjacency()
    seen: set[PlayerId] = set()
    out: list[set[PlayerId]] = []
    for start in sorted(g.nodes):
        if start in seen:
            continue
        component = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    component.add(nxt)
                    queue.append(nxt)
        out.append(component)
    out.sort(key=lambda c: (-len(c), min(c)))
    return out


def ego_network(g: SocialGraph, pair: PairKey, radius: int = 1) -> SocialGraph:
    """Subgraph induced by nodes within `radius` hops of either player."""
    a, b = canonical_pair(*pair)
    for p in (a, b):
        if p not in g.nodes:
            raise UnknownPlayerError(f"player {p!r} not in graph")
    adj = g.adjacency()
    depth = {a: 0, b: 0}
    queue = deque([a, b])
    while queue:
        cur = queue.popleft()
        if depth[cur] == radius:
            continue
        for nxt in adj[cur]:
            if nxt not in depth:
                depth[nxt] = depth[cur] + 1
                queue.append(nxt)
    kept = set(depth)
    return SocialGraph(
        nodes={p: g.nodes[p] for p in sorted(kept)},
        edges=tuple(e for e in g.edges if e.pair[0] in kept and e.pair[1] in kept),
    )


def graph_to_dict(g: SocialGraph) -> dict:
    return {
        "nodes": [{"id": p, "size": n} for p, n in sorted(g.nodes.items())],
        "edges": [
            {
                "a": e.pair[0],
                "b": e.pair[1],
                "kind": e.kind.value,
                "weight": e.matches,
                "thickness": e.max_streak,
                "closeness": e.rank_closeness,
                "avg_rank_diff": e.avg_rank_diff,
            }
            for e in sorted(g.edges, key=lambda e: (e.pair, e.kind.value))
        ],
    }


def export_graph(g: SocialGraph, format: str = "json") -> bytes:
    if format == "json":
        return json.dumps(graph_to_dict(g), separators=(",", ":")).encode("utf-8")
    if format == "dot":
        lines = ["graph collusion {"]
        for p, n in sorted(g.nodes.items()):
            lines.append(f'  "{p}" [size={n}];')
        for e in sorted(g.edges, key=lambda e: (e.pair, e.kind.value)):
            attrs = [f'kind="{e.kind.value}"', f"weight={e.matches}", f"thickness={e.max_streak}"]
            if e.rank_closeness is not None:
                attrs.append(f"closeness={e.rank_closeness:.6f}")
            if e.avg_rank_diff is not None:
                attrs.append(f"avg_rank_diff={e.avg_rank_diff:.6f}")
            lines.append(f'  "{e.pair[0]}" -- "{e.pair[1]}" [{", ".join(attrs)}];')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown graph format {format!r}")


def import_graph(data: bytes) -> SocialGraph:
    """Rebuild a SocialGraph from its JSON export."""
    try:
        obj = json.loads(data.decode("utf-8"))
        nodes = {n["id"]: int(n["size"]) for n in obj["nodes"]}
        edges = tuple(
            SocialEdge(
                pair=(e["a"], e["b"]),
                kind=PairContext(e["kind"]),
                matches=int(e["weight"]),
                max_streak=int(e["thickness"]),
                avg_rank_diff=e["avg_rank_diff"],
                rank_closeness=e["closeness"],
            )
            for e in obj["edges"]
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise CorruptModelError(f"bad graph JSON: {exc}") from exc
    return SocialGraph(nodes=nodes, edges=edges)
