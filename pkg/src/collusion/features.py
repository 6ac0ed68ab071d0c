"""Pairwise behavioral features and the rank-adjacency probabilities.

For every qualifying pair of players this module aggregates, per
teammate/opponent context: shared-match count, longest run of shared
matches that are consecutive in BOTH players' personal match sequences,
average landing distance, average final-rank difference (opponents
only), and the acquaintance flag (platform friendship, or having met in
both contexts often enough).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable

from .errors import DomainError
from .model import Dataset, PairKey, PlayerId

FEATURES_CSV_HEADER = "pair_a,pair_b,n_opp,n_team,streak,avg_dist,avg_rank_diff,acquaintance"


class PairContext(Enum):
    TEAMMATE = "teammate"
    OPPONENT = "opponent"


@dataclass(frozen=True)
class PairObservation:
    """One shared match for one pair, in one context.

    `ordinal_a`/`ordinal_b` are the 0-based positions of this match in
    each player's own time-ordered match sequence; `rank_diff` is absent
    in teammate context.
    """

    pair: PairKey
    context: PairContext
    match_id: str
    distance: float
    rank_diff: int | None
    ordinal_a: int
    ordinal_b: int


@dataclass(frozen=True)
class PairFeatures:
    pair: PairKey
    num_matches_opp: int
    num_matches_team: int
    max_consecutive_opp: int
    max_consecutive_team: int
    avg_distance_opp: float | None
    avg_rank_diff_opp: float | None
    acquaintance: bool
    avg_distance_team: float | None
    match_ids: tuple[str, ...]


# Flat per-pair accumulator layout (hot loop avoids attribute access):
# [0] n_team  [1] team dist sum [2] team match ids [3] team run [4] team max run
# [5] team last ordinal a [6] team last ordinal b
# [7] n_opp [8] opp dist sum [9] opp rank-diff sum [10] opp match ids
# [11] opp run [12] opp max run [13] opp last ordinal a [14] opp last ordinal b
def _new_acc() -> list:
    return [0, 0.0, [], 0, 0, -2, -2, 0, 0.0, 0.0, [], 0, 0, -2, -2]


def player_ordinals(d: Dataset) -> dict[PlayerId, dict[str, int]]:
    """Map each player to {match_id: position in their own match sequence}."""
    out: dict[PlayerId, dict[str, int]] = {}
    for m in d.matches:
        for p in m.roster():
            seq = out.setdefault(p, {})
            seq[m.match_id] = len(seq)
    return out


def pair_timeline(d: Dataset, pair: PairKey) -> list[PairObservation]:
    """All shared matches for a pair, both contexts, chronological."""
    a, b = pair
    ordinals = player_ordinals(d)
    out: list[PairObservation] = []
    for m in d.matches:
        placement = {p: t for t in m.teams for p in t.players}
        if a not in placement or b not in placement:
            continue
        ta, tb = placement[a], placement[b]
        ctx = PairContext.TEAMMATE if ta.index == tb.index else PairContext.OPPONENT
        out.append(
            PairObservation(
                pair=pair,
                context=ctx,
                match_id=m.match_id,
                distance=m.landings[a].distance_to(m.landings[b]),
                rank_diff=None if ctx is PairContext.TEAMMATE else abs(ta.rank - tb.rank),
                ordinal_a=ordinals[a][m.match_id],
                ordinal_b=ordinals[b][m.match_id],
            )
        )
    return out


def consecutive_streak(observations: Iterable[PairObservation]) -> int:
    """Longest run of shared matches consecutive in both players' sequences."""
    best = 0
    run = 0
    last_a = last_b = -2
    for obs in sorted(observations, key=lambda o: o.ordinal_a):
        if obs.ordinal_a == last_a + 1 and obs.ordinal_b == last_b + 1:
            run += 1
        else:
            run = 1
        best = max(best, run)
        last_a, last_b = obs.ordinal_a, obs.ordinal_b
    return best


def extract_pairs(
    d: Dataset,
    min_shared: int,
    context: PairContext | None,
    *,
    acq_min_total: int = 3,
    acq_per_context: int = 1,
) -> list[PairFeatures]:
    """Aggregate features for every pair meeting the shared-match threshold.

    `context` selects which shared-match count the threshold applies to;
    None keeps pairs meeting it in either context. Pairs involving a
    player outside `d.active_players` (when set) are skipped. Output is
    sorted by canonical pair key.
    """
    if min_shared < 1:
        raise ValueError("min_shared must be >= 1")
    active = d.active_players
    accs: dict[PairKey, list] = {}
    accs_get = accs.get
    hypot = math.hypot
    next_ordinal: dict[PlayerId, int] = {}

    for m in d.matches:
        mid = m.match_id
        landings = m.landings
        entries = []
        for t in m.teams:
            ti, rank = t.index, t.rank
            for p in t.players:
                seq = next_ordinal.get(p, 0)
                next_ordinal[p] = seq + 1
                if active is not None and p not in active:
                    continue
                pos = landings[p]
                entries.append((p, ti, rank, pos.x, pos.y, seq))
        entries.sort()
        n = len(entries)
        for i in range(n):
            a, team_a, rank_a, ax, ay, oa = entries[i]
            for j in range(i + 1, n):
                b, team_b, rank_b, bx, by, ob = entries[j]
                key = (a, b)  # entries sorted, so already canonical
                acc = accs_get(key)
                if acc is None:
                    acc = accs[key] = _new_acc()
                dist = hypot(ax - bx, ay - by)
                if team_a == team_b:
                    acc[0] += 1
                    acc[1] += dist
                    acc[2].append(mid)
                    run = acc[3] + 1 if (oa == acc[5] + 1 and ob == acc[6] + 1) else 1
                    acc[3] = run
                    if run > acc[4]:
                        acc[4] = run
                    acc[5] = oa
                    acc[6] = ob
                else:
                    acc[7] += 1
                    acc[8] += dist
                    acc[9] += abs(rank_a - rank_b)
                    acc[10].append(mid)
                    run = acc[11] + 1 if (oa == acc[13] + 1 and ob == acc[14] + 1) else 1
                    acc[11] = run
                    if run > acc[12]:
                        acc[12] = run
                    acc[13] = oa
                    acc[14] = ob

    out: list[PairFeatures] = []
    friendships = d.friendships
    for key in sorted(accs):
        acc = accs[key]
        n_team, n_opp = acc[0], acc[7]
        if context is PairContext.OPPONENT:
            keep = n_opp >= min_shared
        elif context is PairContext.TEAMMATE:
            keep = n_team >= min_shared
        else:
            keep = n_opp >= min_shared or n_team >= min_shared
        if not keep:
            continue
        acq = key in friendships or (
            n_team >= acq_per_context
            and n_opp >= acq_per_context
            and n_team + n_opp >= acq_min_total
        )
        if context is PairContext.TEAMMATE:
            ids = tuple(acc[2])
        elif context is PairContext.OPPONENT:
            ids = tuple(acc[10])
        else:
            ids = tuple(sorted(acc[2] + acc[10]))
        out.append(
            PairFeatures(
                pair=key,
                num_matches_opp=n_opp,
                num_matches_team=n_team,
                max_consecutive_opp=acc[12],
                max_consecutive_team=acc[4],
                avg_distance_opp=acc[8] / n_opp if n_opp else None,
                avg_rank_diff_opp=acc[9] / n_opp if n_opp else None,
                acquaintance=acq,
                avg_distance_team=acc[1] / n_team if n_team else None,
                match_ids=ids,
            )
        )
    return out


def acquaintance(
    d: Dataset, pair: PairKey, min_total: int = 3, per_context: int = 1
) -> bool:
    """Friendship, or enough shared matches in both contexts."""
    if pair in d.friendships:
        return True
    a, b = pair
    n_team = n_opp = 0
    for m in d.matches:
        placement = {p: t.index for t in m.teams for p in t.players}
        if a not in placement or b not in placement:
            continue
        if placement[a] == placement[b]:
            n_team += 1
        else:
            n_opp += 1
    return n_team >= per_context and n_opp >= per_context and n_team + n_opp >= min_total


def p_rank_adjacent(team_count: int) -> float:
    """Probability two random teams finish one rank apart: 2/T."""
    if team_count < 2:
        raise DomainError(f"need at least 2 teams, got {team_count}")
    return 2.0 / team_count


def p_rank_adjacent_top(team_count: int, top_slots: int) -> float:
    """Probability two random teams land in the top K slots one rank apart.

    Closed form 2(K-1)(T-2)!/T! = 2(K-1)/(T(T-1)); with T=20, K=10 this
    is 9/190, displayed as 0.047.
    """
    if team_count < 2 or not (2 <= top_slots <= team_count):
        raise DomainError(f"invalid (T={team_count}, K={top_slots})")
    return 2.0 * (top_slots - 1) / (team_count * (team_count - 1))


def binomial_event_prob(n: int, k: int, p: float) -> float:
    """C(n,k) p^k (1-p)^(n-k): chance of k rank-adjacent finishes in n matches."""
    if not (0 <= k <= n):
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"probability out of range: {p}")
    return math.comb(n, k) * p**k * (1.0 - p) ** (n - k)


def write_features_csv(rows: Iterable[PairFeatures], stream: IO[str]) -> None:
    """Opponent-context feature table with the fixed export header."""
    stream.write(FEATURES_CSV_HEADER + "\n")
    for r in rows:
        stream.write(
            f"{r.pair[0]},{r.pair[1]},{r.num_matches_opp},{r.num_matches_team},"
            f"{r.max_consecutive_opp},"
            f"{'' if r.avg_distance_opp is None else repr(r.avg_distance_opp)},"
            f"{'' if r.avg_rank_diff_opp is None else repr(r.avg_rank_diff_opp)},"
            f"{1 if r.acquaintance else 0}\n"
        )
