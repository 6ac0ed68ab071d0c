"""Canonical domain types: players, teams, matches, datasets.

Everything here is an immutable value object; identifier and unit
conventions for the rest of the package live in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, NamedTuple

from .errors import InvalidPairError

# A player id is an opaque, non-empty, case-sensitive string.
PlayerId = str

# Unordered player pair in canonical (lexicographic) order.
PairKey = tuple[PlayerId, PlayerId]


class TeamRef(NamedTuple):
    """Identity of one team; teams exist only relative to a match."""

    match_id: str
    team_index: int


@dataclass(frozen=True)
class Position:
    """Starting ("landing") position in game units."""

    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Team:
    index: int
    players: tuple[PlayerId, ...]
    rank: int


@dataclass(frozen=True)
class MatchRecord:
    """One match: rosters, final ranks, and per-player landing positions.

    The first team eliminated in a T-team match ranks T-th, so final
    ranks are a permutation of 1..T.
    """

    match_id: str
    start_time: datetime
    teams: tuple[Team, ...]
    landings: dict[PlayerId, Position]

    def roster(self) -> list[PlayerId]:
        return [p for t in self.teams for p in t.players]


@dataclass(frozen=True)
class Dataset:
    """Matches sorted by (start_time, match_id) plus platform friendships.

    `active_players` is None until `filter_active_players` narrows the
    set of players considered for pair enumeration; matches are never
    dropped by that filter.
    """

    matches: tuple[MatchRecord, ...]
    friendships: frozenset[PairKey] = frozenset()
    active_players: frozenset[PlayerId] | None = None


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


def canonical_pair(a: PlayerId, b: PlayerId) -> PairKey:
    """Order two distinct player ids lexicographically."""
    if a == b:
        raise InvalidPairError(f"self-pair {a!r} is not a valid player pair")
    return (a, b) if a < b else (b, a)


def build_dataset(
    matches: Iterable[MatchRecord],
    friendships: Iterable[PairKey] = (),
    active_players: Iterable[PlayerId] | None = None,
) -> Dataset:
    """Assemble a Dataset with the canonical sort order.

    Ties on start_time are broken by match_id so the order is total.
    """
    ordered = tuple(sorted(matches, key=lambda m: (m.start_time, m.match_id)))
    ids = [m.match_id for m in ordered]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate match_id in dataset")
    return Dataset(
        matches=ordered,
        friendships=frozenset(friendships),
        active_players=None if active_players is None else frozenset(active_players),
    )


def validate_match(m: MatchRecord, min_team_size: int = 2) -> list[Violation]:
    """Check every MatchRecord invariant; violations are data, not errors."""
    out: list[Violation] = []
    if not m.teams:
        out.append(Violation("no_teams", f"{m.match_id}: match has no teams"))
        return out

    seen: set[PlayerId] = set()
    for t in m.teams:
        if len(t.players) < min_team_size:
            out.append(
                Violation(
                    "team_too_small",
                    f"{m.match_id}: team {t.index} has {len(t.players)} players "
                    f"(minimum {min_team_size})",
                )
            )
        for p in t.players:
            if p in seen:
                out.append(
                    Violation("duplicate_roster", f"{m.match_id}: {p} appears on two teams")
                )
            seen.add(p)

    indices = [t.index for t in m.teams]
    if len(set(indices)) != len(indices):
        out.append(Violation("duplicate_team_index", f"{m.match_id}: team indices not unique"))

    ranks = sorted(t.rank for t in m.teams)
    if ranks != list(range(1, len(m.teams) + 1)):
        if len(set(ranks)) != len(ranks):
            out.append(
                Violation("duplicate_rank", f"{m.match_id}: ranks {ranks} contain duplicates")
            )
        else:
            out.append(
                Violation(
                    "rank_out_of_range",
                    f"{m.match_id}: ranks {ranks} are not a permutation of 1..{len(m.teams)}",
                )
            )

    for p in seen:
        pos = m.landings.get(p)
        if pos is None:
            out.append(Violation("missing_landing", f"{m.match_id}: no landing for {p}"))
        elif not (math.isfinite(pos.x) and math.isfinite(pos.y)):
            out.append(Violation("non_finite_landing", f"{m.match_id}: landing for {p} not finite"))

    return out


def utc_ms(dt: datetime) -> datetime:
    """Normalize a datetime to UTC with millisecond precision."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=(dt.microsecond // 1000) * 1000)
