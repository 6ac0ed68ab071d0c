"""Shared fixtures: tiny hand-built matches and datasets."""

from datetime import datetime, timedelta, timezone

import pytest

from collusion.model import MatchRecord, Position, Team, build_dataset

T0 = datetime(2025, 6, 1, tzinfo=timezone.utc)


def make_match(match_id, teams, landings=None, start=None, minute=None):
    """Build a MatchRecord from [(team_index, [players], rank), ...].

    Landings default to distinct points on a diagonal so every distance
    is well defined.
    """
    if start is None:
        start = T0 + timedelta(minutes=minute if minute is not None else int(match_id.strip("m") or 0))
    team_objs = tuple(Team(index=i, players=tuple(ps), rank=r) for i, ps, r in teams)
    if landings is None:
        landings = {}
        k = 0
        for t in team_objs:
            for p in t.players:
                landings[p] = Position(1000.0 * k, 500.0 * k)
                k += 1
    else:
        landings = {p: Position(x, y) for p, (x, y) in landings.items()}
    return MatchRecord(match_id=match_id, start_time=start, teams=team_objs, landings=landings)


def dataset_from(specs, friendships=()):
    """specs: list of (match_id, teams, landings|None); minutes follow list order."""
    matches = [
        make_match(mid, teams, landings=landings, minute=i)
        for i, (mid, teams, landings) in enumerate(specs)
    ]
    return build_dataset(matches, friendships=friendships)


@pytest.fixture
def triangle_dataset():
    """p1/p2 teammates 3x, p1/p3 and p2/p3 opponents; p4 isolated-ish."""
    specs = []
    for i in range(3):
        specs.append(
            (
                f"m{i}",
                [(0, ["p1", "p2"], 1), (1, ["p3", "p4"], 2)],
                None,
            )
        )
    return dataset_from(specs)
