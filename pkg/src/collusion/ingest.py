"""Match-log and friendship-list parsing, validation, and serialization.

The match log is line-delimited JSON, one match per line:

    {"match_id": "m000001", "start_time": "2025-06-01T00:03:00.000Z",
     "teams": [{"index": 0, "players": ["p1", "p2"], "rank": 3}, ...],
     "landings": {"p1": [12034.5, 71200.0], ...}}

Bad lines are rejected and counted, never fatal: real telemetry is dirty
and the report keeps the rejects auditable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import EmptyDatasetError
from .model import (
    Dataset,
    MatchRecord,
    PairKey,
    PlayerId,
    Position,
    Team,
    Violation,
    build_dataset,
    canonical_pair,
    validate_match,
)

MATCHES_FILENAME = "matches.jsonl"
FRIENDSHIPS_FILENAME = "friendships.csv"


@dataclass
class IngestReport:
    matches_accepted: int = 0
    matches_rejected: int = 0
    violations: list[tuple[str, Violation]] = field(default_factory=list)
    players_seen: int = 0


class _BadLine(Exception):
    def __init__(self, violation: Violation):
        self.violation = violation


def _text_lines(stream: IO[bytes] | IO[str]) -> Iterator[str]:
    first = stream.read(0)
    if isinstance(first, bytes):
        stream = io.TextIOWrapper(stream, encoding="utf-8")
    yield from stream


def parse_timestamp(raw: str) -> datetime:
    """ISO-8601 UTC timestamp; 'Z' suffix accepted on Python 3.10."""
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def _require(obj: dict, key: str, kind: type, match_id: str):
    if key not in obj:
        raise _BadLine(Violation("bad_schema", f"{match_id}: missing field {key!r}"))
    value = obj[key]
    if not isinstance(value, kind):
        raise _BadLine(Violation("bad_schema", f"{match_id}: field {key!r} has wrong type"))
    return value


def _parse_match_obj(obj: dict) -> MatchRecord:
    if not isinstance(obj, dict):
        raise _BadLine(Violation("bad_schema", "line is not a JSON object"))
    match_id = obj.get("match_id")
    if not isinstance(match_id, str) or not match_id:
        raise _BadLine(Violation("bad_schema", "missing or empty match_id"))

    raw_time = _require(obj, "start_time", str, match_id)
    try:
        start = parse_timestamp(raw_time)
    except ValueError:
        raise _BadLine(Violation("bad_schema", f"{match_id}: unparseable start_time {raw_time!r}"))

    teams_raw = _require(obj, "teams", list, match_id)
    teams = []
    for entry in teams_raw:
        if not isinstance(entry, dict):
            raise _BadLine(Violation("bad_schema", f"{match_id}: team entry is not an object"))
        index = _require(entry, "index", int, match_id)
        rank = _require(entry, "rank", int, match_id)
        players = _require(entry, "players", list, match_id)
        if not all(isinstance(p, str) and p for p in players):
            raise _BadLine(Violation("bad_schema", f"{match_id}: bad player id in team {index}"))
        teams.append(Team(index=index, players=tuple(players), rank=rank))

    landings_raw = _require(obj, "landings", dict, match_id)
    landings: dict[PlayerId, Position] = {}
    for pid, coords in landings_raw.items():
        if (
            not isinstance(coords, list)
            or len(coords) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in coords)
        ):
            raise _BadLine(Violation("bad_schema", f"{match_id}: bad landing for {pid}"))
        landings[pid] = Position(float(coords[0]), float(coords[1]))

    return MatchRecord(match_id=match_id, start_time=start, teams=tuple(teams), landings=landings)


def parse_match_log(
    stream: IO[bytes] | IO[str], min_team_size: int = 2
) -> tuple[Dataset, IngestReport]:
    """Parse a line-delimited match log into a Dataset.

    Every syntactically valid, invariant-satisfying match is accepted;
    everything else is rejected with a per-line reason. Raises
    EmptyDatasetError when nothing was accepted.
    """
    report = IngestReport()
    accepted: dict[str, MatchRecord] = {}
    for lineno, line in enumerate(_text_lines(stream), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise _BadLine(Violation("malformed_json", f"line {lineno}: {e.msg}"))
            record = _parse_match_obj(obj)
            if record.match_id in accepted:
                raise _BadLine(
                    Violation("duplicate_match_id", f"{record.match_id}: already seen")
                )
            problems = validate_match(record, min_team_size=min_team_size)
            if problems:
                report.matches_rejected += 1
                report.violations.extend((record.match_id, v) for v in problems)
                continue
        except _BadLine as bad:
            report.matches_rejected += 1
            report.violations.append((f"line:{lineno}", bad.violation))
            continue
        accepted[record.match_id] = record
        report.matches_accepted += 1

    if not accepted:
        raise EmptyDatasetError("no valid matches in input")

    dataset = build_dataset(accepted.values())
    report.players_seen = len({p for m in dataset.matches for p in m.roster()})
    return dataset, report


def parse_friendships(stream: IO[bytes] | IO[str]) -> tuple[set[PairKey], int]:
    """Read a two-column CSV of friend pairs.

    Returns the canonicalized, de-duplicated pair set and the number of
    rejected rows (self-pairs and malformed rows).
    """
    pairs: set[PairKey] = set()
    rejected = 0
    reader = csv.reader(_text_lines(stream))
    for row in reader:
        cells = [c.strip() for c in row if c.strip()]
        if not cells:
            continue
        if cells == ["player_a", "player_b"]:  # tolerate an optional header
            continue
        if len(cells) != 2 or cells[0] == cells[1]:
            rejected += 1
            continue
        pairs.add(canonical_pair(cells[0], cells[1]))
    return pairs, rejected


def filter_active_players(d: Dataset, min_matches: int) -> Dataset:
    """Restrict pair enumeration to players with >= min_matches appearances.

    Matches are kept as-is; only the active-player set changes.
    """
    if min_matches < 1:
        raise ValueError("min_matches must be >= 1")
    counts: dict[PlayerId, int] = {}
    for m in d.matches:
        for p in m.roster():
            counts[p] = counts.get(p, 0) + 1
    active = frozenset(p for p, n in counts.items() if n >= min_matches)
    return Dataset(matches=d.matches, friendships=d.friendships, active_players=active)


def match_to_obj(m: MatchRecord) -> dict:
    return {
        "match_id": m.match_id,
        "start_time": format_timestamp(m.start_time),
        "teams": [
            {"index": t.index, "players": list(t.players), "rank": t.rank}
            for t in sorted(m.teams, key=lambda t: t.index)
        ],
        "landings": {p: [m.landings[p].x, m.landings[p].y] for p in sorted(m.landings)},
    }


def write_match_log(d: Dataset, stream: IO[str]) -> None:
    for m in d.matches:
        stream.write(json.dumps(match_to_obj(m), separators=(",", ":")))
        stream.write("\n")


def write_friendships(pairs: Iterable[PairKey], stream: IO[str]) -> None:
    for a, b in sorted(pairs):
        stream.write(f"{a},{b}\n")


def load_dataset(data_dir: str | Path, min_team_size: int = 2) -> tuple[Dataset, IngestReport]:
    """Load matches.jsonl (+ optional friendships.csv) from a directory."""
    data_dir = Path(data_dir)
    matches_path = data_dir / MATCHES_FILENAME
    if not matches_path.exists():
        raise EmptyDatasetError(f"no match log found at {matches_path}")
    with open(matches_path, "r", encoding="utf-8") as fh:
        dataset, report = parse_match_log(fh, min_team_size=min_team_size)

    friends_path = data_dir / FRIENDSHIPS_FILENAME
    if friends_path.exists():
        with open(friends_path, "r", encoding="utf-8") as fh:
            friends, _ = parse_friendships(fh)
        dataset = Dataset(
            matches=dataset.matches,
            friendships=frozenset(friends),
            active_players=dataset.active_players,
        )
    return dataset, report
