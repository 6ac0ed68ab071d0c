"""Review service: detection results, pair evidence, and verdicts over HTTP.

All state is loaded at startup: one detection report, one dataset (for
timelines, ego networks, and the stats panel), and an append-only
verdict log that is replayed from byte 0 to rebuild reviewer state.
Verdict writes are serialized and fsynced before the response, so a
kill -9 never loses an acknowledged verdict.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import detect, graph
from .errors import InvalidPairError, UnknownPlayerError
from .features import PairContext, pair_timeline
from .ingest import format_timestamp, load_dataset, parse_timestamp
from .model import Dataset, PairKey, canonical_pair

API_PREFIX = "/api/v1"


class VerdictStatus(Enum):
    CONFIRMED = "confirmed"
    REJECTED = "rejected"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    pair: PairKey
    status: VerdictStatus
    notes: str
    reviewer: str
    timestamp: datetime

    def to_obj(self) -> dict:
        return {
            "pair_a": self.pair[0],
            "pair_b": self.pair[1],
            "status": self.status.value,
            "notes": self.notes,
            "reviewer": self.reviewer,
            "timestamp": format_timestamp(self.timestamp),
        }


class VerdictStore:
    """Append-only JSONL log; latest verdict per pair wins, history kept."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._history: dict[PairKey, list[Verdict]] = {}
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    self._remember(self._from_obj(json.loads(line)))

    @staticmethod
    def _from_obj(obj: dict) -> Verdict:
        return Verdict(
            pair=canonical_pair(obj["pair_a"], obj["pair_b"]),
            status=VerdictStatus(obj["status"]),
            notes=obj.get("notes", ""),
            reviewer=obj.get("reviewer", ""),
            timestamp=parse_timestamp(obj["timestamp"]),
        )

    def _remember(self, v: Verdict) -> None:
        self._history.setdefault(v.pair, []).append(v)

    def record(self, v: Verdict) -> tuple[Verdict, bool]:
        """Append a verdict; identical consecutive submissions are no-ops."""
        with self._lock:
            latest = self.latest(v.pair)
            if (
                latest is not None
                and latest.status == v.status
                and latest.notes == v.notes
                and latest.reviewer == v.reviewer
            ):
                return latest, False
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(v.to_obj(), separators=(",", ":")) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._remember(v)
            return v, True

    def latest(self, pair: PairKey) -> Verdict | None:
        history = self._history.get(pair)
        return history[-1] if history else None

    def history(self, pair: PairKey) -> list[Verdict]:
        return list(self._history.get(pair, ()))

    def tallies(self) -> dict[str, int]:
        counts = {s.value: 0 for s in VerdictStatus}
        for history in self._history.values():
            counts[history[-1].status.value] += 1
        counts["total"] = sum(counts.values())
        return counts


class VerdictIn(BaseModel):
    status: str
    notes: str = ""
    reviewer: str = ""


def _entry(row: detect.ReportRow, verdict: Verdict | None) -> dict:
    return {
        "pair_a": row.pair[0],
        "pair_b": row.pair[1],
        "rank": row.rank,
        "score": row.score,
        "acquaintance": row.acquaintance,
        "avg_rank_diff": row.avg_rank_diff,
        "max_consecutive": row.max_consecutive,
        "avg_distance": row.avg_distance,
        "n_matches": row.n_matches,
        "dominant_feature": row.dominant_feature,
        "verdict": verdict.to_obj() if verdict else None,
    }


def create_app(
    report_path: str | Path | None = None,
    data_path: str | Path | None = None,
    verdict_log_path: str | Path = "verdicts.jsonl",
    graph_min_matches: int = 3,
    team_count: int = graph.DEFAULT_TEAM_COUNT,
) -> FastAPI:
    rows: list[detect.ReportRow] | None = None
    by_pair: dict[PairKey, detect.ReportRow] = {}
    if report_path is not None and Path(report_path).exists():
        rows = detect.read_report(report_path)
        by_pair = {r.pair: r for r in rows}

    dataset: Dataset | None = None
    social = None
    summary = None
    if data_path is not None:
        dataset, _ = load_dataset(data_path)
        social = graph.build_graph_from_dataset(
            dataset, min_matches=graph_min_matches, team_count=team_count
        )
        summary = detect.summarize(dataset)

    verdicts = VerdictStore(verdict_log_path)

    app = FastAPI(title="collusion review service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def require_report() -> list[detect.ReportRow]:
        if rows is None:
            raise HTTPException(status_code=409, detail="no detection report loaded")
        return rows

    def require_dataset() -> Dataset:
        if dataset is None:
            raise HTTPException(status_code=409, detail="no dataset loaded")
        return dataset

    def resolve_pair(a: str, b: str) -> PairKey:
        try:
            return canonical_pair(a, b)
        except InvalidPairError:
            raise HTTPException(status_code=404, detail="not a valid pair")

    @app.get(API_PREFIX + "/pairs")
    def list_pairs(
        status: str = Query(default=""),
        limit: int = Query(default=50, ge=1, le=1000),
        offset: int = Query(default=0, ge=0),
    ):
        report = require_report()
        allowed = {"", "unreviewed"} | {s.value for s in VerdictStatus}
        if status not in allowed:
            raise HTTPException(status_code=400, detail=f"unknown status filter {status!r}")
        entries = []
        for row in report:  # already sorted by rank = ascending score
            latest = verdicts.latest(row.pair)
            if status == "unreviewed" and latest is not None:
                continue
            if status not in ("", "unreviewed") and (
                latest is None or latest.status.value != status
            ):
                continue
            entries.append(_entry(row, latest))
        page = entries[offset : offset + limit]
        return {"total": len(entries), "limit": limit, "offset": offset, "entries": page}

    @app.get(API_PREFIX + "/pairs/{a}/{b}")
    def pair_detail(a: str, b: str):
        require_report()
        d = require_dataset()
        pair = resolve_pair(a, b)
        row = by_pair.get(pair)
        if row is None:
            raise HTTPException(status_code=404, detail="pair not in report")
        timeline = []
        teammate_matches = []
        placements = {m.match_id: m for m in d.matches}
        for obs in pair_timeline(d, pair):
            if obs.context is PairContext.TEAMMATE:
                teammate_matches.append(obs.match_id)
                continue
            match = placements[obs.match_id]
            ranks = {p: t.rank for t in match.teams for p in t.players}
            timeline.append(
                {
                    "match_id": obs.match_id,
                    "start_time": format_timestamp(match.start_time),
                    "distance": obs.distance,
                    "rank_a": ranks[pair[0]],
                    "rank_b": ranks[pair[1]],
                    "rank_diff": obs.rank_diff,
                    "ordinal_a": obs.ordinal_a,
                    "ordinal_b": obs.ordinal_b,
                }
            )
        return {
            "pair_a": pair[0],
            "pair_b": pair[1],
            "rank": row.rank,
            "score": row.score,
            "features": _entry(row, None),
            "timeline": timeline,
            "teammate_matches": teammate_matches,
            "verdict": v.to_obj() if (v := verdicts.latest(pair)) else None,
            "verdicts": [h.to_obj() for h in verdicts.history(pair)],
        }

    @app.get(API_PREFIX + "/pairs/{a}/{b}/network")
    def pair_network(a: str, b: str, radius: int = Query(default=1, ge=0, le=6)):
        require_dataset()
        pair = resolve_pair(a, b)
        try:
            ego = graph.ego_network(social, pair, radius=radius)
        except UnknownPlayerError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return graph.graph_to_dict(ego)

    @app.post(API_PREFIX + "/pairs/{a}/{b}/verdict")
    def post_verdict(a: str, b: str, body: VerdictIn):
        require_report()
        pair = resolve_pair(a, b)
        if pair not in by_pair:
            raise HTTPException(status_code=404, detail="pair not in report")
        try:
            status = VerdictStatus(body.status)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"invalid status {body.status!r}")
        verdict = Verdict(
            pair=pair,
            status=status,
            notes=body.notes,
            reviewer=body.reviewer,
            timestamp=datetime.now(timezone.utc),
        )
        stored, appended = verdicts.record(verdict)
        return {"verdict": stored.to_obj(), "appended": appended}

    @app.get(API_PREFIX + "/stats")
    def stats():
        return {
            "summary": summary.to_dict() if summary else None,
            "verdicts": verdicts.tallies(),
        }

    return app
