"""End-to-end detection pipeline and evaluation against planted truth.

ingest -> active-player filter -> opponent-pair features -> isolation
forest -> ranked report. Flagging is threshold-mode driven; the default
(score_zero) flags every negative score, top_k mirrors the manual
triage practice of reviewing the k lowest-scored pairs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from . import iforest
from .errors import ConfigError, DomainError, EmptyAfterFilterError
from .features import PairContext, PairFeatures, extract_pairs
from .ingest import filter_active_players
from .model import Dataset, PairKey
from .simulate import GroundTruth

# Detector input columns, fixed order.
FEATURE_NAMES = ("n_matches", "max_consecutive", "avg_distance", "avg_rank_diff", "acquaintance")

REPORT_CSV_HEADER = (
    "pair_a,pair_b,rank,acquaintance,rank_diff,max_consec,proximity,n_matches,score,dominant_feature"
)


class ThresholdMode(Enum):
    SCORE_ZERO = "score_zero"
    TOP_K = "top_k"
    CONTAMINATION = "contamination"


@dataclass(frozen=True)
class DetectConfig:
    min_shared_matches: int = 5
    min_player_matches: int = 3
    forest: iforest.ForestParams = iforest.ForestParams()
    threshold_mode: ThresholdMode = ThresholdMode.SCORE_ZERO
    threshold_value: float = 0.0
    scale_features: bool = True

    def __post_init__(self):
        if self.threshold_mode is not ThresholdMode.SCORE_ZERO and self.threshold_value <= 0:
            raise ConfigError(f"threshold_value must be > 0 for {self.threshold_mode.value}")
        if (
            self.threshold_mode is ThresholdMode.CONTAMINATION
            and self.threshold_value > 1.0
        ):
            raise ConfigError("contamination must lie in (0, 1]")


@dataclass(frozen=True)
class FlaggedPair:
    pair: PairKey
    score: float
    features: PairFeatures
    rank_in_report: int
    dominant_feature: str


@dataclass(frozen=True)
class EvalResult:
    recall_at_k: float
    precision_at_k: float
    planted_found: int
    k: int


def feature_matrix(rows: Sequence[PairFeatures]) -> np.ndarray:
    """Stack rows into the detector's fixed-order feature matrix."""
    out = np.empty((len(rows), len(FEATURE_NAMES)), dtype=float)
    for i, r in enumerate(rows):
        out[i] = (
            r.num_matches_opp,
            r.max_consecutive_opp,
            r.avg_distance_opp if r.avg_distance_opp is not None else 0.0,
            r.avg_rank_diff_opp if r.avg_rank_diff_opp is not None else 0.0,
            1.0 if r.acquaintance else 0.0,
        )
    return out


def score_pairs(
    d: Dataset, cfg: DetectConfig
) -> tuple[list[PairFeatures], np.ndarray, iforest.ForestModel]:
    """Score every qualifying opponent pair; returns rows, scores, model."""
    filtered = filter_active_players(d, cfg.min_player_matches)
    if filtered.active_players is not None and not filtered.active_players:
        raise EmptyAfterFilterError(
            "min_player_matches",
            f"no player has >= {cfg.min_player_matches} matches",
        )
    rows = extract_pairs(filtered, cfg.min_shared_matches, PairContext.OPPONENT)
    if not rows:
        raise EmptyAfterFilterError(
            "min_shared_matches",
            f"no opponent pair shares >= {cfg.min_shared_matches} matches",
        )
    matrix = feature_matrix(rows)
    model = iforest.fit(matrix, cfg.forest, scale=cfg.scale_features)
    scores = iforest.score_batch(model, matrix)
    return rows, scores, model


def _dominant_features(matrix: np.ndarray) -> list[str]:
    """Per row, the feature deviating most (min-max scaled) from the median."""
    lo = matrix.min(axis=0)
    hi = matrix.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    scaled = (matrix - lo) / span
    med = np.median(scaled, axis=0)
    picks = np.abs(scaled - med).argmax(axis=1)
    return [FEATURE_NAMES[j] for j in picks]


def flag_pairs(
    rows: Sequence[PairFeatures], scores: np.ndarray, cfg: DetectConfig
) -> list[FlaggedPair]:
    """Rank scored pairs ascending (most anomalous first) and apply the threshold.

    Ties break by pair key, so the report is deterministic for a fixed
    forest seed.
    """
    dominant = _dominant_features(feature_matrix(rows))
    order = sorted(range(len(rows)), key=lambda i: (scores[i], rows[i].pair))

    n = len(order)
    if cfg.threshold_mode is ThresholdMode.SCORE_ZERO:
        flagged = [i for i in order if scores[i] < 0.0]
    elif cfg.threshold_mode is ThresholdMode.TOP_K:
        flagged = order[: min(n, int(cfg.threshold_value))]
    else:
        flagged = order[: min(n, math.ceil(cfg.threshold_value * n))]

    return [
        FlaggedPair(
            pair=rows[i].pair,
            score=float(scores[i]),
            features=rows[i],
            rank_in_report=rank,
            dominant_feature=dominant[i],
        )
        for rank, i in enumerate(flagged, start=1)
    ]


def run_detection(d: Dataset, cfg: DetectConfig) -> list[FlaggedPair]:
    """Score every qualifying opponent pair and return the flagged prefix."""
    rows, scores, _ = score_pairs(d, cfg)
    return flag_pairs(rows, scores, cfg)


def evaluate(report: Sequence, gt: GroundTruth, k: int) -> EvalResult:
    """recall@k and precision@k of the report against planted pairs."""
    if k < 1 or k > len(report):
        raise DomainError(f"k={k} outside 1..{len(report)}")
    top = {entry.pair for entry in report[:k]}
    planted = gt.colluding_pairs
    hit = len(top & planted)
    return EvalResult(
        recall_at_k=hit / len(planted) if planted else 0.0,
        precision_at_k=hit / k,
        planted_found=hit,
        k=k,
    )


@dataclass(frozen=True)
class ContextSummary:
    pairs: int
    avg_matches: float
    max_matches: int
    avg_distance: float
    streak3_pairs: int


@dataclass(frozen=True)
class DatasetSummary:
    players: int
    matches: int
    teammates: ContextSummary
    opponents: ContextSummary
    avg_rank_diff_opp: float
    acquaintances: int

    def to_dict(self) -> dict:
        def ctx(c: ContextSummary) -> dict:
            return {
                "pairs": c.pairs,
                "avg_matches": c.avg_matches,
                "max_matches": c.max_matches,
                "avg_distance": c.avg_distance,
                "pairs_with_3plus_consecutive": c.streak3_pairs,
            }

        return {
            "players": self.players,
            "matches": self.matches,
            "teammates": ctx(self.teammates),
            "opponents": ctx(self.opponents),
            "avg_rank_diff_opp": self.avg_rank_diff_opp,
            "acquaintances": self.acquaintances,
        }


def summarize(d: Dataset) -> DatasetSummary:
    """Per-context gameplay statistics panel for a dataset."""
    rows = extract_pairs(d, 1, None)
    team_rows = [r for r in rows if r.num_matches_team >= 1]
    opp_rows = [r for r in rows if r.num_matches_opp >= 1]

    def ctx(selected: list[PairFeatures], team_side: bool) -> ContextSummary:
        if not selected:
            return ContextSummary(0, 0.0, 0, 0.0, 0)
        if team_side:
            counts = [r.num_matches_team for r in selected]
            dists = [r.avg_distance_team for r in selected]
            streaks = [r.max_consecutive_team for r in selected]
        else:
            counts = [r.num_matches_opp for r in selected]
            dists = [r.avg_distance_opp for r in selected]
            streaks = [r.max_consecutive_opp for r in selected]
        return ContextSummary(
            pairs=len(selected),
            avg_matches=sum(counts) / len(selected),
            max_matches=max(counts),
            avg_distance=sum(dists) / len(selected),
            streak3_pairs=sum(1 for s in streaks if s >= 3),
        )

    players = {p for m in d.matches for p in m.roster()}
    rank_diffs = [r.avg_rank_diff_opp for r in opp_rows]
    return DatasetSummary(
        players=len(players),
        matches=len(d.matches),
        teammates=ctx(team_rows, True),
        opponents=ctx(opp_rows, False),
        avg_rank_diff_opp=sum(rank_diffs) / len(rank_diffs) if rank_diffs else 0.0,
        acquaintances=sum(1 for r in rows if r.acquaintance),
    )


def write_report(flagged: Iterable[FlaggedPair], stream: IO[str]) -> None:
    stream.write(REPORT_CSV_HEADER + "\n")
    for f in flagged:
        r = f.features
        stream.write(
            f"{f.pair[0]},{f.pair[1]},{f.rank_in_report},"
            f"{'true' if r.acquaintance else 'false'},"
            f"{repr(r.avg_rank_diff_opp)},{r.max_consecutive_opp},"
            f"{repr(r.avg_distance_opp)},{r.num_matches_opp},"
            f"{repr(f.score)},{f.dominant_feature}\n"
        )


@dataclass(frozen=True)
class ReportRow:
    pair: PairKey
    rank: int
    acquaintance: bool
    avg_rank_diff: float
    max_consecutive: int
    avg_distance: float
    n_matches: int
    score: float
    dominant_feature: str


def read_report(path: str | Path) -> list[ReportRow]:
    out: list[ReportRow] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(
                ReportRow(
                    pair=(row["pair_a"], row["pair_b"]),
                    rank=int(row["rank"]),
                    acquaintance=row["acquaintance"] == "true",
                    avg_rank_diff=float(row["rank_diff"]),
                    max_consecutive=int(row["max_consec"]),
                    avg_distance=float(row["proximity"]),
                    n_matches=int(row["n_matches"]),
                    score=float(row["score"]),
                    dominant_feature=row["dominant_feature"],
                )
            )
    out.sort(key=lambda r: r.rank)
    return out


def format_table2_block(flagged: Sequence[FlaggedPair], limit: int = 5) -> str:
    """Human-readable top block; scores printed with 3 decimals."""
    lines = [
        f"{'pair':<24} {'acq':>5} {'rank_diff':>10} {'streak':>7} "
        f"{'proximity':>12} {'n':>4} {'score':>8}"
    ]
    for f in flagged[:limit]:
        r = f.features
        lines.append(
            f"{f.pair[0] + ',' + f.pair[1]:<24} {'TRUE' if r.acquaintance else 'FALSE':>5} "
            f"{r.avg_rank_diff_opp:>10.2f} {r.max_consecutive_opp:>7d} "
            f"{r.avg_distance_opp:>12.2f} {r.num_matches_opp:>4d} {f.score:>8.3f}"
        )
    return "\n".join(lines)
