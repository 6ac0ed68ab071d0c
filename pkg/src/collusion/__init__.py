"""Collusion detection toolkit for team-based multiplayer telemetry."""

from .detect import (
    DetectConfig,
    EvalResult,
    FlaggedPair,
    ThresholdMode,
    evaluate,
    run_detection,
    summarize,
)
from .features import (
    PairContext,
    PairFeatures,
    binomial_event_prob,
    consecutive_streak,
    extract_pairs,
    p_rank_adjacent,
    p_rank_adjacent_top,
)
from .graph import SocialEdge, SocialGraph, build_graph_from_dataset, clusters, ego_network
from .iforest import ForestModel, ForestParams, fit, score
from .ingest import filter_active_players, load_dataset, parse_friendships, parse_match_log
from .model import Dataset, MatchRecord, PairKey, Position, Team, canonical_pair, validate_match
from .simulate import GroundTruth, SimConfig, generate, write_dataset

__version__ = "0.1.0"

__all__ = [
    "DetectConfig",
    "Dataset",
    "EvalResult",
    "FlaggedPair",
    "ForestModel",
    "ForestParams",
    "GroundTruth",
    "MatchRecord",
    "PairContext",
    "PairFeatures",
    "PairKey",
    "Position",
    "SimConfig",
    "SocialEdge",
    "SocialGraph",
    "Team",
    "ThresholdMode",
    "binomial_event_prob",
    "build_graph_from_dataset",
    "canonical_pair",
    "clusters",
    "consecutive_streak",
    "ego_network",
    "evaluate",
    "extract_pairs",
    "filter_active_players",
    "fit",
    "generate",
    "load_dataset",
    "p_rank_adjacent",
    "p_rank_adjacent_top",
    "parse_friendships",
    "parse_match_log",
    "run_detection",
    "score",
    "summarize",
    "validate_match",
    "write_dataset",
]
