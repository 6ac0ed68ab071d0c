"""Isolation forest implemented from scratch.

Each tree recursively partitions a subsample by picking a random feature
with spread and a uniform split strictly between that feature's
node-local min and max; points isolated by short average paths are
anomalous. Scores follow the convention that negative values mark
outliers: score = 0.5 - 2^(-E[path]/c(psi)).

Exact harmonic numbers back the c() normalizer for small sizes, where
the usual ln approximation is poor and which occur at deep external
nodes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    CorruptModelError,
    DomainError,
    EmptyDataError,
    NonFiniteFeatureError,
    VersionMismatchError,
    WidthMismatchError,
)

FORMAT_VERSION = 1

_EULER_GAMMA = 0.5772156649
_EXACT_HARMONIC_LIMIT = 1000
_harmonic_table: np.ndarray | None = None


def _harmonic(i: int) -> float:
    """H(i), exact cumulative sum up to 1000, asymptotic beyond."""
    global _harmonic_table
    if i <= 0:
        return 0.0
    if i <= _EXACT_HARMONIC_LIMIT:
        if _harmonic_table is None:
            _harmonic_table = np.cumsum(1.0 / np.arange(1, _EXACT_HARMONIC_LIMIT + 1))
        return float(_harmonic_table[i - 1])
    return math.log(i) + _EULER_GAMMA + 1.0 / (2.0 * i)


def c(n: int) -> float:
    """Average unsuccessful-search path length for n points; c(1) = 0."""
    if n <= 1:
        return 0.0
    if n == 2:
        return 1.0
    return 2.0 * _harmonic(n - 1) - 2.0 * (n - 1) / n


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    subsample: int = 1000
    seed: int = 0
    max_depth: int | None = None  # None -> ceil(log2(effective subsample))

    def __post_init__(self):
        if self.n_trees < 1:
            raise DomainError("n_trees must be >= 1")
        if self.subsample < 2:
            raise DomainError("subsample must be >= 2")
        if self.max_depth is not None and self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")


@dataclass(frozen=True)
class InternalNode:
    feature: int
    split: float
    left: "IsoNode"
    right: "IsoNode"


@dataclass(frozen=True)
class ExternalNode:
    size: int


IsoNode = Union[InternalNode, ExternalNode]


@dataclass(frozen=True)
class ForestModel:
    params: ForestParams
    trees: tuple[IsoNode, ...]
    feature_ranges: tuple[tuple[float, float], ...]
    n_features: int
    psi: int  # per-tree training size
    max_depth: int
    scaled: bool


def _grow(rng: np.random.Generator, x: np.ndarray, depth: int, limit: int) -> IsoNode:
    n = x.shape[0]
    if n <= 1 or depth >= limit:
        return ExternalNode(size=n)
    mins = x.min(axis=0)
    maxs = x.max(axis=0)
    spread = np.flatnonzero(maxs > mins)
    if spread.size == 0:
        return ExternalNode(size=n)
    j = int(spread[rng.integers(spread.size)])
    split = float(rng.uniform(mins[j], maxs[j]))
    if not (mins[j] < split < maxs[j]):  # degenerate float range
        return ExternalNode(size=n)
    mask = x[:, j] < split
    return InternalNode(
        feature=j,
        split=split,
        left=_grow(rng, x[mask], depth + 1, limit),
        right=_grow(rng, x[~mask], depth + 1, limit),
    )


def _apply_scaling(x: np.ndarray, ranges: Sequence[tuple[float, float]]) -> np.ndarray:
    out = np.array(x, dtype=float, copy=True)
    for j, (lo, hi) in enumerate(ranges):
        if hi > lo:
            out[..., j] = (out[..., j] - lo) / (hi - lo)
        else:
            out[..., j] = 0.0
    return out


def fit(data, params: ForestParams, scale: bool = True) -> ForestModel:
    """Train an isolation forest.

    Args:
        data: (n_rows, n_features) matrix; n_rows >= 2, all finite.
        params: tree count, subsample size, seed, optional depth cap.
        scale: min-max scale features internally (ranges are recorded on
            the model and applied again at scoring time).

    Each tree gets its own deterministic RNG derived from (seed, index),
    draws a without-replacement subsample of min(subsample, n_rows)
    rows, and stops at the depth cap, at single-point nodes, or when no
    feature has spread.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise EmptyDataError("need a 2-D matrix with at least 2 rows")
    if not np.isfinite(x).all():
        raise NonFiniteFeatureError("feature matrix contains NaN or infinity")
    n, n_features = x.shape
    ranges = tuple((float(lo), float(hi)) for lo, hi in zip(x.min(axis=0), x.max(axis=0)))
    if scale:
        x = _apply_scaling(x, ranges)

    psi = min(params.subsample, n)
    limit = params.max_depth if params.max_depth is not None else max(1, math.ceil(math.log2(psi)))

    trees = []
    for child in np.random.SeedSequence(params.seed).spawn(params.n_trees):
        rng = np.random.default_rng(child)
        idx = rng.choice(n, size=psi, replace=False)
        trees.append(_grow(rng, x[idx], 0, limit))

    return ForestModel(
        params=params,
        trees=tuple(trees),
        feature_ranges=ranges,
        n_features=n_features,
        psi=psi,
        max_depth=limit,
        scaled=scale,
    )


def path_length(tree: IsoNode, x) -> float:
    """Edges from the root to x's external node, plus c(size) there."""
    vec = np.asarray(x, dtype=float).ravel()
    node = tree
    edges = 0
    while isinstance(node, InternalNode):
        if node.feature >= vec.shape[0]:
            raise WidthMismatchError(
                f"vector of width {vec.shape[0]} too narrow for feature {node.feature}"
            )
        node = node.left if vec[node.feature] < node.split else node.right
        edges += 1
    return edges + c(node.size)


def score_from_mean_path(mean_path: float, psi: int) -> float:
    """0.5 - 2^(-E/c(psi)); zero exactly when E equals c(psi)."""
    return 0.5 - 2.0 ** (-mean_path / c(psi))


def _tree_paths(tree: IsoNode, x: np.ndarray, out: np.ndarray) -> None:
    """Accumulate path lengths for all rows of x by one shared descent."""
    stack: list[tuple[IsoNode, np.ndarray, int]] = [(tree, np.arange(x.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        if isinstance(node, ExternalNode):
            out[idx] += depth + c(node.size)
            continue
        mask = x[idx, node.feature] < node.split
        stack.append((node.left, idx[mask], depth + 1))
        stack.append((node.right, idx[~mask], depth + 1))


def score_batch(model: ForestModel, data) -> np.ndarray:
    """Anomaly scores for every row; negative values mark outliers."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise WidthMismatchError(f"expected width {model.n_features}, got {x.shape}")
    if model.scaled:
        x = _apply_scaling(x, model.feature_ranges)
    totals = np.zeros(x.shape[0])
    for tree in model.trees:
        _tree_paths(tree, x, totals)
    cn = c(model.psi)
    return 0.5 - np.exp2(-(totals / len(model.trees)) / cn)


def score(model: ForestModel, x) -> float:
    """Anomaly score in (-0.5, 0.5]; negative values mark outliers."""
    return float(score_batch(model, np.asarray(x, dtype=float).reshape(1, -1))[0])


def _node_to_obj(node: IsoNode) -> list:
    if isinstance(node, ExternalNode):
        return [node.size]
    return [node.feature, node.split, _node_to_obj(node.left), _node_to_obj(node.right)]


def _node_from_obj(obj) -> IsoNode:
    if not isinstance(obj, list):
        raise CorruptModelError("tree node is not an array")
    if len(obj) == 1:
        if not isinstance(obj[0], int) or obj[0] < 0:
            raise CorruptModelError("bad external node")
        return ExternalNode(size=obj[0])
    if len(obj) == 4:
        feature, split, left, right = obj
        if not isinstance(feature, int) or not isinstance(split, (int, float)):
            raise CorruptModelError("bad internal node")
        return InternalNode(
            feature=feature,
            split=float(split),
            left=_node_from_obj(left),
            right=_node_from_obj(right),
        )
    raise CorruptModelError(f"tree node of arity {len(obj)}")


def serialize(model: ForestModel) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "params": {
            "n_trees": model.params.n_trees,
            "subsample": model.params.subsample,
            "seed": model.params.seed,
            "max_depth": model.params.max_depth,
        },
        "n_features": model.n_features,
        "psi": model.psi,
        "max_depth": model.max_depth,
        "scaled": model.scaled,
        "feature_ranges": [[lo, hi] for lo, hi in model.feature_ranges],
        "trees": [_node_to_obj(t) for t in model.trees],
    }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


def deserialize(data: bytes) -> ForestModel:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptModelError(f"unreadable model: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptModelError("missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionMismatchError(
            f"model format {doc['format_version']!r}, reader expects {FORMAT_VERSION}"
        )
    try:
        params = ForestParams(
            n_trees=doc["params"]["n_trees"],
            subsample=doc["params"]["subsample"],
            seed=doc["params"]["seed"],
            max_depth=doc["params"]["max_depth"],
        )
        model = ForestModel(
            params=params,
            trees=tuple(_node_from_obj(t) for t in doc["trees"]),
            feature_ranges=tuple((float(lo), float(hi)) for lo, hi in doc["feature_ranges"]),
            n_features=int(doc["n_features"]),
            psi=int(doc["psi"]),
            max_depth=int(doc["max_depth"]),
            scaled=bool(doc["scaled"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"bad model document: {exc}") from exc
    if len(model.trees) != params.n_trees:
        raise CorruptModelError("tree count does not match params")
    return model
