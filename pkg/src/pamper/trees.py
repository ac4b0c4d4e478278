"""Per-method regression trees over boolean feature vectors.

Trees are grown top-down by recursive binary splitting. At each node every
feature is scored by the summed residual sum of squares (RSS) of the two
sides it induces; the feature with the lowest post-split RSS wins, ties
going to the lowest feature index. Growth stops at the depth limit, on
nodes too small to split, on pure nodes, and when no feature strictly
reduces the node's own RSS. A leaf predicts the mean label of its region,
read as the expectation that the method applies there.

For 0/1 labels a region's RSS collapses to positives*(size-positives)/size,
so split selection runs entirely on integer counts. Comparisons between
candidate splits cross-multiply the exact rationals, which makes the chosen
feature and tie-break independent of floating-point rounding; the reported
split RSS is the correctly rounded quotient of the exact numerator and
denominator.
"""
from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, NamedTuple, Union

import numpy as np

from . import _kernels
from .corpus import EMPTY_CATALOG, METHOD_TOKEN, Corpus, FeatureCatalog
from .errors import EmptyDatasetError, ModelParseError, PamperError
from .preprocess import BinaryDataset, single_target_split


@dataclass(frozen=True)
class Leaf:
    """Terminal region: mean label (expectation) and point count."""

    expectation: float
    count: int


@dataclass(frozen=True)
class Internal:
    """Branch on one feature: bit clear goes left, bit set goes right."""

    feature: int
    when_false: "TreeNode"
    when_true: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class TrainConfig:
    max_depth: int = 5
    min_points_to_split: int = 2

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_points_to_split < 1:
            raise ValueError("min_points_to_split must be at least 1")


class BestSplit(NamedTuple):
    feature: int
    split_rss: float


class TreeStats(NamedTuple):
    internal: int
    leaves: int
    depth: int


@dataclass(frozen=True, eq=False)
class ModelSet:
    """All trained trees plus the bookkeeping queries need.

    ``trees`` is keyed by method name and kept name-sorted; ``max_depth``
    records the limit used at training time.
    """

    feature_count: int
    trees: dict[str, TreeNode]
    catalog: FeatureCatalog = field(default_factory=lambda: EMPTY_CATALOG)
    max_depth: int = 5

    def __post_init__(self):
        if self.feature_count < 1:
            raise ValueError("feature count must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        ordered = dict(sorted(self.trees.items()))
        for name, tree in ordered.items():
            if not METHOD_TOKEN.match(name):
                raise ValueError(f"invalid method name: {name!r}")
            _check_tree(tree, self.feature_count, self.max_depth, depth=0)
        self.catalog.check_range(self.feature_count)
        object.__setattr__(self, "trees", MappingProxyType(ordered))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        return (
            self.feature_count == other.feature_count
            and self.max_depth == other.max_depth
            and dict(self.trees) == dict(other.trees)
            and self.catalog == other.catalog
        )


def _check_tree(node: TreeNode, feature_count: int, max_depth: int, depth: int) -> None:
    if isinstance(node, Leaf):
        if not (0.0 <= node.expectation <= 1.0):
            raise ValueError(f"leaf expectation {node.expectation!r} outside [0, 1]")
        if node.count < 0:
            raise ValueError("leaf count must be nonnegative")
        return
    if isinstance(node, Internal):
        if depth >= max_depth:
            raise ValueError(f"tree exceeds depth limit {max_depth}")
        if not 0 <= node.feature < feature_count:
            raise ValueError(
                f"feature {node.feature} out of range for {feature_count} features"
            )
        _check_tree(node.when_false, feature_count, max_depth, depth + 1)
        _check_tree(node.when_true, feature_count, max_depth, depth + 1)
        return
    raise TypeError(f"not a tree node: {node!r}")


def rss(points) -> float:
    """Residual sum of squares of 0/1 labels about their mean.

    Accepts a BinaryDataset or any array-like of 0/1 labels; the empty
    slice has RSS 0.
    """
    if isinstance(points, BinaryDataset):
        n = len(points)
        pos = points.positives
    else:
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if arr.size and not np.all((arr == 0.0) | (arr == 1.0)):
            raise ValueError("labels must be 0 or 1")
        n = arr.size
        pos = int(arr.sum())
    if n == 0:
        return 0.0
    return pos * (n - pos) / n


def _choose_split(n_true, pos_true, n, pos, candidates):
    """Exact-arithmetic argmin over candidate features.

    ``candidates`` must iterate in ascending order. Returns
    (feature, rss_numerator, rss_denominator) with the post-split RSS equal
    to numerator/denominator exactly, or None when no candidate strictly
    beats the node's own RSS (degenerate one-sided splits can never win).
    """
    best = None
    for j in candidates:
        nt = n_true[j]
        nf = n - nt
        if nt == 0 or nf == 0:
            continue
        pt = pos_true[j]
        pf = pos - pt
        num = pt * (nt - pt) * nf + pf * (nf - pf) * nt
        den = nt * nf
        if best is None or num * best[1] < best[0] * den:
            best = (num, den, j)
    if best is None:
        return None
    num, den, j = best
    if num * n >= pos * (n - pos) * den:
        return None
    return j, num, den


def best_split(dataset: BinaryDataset, candidate_features: Iterable[int] | None = None):
    """Best single-feature split of the whole dataset, or None.

    Scores every candidate feature by summed two-side RSS and returns the
    minimizer with ties broken toward the lowest feature index, as a
    BestSplit(feature, split_rss). None means no feature strictly reduces
    the dataset's own RSS.
    """
    n = len(dataset)
    if n == 0:
        raise EmptyDatasetError()
    feature_count = dataset.features.shape[1]
    if candidate_features is None:
        candidates = range(feature_count)
    else:
        candidates = sorted({int(j) for j in candidate_features})
        if candidates and not (0 <= candidates[0] and candidates[-1] < feature_count):
            raise ValueError("candidate feature out of range")
    idx = np.arange(n, dtype=np.int64)
    n_true, pos_true, pos = _kernels.node_counts(dataset.features, dataset.labels, idx)
    choice = _choose_split(n_true.tolist(), pos_true.tolist(), n, pos, candidates)
    if choice is None:
        return None
    j, num, den = choice
    return BestSplit(j, num / den)


def _grow(X, y, idx, pos, depth, cfg) -> TreeNode:
    n = idx.shape[0]
    if (
        depth >= cfg.max_depth
        or n < cfg.min_points_to_split
        or pos == 0
        or pos == n
    ):
        return Leaf(pos / n, n)
    n_true, pos_true, _ = _kernels.node_counts(X, y, idx)
    nt = n_true.tolist()
    pt = pos_true.tolist()
    choice = _choose_split(nt, pt, n, pos, range(X.shape[1]))
    if choice is None:
        return Leaf(pos / n, n)
    j = choice[0]
    idx_false, idx_true = _kernels.partition(X, idx, j, nt[j])
    pos_true_j = pt[j]
    return Internal(
        j,
        _grow(X, y, idx_false, pos - pos_true_j, depth + 1, cfg),
        _grow(X, y, idx_true, pos_true_j, depth + 1, cfg),
    )


def build_tree(dataset: BinaryDataset, cfg: TrainConfig | None = None) -> TreeNode:
    """Grow one regression tree for a method's binary dataset."""
    cfg = cfg or TrainConfig()
    n = len(dataset)
    if n == 0:
        raise EmptyDatasetError()
    idx = np.arange(n, dtype=np.int64)
    return _grow(dataset.features, dataset.labels, idx, dataset.positives, 0, cfg)


def resolve_threads(explicit: int | None = None) -> int:
    """Worker count for per-method training; PAMPER_THREADS caps it, 0 = auto."""
    if explicit is None:
        raw = os.environ.get("PAMPER_THREADS", "0").strip() or "0"
        try:
            explicit = int(raw)
        except ValueError:
            raise PamperError(f"PAMPER_THREADS must be an integer, got {raw!r}") from None
    if explicit < 0:
        raise PamperError("thread count must be nonnegative")
    if explicit == 0:
        return os.cpu_count() or 1
    return explicit


def train(
    corpus: Corpus,
    cfg: TrainConfig | None = None,
    catalog: FeatureCatalog | None = None,
    threads: int | None = None,
) -> ModelSet:
    """Train one tree per method observed in the corpus.

    Methods are independent, so they may be trained on a thread pool; the
    merge is name-sorted and every tree depends only on its own dataset,
    which keeps the result identical for any thread count.
    """
    cfg = cfg or TrainConfig()
    if len(corpus) == 0:
        raise EmptyDatasetError("corpus has no points")
    datasets = single_target_split(corpus)
    names = sorted(datasets)
    workers = resolve_threads(threads)
    if workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            built = list(pool.map(lambda name: build_tree(datasets[name], cfg), names))
    else:
        built = [build_tree(datasets[name], cfg) for name in names]
    return ModelSet(
        corpus.feature_count,
        dict(zip(names, built)),
        catalog if catalog is not None else EMPTY_CATALOG,
        cfg.max_depth,
    )


def used_features(model: ModelSet) -> set[int]:
    """Every feature index that branches some tree in the model."""
    found: set[int] = set()

    def walk(node: TreeNode) -> None:
        if isinstance(node, Internal):
            found.add(node.feature)
            walk(node.when_false)
            walk(node.when_true)

    for tree in model.trees.values():
        walk(tree)
    return found


def tree_stats(tree: TreeNode) -> TreeStats:
    """Internal-node count, leaf count, and depth of one tree."""
    if isinstance(tree, Leaf):
        return TreeStats(0, 1, 0)
    left = tree_stats(tree.when_false)
    right = tree_stats(tree.when_true)
    return TreeStats(
        1 + left.internal + right.internal,
        left.leaves + right.leaves,
        1 + max(left.depth, right.depth),
    )


_HEADER = re.compile(r"pamper-model v1 features=(\d+) depth=(\d+)\s*$")


def _format_node(node: TreeNode, out: list[str]) -> None:
    if isinstance(node, Leaf):
        out.append(f"L({node.expectation!r},{node.count})")
    else:
        out.append(f"N({node.feature},")
        _format_node(node.when_false, out)
        out.append(",")
        _format_node(node.when_true, out)
        out.append(")")


def model_to_text(model: ModelSet) -> str:
    """Serialize a model: a header line, then one name<TAB>tree line each.

    Expectations are written with repr, the shortest decimal form that
    round-trips, so save -> load -> save is byte-identical.
    """
    lines = [
        f"pamper-model v1 features={model.feature_count} depth={model.max_depth}"
    ]
    for name, tree in model.trees.items():
        parts: list[str] = []
        _format_node(tree, parts)
        lines.append(f"{name}\t{''.join(parts)}")
    return "\n".join(lines) + "\n"


def _scan_until(text: str, pos: int, stop: str, line_no: int, what: str) -> tuple[str, int]:
    end = text.find(stop, pos)
    if end < 0:
        raise ModelParseError(line_no, f"missing {stop!r} after {what}")
    return text[pos:end], end + 1


def _parse_node(text, pos, line_no, feature_count, max_depth, depth):
    if text.startswith("L(", pos):
        token, pos = _scan_until(text, pos + 2, ",", line_no, "expectation")
        try:
            expectation = float(token)
        except ValueError:
            raise ModelParseError(line_no, f"bad expectation: {token!r}") from None
        if not (0.0 <= expectation <= 1.0):
            raise ModelParseError(line_no, f"expectation {token} outside [0, 1]")
        token, pos = _scan_until(text, pos, ")", line_no, "count")
        try:
            count = int(token)
        except ValueError:
            raise ModelParseError(line_no, f"bad count: {token!r}") from None
        if count < 0:
            raise ModelParseError(line_no, "negative count")
        return Leaf(expectation, count), pos
    if text.startswith("N(", pos):
        if depth >= max_depth:
            raise ModelParseError(line_no, f"tree deeper than declared depth {max_depth}")
        token, pos = _scan_until(text, pos + 2, ",", line_no, "feature")
        try:
            feature = int(token)
        except ValueError:
            raise ModelParseError(line_no, f"bad feature index: {token!r}") from None
        if not 0 <= feature < feature_count:
            raise ModelParseError(
                line_no, f"feature {feature} out of range for {feature_count} features"
            )
        when_false, pos = _parse_node(text, pos, line_no, feature_count, max_depth, depth + 1)
        if pos >= len(text) or text[pos] != ",":
            raise ModelParseError(line_no, "expected ',' between branches")
        when_true, pos = _parse_node(text, pos + 1, line_no, feature_count, max_depth, depth + 1)
        if pos >= len(text) or text[pos] != ")":
            raise ModelParseError(line_no, "expected ')' to close branch")
        return Internal(feature, when_false, when_true), pos + 1
    raise ModelParseError(line_no, f"expected node at column {pos + 1}")


def model_from_text(text: str | bytes) -> ModelSet:
    """Parse model text; raises ModelParseError with the offending line."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    lines = text.split("\n")
    if not lines or not _HEADER.match(lines[0].rstrip("\r")):
        raise ModelParseError(1, "bad header, expected 'pamper-model v1 features=<F> depth=<D>'")
    match = _HEADER.match(lines[0].rstrip("\r"))
    feature_count = int(match.group(1))
    max_depth = int(match.group(2))
    if feature_count < 1:
        raise ModelParseError(1, "feature count must be positive")
    if max_depth < 1:
        raise ModelParseError(1, "depth must be positive")
    trees: dict[str, TreeNode] = {}
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        name, sep, body = line.partition("\t")
        if not sep:
            raise ModelParseError(line_no, "expected '<method><TAB><tree>'")
        if not METHOD_TOKEN.match(name):
            raise ModelParseError(line_no, f"invalid method name: {name!r}")
        if name in trees:
            raise ModelParseError(line_no, f"duplicate method: {name}")
        node, end = _parse_node(body, 0, line_no, feature_count, max_depth, 0)
        if end != len(body):
            raise ModelParseError(line_no, f"trailing characters at column {end + 1}")
        trees[name] = node
    return ModelSet(feature_count, trees, EMPTY_CATALOG, max_depth)


def save_model(model: ModelSet, sink) -> None:
    """Write model text to a path or file object, LF line endings."""
    text = model_to_text(model)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def load_model(source) -> ModelSet:
    """Read a model from a path or file object."""
    if hasattr(source, "read"):
        return model_from_text(source.read())
    with open(source, "r", encoding="utf-8", newline="") as handle:
        return model_from_text(handle.read())
