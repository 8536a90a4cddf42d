"""CART-style regression trees in three flavors.

Exact greedy splits (midpoint thresholds), random-threshold splits (the
extra-trees mechanism), and histogram gradient/hessian splits with leaf-wise
growth. One split convention everywhere: x <= threshold goes left, equality
goes left. Ties in split quality break toward the lowest feature index, then
the lowest threshold.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from . import _kernels


class DimensionMismatch(Exception):
    pass


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_features: int | None = None  # per-split random feature subset size
    threshold_mode: str = "exact"  # "exact" | "random"

    def __post_init__(self):
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError("max_features must be >= 1 when present")
        if self.threshold_mode not in ("exact", "random"):
            raise ValueError(f"unknown threshold_mode {self.threshold_mode!r}")


@dataclass(frozen=True)
class HistTreeConfig:
    max_leaf_nodes: int = 31
    min_samples_leaf: int = 20
    l2_regularization: float = 0.0

    def __post_init__(self):
        if self.max_leaf_nodes < 1:
            raise ValueError("max_leaf_nodes must be >= 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.l2_regularization < 0:
            raise ValueError("l2_regularization must be >= 0")


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    impurity_decrease: float  # weighted SSE reduction (or boosting gain)


@dataclass
class RegressionTree:
    """Binary axis-aligned tree stored as a node arena.

    Parallel arrays indexed by node id; feature[i] == -1 marks a leaf, in
    which case value[i] is the prediction. Node 0 is the root.
    """

    feature: np.ndarray  # int32, -1 for leaves
    threshold: np.ndarray  # float64, NaN for leaves
    left: np.ndarray  # int32, -1 for leaves
    right: np.ndarray  # int32, -1 for leaves
    value: np.ndarray  # float64, NaN for internal nodes
    n_samples: np.ndarray  # int64
    n_features: int

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    @property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max()) if self.n_nodes else 0

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected (n, {self.n_features}) input, got {X.shape}")
        idx = np.zeros(len(X), dtype=np.int32)
        while True:
            rows = np.nonzero(self.feature[idx] >= 0)[0]
            if rows.size == 0:
                break
            node = idx[rows]
            go_left = X[rows, self.feature[node]] <= self.threshold[node]
            idx[rows] = np.where(go_left, self.left[node], self.right[node])
        return self.value[idx]

    def to_dict(self) -> dict:
        nodes = []
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                nodes.append({
                    "feature": int(self.feature[i]),
                    "threshold": float(self.threshold[i]),
                    "left": int(self.left[i]),
                    "right": int(self.right[i]),
                    "n_samples": int(self.n_samples[i]),
                })
            else:
                nodes.append({"value": float(self.value[i]), "n_samples": int(self.n_samples[i])})
        return {"n_features": self.n_features, "nodes": nodes}

    @classmethod
    def from_dict(cls, doc: dict) -> "RegressionTree":
        nodes = doc["nodes"]
        builder = _TreeBuilder(doc["n_features"])
        for node in nodes:
            if "feature" in node:
                builder.add_internal(node["feature"], node["threshold"], node["left"], node["right"], node["n_samples"])
            else:
                builder.add_leaf(node["value"], node["n_samples"])
        return builder.build()


class _TreeBuilder:
    def __init__(self, n_features: int):
        self.n_features = n_features
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.n_samples: list[int] = []

    def add_leaf(self, value: float, n_samples: int) -> int:
        self.feature.append(-1)
        self.threshold.append(np.nan)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(float(value))
        self.n_samples.append(int(n_samples))
        return len(self.feature) - 1

    def add_internal(self, feature: int, threshold: float, left: int = -1, right: int = -1, n_samples: int = 0) -> int:
        self.feature.append(int(feature))
        self.threshold.append(float(threshold))
        self.left.append(left)
        self.right.append(right)
        self.value.append(np.nan)
        self.n_samples.append(int(n_samples))
        return len(self.feature) - 1

    def link(self, parent: int, left: int, right: int) -> None:
        self.left[parent] = left
        self.right[parent] = right

    def build(self) -> RegressionTree:
        return RegressionTree(
            feature=np.asarray(self.feature, dtype=np.int32),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int32),
            right=np.asarray(self.right, dtype=np.int32),
            value=np.asarray(self.value, dtype=np.float64),
            n_samples=np.asarray(self.n_samples, dtype=np.int64),
            n_features=self.n_features,
        )


def _weighted_mean(y: np.ndarray, w: np.ndarray) -> float:
    sw = w.sum()
    return float((w @ y) / sw) if sw > 0 else float(y.mean())


def _best_split_prepared(
    Xs: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    mode: str,
    rng: np.random.Generator | None,
    min_samples_leaf: int,
) -> tuple[int, float, float] | None:
    """Kernel dispatch on a ready column-subset matrix; returns (local feature,
    threshold, decrease) or None."""
    if mode == "exact":
        j, threshold, decrease = _kernels.best_exact_split(Xs, y, w, min_samples_leaf)
        if j < 0:
            return None
        return j, float(threshold), float(decrease)
    if mode == "random":
        if rng is None:
            raise ValueError("random threshold mode needs an rng")
        t = rng.uniform(Xs.min(axis=0), Xs.max(axis=0))
        j, decrease = _kernels.best_random_split(Xs, y, w, min_samples_leaf, t)
        if j < 0:
            return None
        return j, float(t[j]), float(decrease)
    raise ValueError(f"unknown threshold mode {mode!r}")


def find_best_split(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    features,
    mode: str = "exact",
    rng: np.random.Generator | None = None,
    min_samples_leaf: int = 1,
) -> SplitCandidate | None:
    """Search for the split maximizing the weighted SSE decrease.

    Exact mode scans midpoints of consecutive distinct sorted values per
    feature; random mode draws one uniform threshold per feature in that
    feature's (min, max) and keeps the best. Ties break toward the lowest
    feature index, then the lowest threshold. Returns None when no legal
    split strictly decreases the impurity.
    """
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if len(y) < 2:
        return None
    features = np.sort(np.asarray(features, dtype=np.intp))
    Xs = np.ascontiguousarray(np.asarray(X, dtype=np.float64)[:, features])
    found = _best_split_prepared(Xs, y, w, mode, rng, min_samples_leaf)
    if found is None:
        return None
    j, threshold, decrease = found
    return SplitCandidate(int(features[j]), threshold, decrease)


def fit_tree(
    X,
    y,
    w=None,
    config: TreeConfig = TreeConfig(),
    rng: np.random.Generator | None = None,
) -> RegressionTree:
    """Grow a regression tree depth-wise by greedy splitting.

    A node becomes a leaf when the depth limit is reached, it holds fewer
    than min_samples_split samples, or no legal split decreases the weighted
    SSE; leaf values are weighted means of their samples.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch("X must be 2-dimensional")
    n, p = X.shape
    if len(y) != n:
        raise DimensionMismatch(f"X has {n} rows but y has {len(y)}")
    if n < 1:
        raise ValueError("need at least one sample")
    w = np.ones(n, dtype=np.float64) if w is None else np.asarray(w, dtype=np.float64)
    if len(w) != n:
        raise DimensionMismatch(f"X has {n} rows but w has {len(w)}")
    if np.any(w < 0) or w.sum() <= 0:
        raise ValueError("weights must be nonnegative and not all zero")
    if config.max_features is not None and config.max_features > p:
        raise ValueError("max_features exceeds the feature count")
    if config.threshold_mode == "random" and rng is None:
        raise ValueError("random threshold mode needs an rng")

    subset_size = config.max_features if (config.max_features or p) < p else None
    builder = _TreeBuilder(p)
    # stack entries: (sample indices, depth, parent id, is_left); LIFO with the
    # right child pushed first gives deterministic preorder numbering.
    stack: list[tuple[np.ndarray, int, int, bool]] = [(np.arange(n, dtype=np.intp), 0, -1, False)]
    while stack:
        idx, depth, parent, is_left = stack.pop()
        yv = y[idx]
        wv = w[idx]
        found = None
        if (config.max_depth is None or depth < config.max_depth) and len(idx) >= config.min_samples_split:
            Xv = X[idx]
            if subset_size is not None:
                features = np.sort(rng.choice(p, size=subset_size, replace=False))
                Xv = np.ascontiguousarray(Xv[:, features])
            found = _best_split_prepared(Xv, yv, wv, config.threshold_mode, rng, config.min_samples_leaf)
        if found is None:
            node = builder.add_leaf(_weighted_mean(yv, wv), len(idx))
        else:
            j, threshold, _ = found
            feature = int(features[j]) if subset_size is not None else j
            node = builder.add_internal(feature, threshold, n_samples=len(idx))
            go_left = X[idx, feature] <= threshold
            stack.append((idx[~go_left], depth + 1, node, False))
            stack.append((idx[go_left], depth + 1, node, True))
        if parent >= 0:
            if is_left:
                builder.left[parent] = node
            else:
                builder.right[parent] = node
    return builder.build()


def predict_tree(tree: RegressionTree, X) -> np.ndarray:
    return tree.predict(X)


@dataclass(frozen=True)
class BinSpec:
    """Per feature, the ascending split thresholds defining the bins."""

    thresholds: tuple[np.ndarray, ...]

    @property
    def n_features(self) -> int:
        return len(self.thresholds)

    def n_bins(self, feature: int) -> int:
        return len(self.thresholds[feature]) + 1


def build_bins(X, max_bins: int = 255) -> tuple[BinSpec, np.ndarray]:
    """Quantile-bin each feature into at most max_bins bins.

    Features with <= max_bins distinct values get one bin per value
    (midpoint thresholds); otherwise thresholds sit at the max_bins-quantiles
    of the distinct values. The code of a cell is the number of thresholds
    strictly below it, so bins {0..b} are exactly the set {x <= thresholds[b]}.
    """
    if not 2 <= max_bins <= 255:
        raise ValueError("max_bins must be in [2, 255]")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch("X must be 2-dimensional")
    n, p = X.shape
    thresholds = []
    binned = np.empty((n, p), dtype=np.int32)
    for j in range(p):
        col = X[:, j]
        distinct = np.unique(col)
        if len(distinct) <= max_bins:
            thr = distinct[:-1] + (distinct[1:] - distinct[:-1]) / 2
            # midpoints that round up to the higher value would move it left
            thr = np.where(thr >= distinct[1:], distinct[:-1], thr)
        else:
            qs = np.arange(1, max_bins) / max_bins
            thr = np.unique(np.quantile(distinct, qs))
        thresholds.append(thr)
        binned[:, j] = np.searchsorted(thr, col, side="left")
    return BinSpec(tuple(thresholds)), binned


def fit_hist_tree(
    binned: np.ndarray,
    bin_spec: BinSpec,
    g: np.ndarray,
    h: np.ndarray,
    config: HistTreeConfig = HistTreeConfig(),
) -> RegressionTree:
    """Grow a tree leaf-wise on binned features from gradient/hessian sums.

    Repeatedly splits the leaf with the largest gain
    0.5 * (G_L^2/(H_L+l2) + G_R^2/(H_R+l2) - G_P^2/(H_P+l2)) until the leaf
    budget is exhausted or no positive-gain split remains. Leaf values are
    -G/(H+l2); internal thresholds are the real-valued bin thresholds, so
    prediction runs on raw features.
    """
    binned = np.asarray(binned)
    g = np.asarray(g, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    n, p = binned.shape
    if len(g) != n or len(h) != n:
        raise DimensionMismatch("g and h must have one entry per row")
    if p != bin_spec.n_features:
        raise DimensionMismatch("bin_spec does not match the binned matrix")
    lam = config.l2_regularization
    msl = config.min_samples_leaf
    stride = max(bin_spec.n_bins(j) for j in range(p))
    offsets = np.arange(p, dtype=np.int64) * stride
    # columns valid as split positions per feature: position b needs threshold b
    pos_valid = np.zeros((p, stride - 1), dtype=bool) if stride > 1 else np.zeros((p, 0), dtype=bool)
    for j in range(p):
        pos_valid[j, : bin_spec.n_bins(j) - 1] = True

    def leaf_value(gs: float, hs: float) -> float:
        denom = hs + lam
        return float(-gs / denom) + 0.0 if denom > 0 else 0.0

    def best_split(idx: np.ndarray):
        m = len(idx)
        if m < 2 * msl or stride < 2:
            return None
        codes = binned[idx]
        flat = (codes + offsets).ravel()
        counts = np.bincount(flat, minlength=p * stride).reshape(p, stride)
        gh = np.bincount(flat, weights=np.repeat(g[idx], p), minlength=p * stride).reshape(p, stride)
        hh = np.bincount(flat, weights=np.repeat(h[idx], p), minlength=p * stride).reshape(p, stride)
        cl = np.cumsum(counts, axis=1)[:, :-1]
        gl = np.cumsum(gh, axis=1)[:, :-1]
        hl = np.cumsum(hh, axis=1)[:, :-1]
        gp = float(g[idx].sum())
        hp = float(h[idx].sum())
        gr = gp - gl
        hr = hp - hl
        cr = m - cl
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - gp * gp / (hp + lam))
        ok = pos_valid & (cl >= msl) & (cr >= msl) & (hl + lam > 0) & (hr + lam > 0)
        gain = np.where(ok, gain, -np.inf)
        flat_best = int(np.argmax(gain))  # row-major: lowest feature, then lowest threshold
        j, b = divmod(flat_best, stride - 1)
        best = gain[j, b]
        if not np.isfinite(best) or best <= 0:
            return None
        return float(best), int(j), int(b)

    builder = _TreeBuilder(p)
    root_idx = np.arange(n, dtype=np.intp)
    heap: list = []
    counter = 0

    def push(node_id: int, idx: np.ndarray):
        nonlocal counter
        cand = best_split(idx)
        if cand is not None:
            gain, j, b = cand
            heapq.heappush(heap, (-gain, counter, node_id, idx, j, b))
            counter += 1

    root = builder.add_leaf(leaf_value(float(g.sum()), float(h.sum())), n)
    push(root, root_idx)
    n_leaves = 1
    while heap and n_leaves < config.max_leaf_nodes:
        _, _, node_id, idx, j, b = heapq.heappop(heap)
        threshold = float(bin_spec.thresholds[j][b])
        go_left = binned[idx, j] <= b
        li, ri = idx[go_left], idx[~go_left]
        builder.feature[node_id] = j
        builder.threshold[node_id] = threshold
        builder.value[node_id] = np.nan
        left = builder.add_leaf(leaf_value(float(g[li].sum()), float(h[li].sum())), len(li))
        right = builder.add_leaf(leaf_value(float(g[ri].sum()), float(h[ri].sum())), len(ri))
        builder.link(node_id, left, right)
        n_leaves += 1
        push(left, li)
        push(right, ri)
    return builder.build()
