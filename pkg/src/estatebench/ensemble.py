"""The eight benchmark ensemble models behind one fit/predict contract.

Bagging, random forest, and extra trees share the bagged-trees fitter;
AdaBoost.R2, gradient boosting, and histogram gradient boosting are the
boosting family; stacking (ridge meta-learner on out-of-fold predictions)
and voting combine full base models. Every fitted model is immutable,
serializable to a versioned JSON document, and deterministic given
(X, y, config, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .rng import (
    STREAM_ADABOOST,
    STREAM_BAGGED,
    STREAM_STACKING_BASE,
    STREAM_STACKING_FOLDS,
    STREAM_VOTING_BASE,
    child_seed,
    substream,
)
from .tree import (
    DimensionMismatch,
    HistTreeConfig,
    RegressionTree,
    TreeConfig,
    build_bins,
    fit_hist_tree,
    fit_tree,
)

MODEL_FORMAT_VERSION = 1


class EmptyInput(Exception):
    pass


class SingularSystem(Exception):
    """Unregularized ridge system on rank-deficient centered features."""


class ModelKind(Enum):
    """The eight benchmark models; values are their report display names."""

    ADA_BOOST = "Ada Boost Regressor"
    BAGGING = "Bagging Regressor"
    EXTRA_TREES = "Extra Trees Regressor"
    GRADIENT_BOOSTING = "Gradient Boosting Regressor"
    HIST_GRADIENT_BOOSTING = "Hist Gradient Boosting Regressor"
    RANDOM_FOREST = "Random Forest Regressor"
    STACKING = "Stacking Regressor"
    VOTING = "Voting Regressor"

    @property
    def display_name(self) -> str:
        return self.value

    @property
    def slug(self) -> str:
        """CamelCase identifier, e.g. GradientBoosting; used for file names."""
        return "".join(part.capitalize() for part in self.name.split("_"))

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        key = "".join(ch for ch in text.casefold() if ch.isalnum())
        for kind in cls:
            aliases = {
                "".join(ch for ch in kind.name.casefold() if ch.isalnum()),
                "".join(ch for ch in kind.value.casefold() if ch.isalnum()),
                "".join(ch for ch in kind.value.casefold() if ch.isalnum()).removesuffix("regressor"),
            }
            if key in aliases:
                return kind
        raise ValueError(f"unknown model kind {text!r}")


_KIND_INDEX = {kind: i for i, kind in enumerate(ModelKind)}

DEFAULT_BASE_KINDS = (ModelKind.RANDOM_FOREST, ModelKind.GRADIENT_BOOSTING, ModelKind.EXTRA_TREES)


@dataclass(frozen=True)
class BaggedConfig:
    n_estimators: int
    bootstrap: bool
    threshold_mode: str = "exact"
    tree: TreeConfig = TreeConfig()
    seed: int = 0

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")


@dataclass(frozen=True)
class BoostConfig:
    n_stages: int = 100
    learning_rate: float = 0.1
    tree: TreeConfig = TreeConfig(max_depth=3)

    def __post_init__(self):
        if self.n_stages < 1:
            raise ValueError("n_stages must be >= 1")
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in [0, 1]")


@dataclass(frozen=True)
class AdaConfig:
    n_stages: int = 50
    learning_rate: float = 1.0
    loss: str = "linear"  # "linear" | "square" | "exponential"
    max_depth: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n_stages < 1:
            raise ValueError("n_stages must be >= 1")
        if self.loss not in ("linear", "square", "exponential"):
            raise ValueError(f"unknown loss {self.loss!r}")


@dataclass(frozen=True)
class HistBoostConfig:
    n_stages: int = 100
    learning_rate: float = 0.1
    max_bins: int = 255
    tree: HistTreeConfig = HistTreeConfig()

    def __post_init__(self):
        if self.n_stages < 1:
            raise ValueError("n_stages must be >= 1")


@dataclass(frozen=True)
class StackingConfig:
    base_kinds: tuple[ModelKind, ...] = DEFAULT_BASE_KINDS
    k_folds: int = 5
    lam: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.base_kinds:
            raise ValueError("stacking needs at least one base kind")
        if self.k_folds < 2:
            raise ValueError("k_folds must be >= 2")


@dataclass(frozen=True)
class VotingConfig:
    base_kinds: tuple[ModelKind, ...] = DEFAULT_BASE_KINDS
    weights: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.base_kinds:
            raise ValueError("voting needs at least one base kind")
        if self.weights is not None:
            if len(self.weights) != len(self.base_kinds):
                raise ValueError("one weight per base kind")
            if any(w < 0 for w in self.weights) or sum(self.weights) <= 0:
                raise ValueError("weights must be nonnegative and not all zero")


def bagging_config(seed: int = 0) -> BaggedConfig:
    return BaggedConfig(n_estimators=10, bootstrap=True, threshold_mode="exact", seed=seed)


def random_forest_config(seed: int = 0) -> BaggedConfig:
    return BaggedConfig(n_estimators=100, bootstrap=True, threshold_mode="exact", seed=seed)


def extra_trees_config(seed: int = 0) -> BaggedConfig:
    return BaggedConfig(n_estimators=100, bootstrap=False, threshold_mode="random", seed=seed)


def _check_xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch("X must be 2-dimensional")
    if len(y) != len(X):
        raise DimensionMismatch(f"X has {len(X)} rows but y has {len(y)}")
    if len(y) < 2:
        raise ValueError("need at least two samples")
    return X, y


class FittedModel:
    """Common surface of all trained models: kind, predict, serialization."""

    kind: ModelKind

    def predict(self, X) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(doc: dict) -> "FittedModel":
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model document version {doc.get('format_version')!r}")
        kind = ModelKind.parse(doc["kind"])
        return _FROM_DICT[kind](doc)

    def _doc(self, body: dict) -> dict:
        return {"format_version": MODEL_FORMAT_VERSION, "kind": self.kind.name, **body}


def _tree_config_doc(cfg: TreeConfig) -> dict:
    return {
        "max_depth": cfg.max_depth,
        "min_samples_split": cfg.min_samples_split,
        "min_samples_leaf": cfg.min_samples_leaf,
        "max_features": cfg.max_features,
        "threshold_mode": cfg.threshold_mode,
    }


@dataclass
class BaggedTreesModel(FittedModel):
    kind: ModelKind
    trees: list[RegressionTree]
    config: BaggedConfig

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        preds = np.stack([t.predict(X) for t in self.trees])
        return preds.mean(axis=0)

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "n_estimators": cfg.n_estimators,
                "bootstrap": cfg.bootstrap,
                "threshold_mode": cfg.threshold_mode,
                "tree": _tree_config_doc(cfg.tree),
                "seed": cfg.seed,
            },
            "trees": [t.to_dict() for t in self.trees],
        })


@dataclass
class AdaBoostModel(FittedModel):
    kind: ModelKind
    trees: list[RegressionTree]
    stage_weights: list[float]
    config: AdaConfig
    # fit trace, recorded per retained stage / per completed stage
    stage_betas: list[float] = field(default_factory=list)
    stage_avg_losses: list[float] = field(default_factory=list)
    weight_sums: list[float] = field(default_factory=list)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        preds = np.stack([t.predict(X) for t in self.trees])  # (stages, n)
        weights = np.asarray(self.stage_weights, dtype=np.float64)
        return np.asarray([weighted_median(preds[:, i], weights) for i in range(preds.shape[1])])

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "n_stages": cfg.n_stages,
                "learning_rate": cfg.learning_rate,
                "loss": cfg.loss,
                "max_depth": cfg.max_depth,
                "seed": cfg.seed,
            },
            "stage_weights": list(self.stage_weights),
            "trees": [t.to_dict() for t in self.trees],
        })


@dataclass
class GradientBoostingModel(FittedModel):
    kind: ModelKind
    baseline: float
    learning_rate: float
    trees: list[RegressionTree]
    config: BoostConfig
    stage_train_mse: list[float] = field(default_factory=list)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.full(len(X), self.baseline, dtype=np.float64)
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
        return out

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "n_stages": cfg.n_stages,
                "learning_rate": cfg.learning_rate,
                "tree": _tree_config_doc(cfg.tree),
            },
            "baseline": self.baseline,
            "trees": [t.to_dict() for t in self.trees],
        })


@dataclass
class HistGradientBoostingModel(FittedModel):
    kind: ModelKind
    baseline: float
    learning_rate: float
    trees: list[RegressionTree]
    config: HistBoostConfig

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.full(len(X), self.baseline, dtype=np.float64)
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
        return out

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "n_stages": cfg.n_stages,
                "learning_rate": cfg.learning_rate,
                "max_bins": cfg.max_bins,
                "tree": {
                    "max_leaf_nodes": cfg.tree.max_leaf_nodes,
                    "min_samples_leaf": cfg.tree.min_samples_leaf,
                    "l2_regularization": cfg.tree.l2_regularization,
                },
            },
            "baseline": self.baseline,
            "trees": [t.to_dict() for t in self.trees],
        })


@dataclass
class RidgeModel:
    weights: np.ndarray
    intercept: float
    lam: float = 1.0

    def predict(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=np.float64)
        return Z @ self.weights + self.intercept

    def to_dict(self) -> dict:
        return {"weights": [float(w) for w in self.weights], "intercept": self.intercept, "lam": self.lam}

    @classmethod
    def from_dict(cls, doc: dict) -> "RidgeModel":
        return cls(np.asarray(doc["weights"], dtype=np.float64), doc["intercept"], doc["lam"])


@dataclass
class StackingModel(FittedModel):
    kind: ModelKind
    base_models: list[FittedModel]
    ridge: RidgeModel
    config: StackingConfig

    def predict(self, X) -> np.ndarray:
        Z = np.column_stack([m.predict(X) for m in self.base_models])
        return self.ridge.predict(Z)

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "base_kinds": [k.name for k in cfg.base_kinds],
                "k_folds": cfg.k_folds,
                "lam": cfg.lam,
                "seed": cfg.seed,
            },
            "ridge": self.ridge.to_dict(),
            "base_models": [m.to_dict() for m in self.base_models],
        })


@dataclass
class VotingModel(FittedModel):
    kind: ModelKind
    base_models: list[FittedModel]
    weights: tuple[float, ...] | None
    config: VotingConfig

    def predict(self, X) -> np.ndarray:
        preds = np.stack([m.predict(X) for m in self.base_models])
        if self.weights is None:
            return preds.mean(axis=0)
        w = np.asarray(self.weights, dtype=np.float64)
        return (w[:, None] * preds).sum(axis=0) / w.sum()

    def to_dict(self) -> dict:
        cfg = self.config
        return self._doc({
            "config": {
                "base_kinds": [k.name for k in cfg.base_kinds],
                "weights": None if cfg.weights is None else list(cfg.weights),
                "seed": cfg.seed,
            },
            "base_models": [m.to_dict() for m in self.base_models],
        })


def fit_bagged_trees(X, y, cfg: BaggedConfig, kind: ModelKind = ModelKind.BAGGING) -> BaggedTreesModel:
    """Fit an averaged ensemble of trees on bootstrap (or full) resamples."""
    X, y = _check_xy(X, y)
    n = len(y)
    tree_cfg = replace(cfg.tree, threshold_mode=cfg.threshold_mode)
    trees = []
    for t in range(cfg.n_estimators):
        rng = substream(cfg.seed, STREAM_BAGGED, _KIND_INDEX[kind], t)
        if cfg.bootstrap:
            idx = rng.integers(0, n, size=n)
            trees.append(fit_tree(X[idx], y[idx], None, tree_cfg, rng))
        else:
            trees.append(fit_tree(X, y, None, tree_cfg, rng))
    return BaggedTreesModel(kind=kind, trees=trees, config=cfg)


def weighted_median(values, weights) -> float:
    """First value (in ascending order) whose cumulative weight reaches half
    the total weight."""
    v = np.asarray(values, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if len(v) == 0:
        raise EmptyInput("weighted_median of no values")
    if len(v) != len(w):
        raise DimensionMismatch("values and weights must have equal length")
    if np.any(w < 0) or w.sum() <= 0:
        raise ValueError("weights must be nonnegative with positive sum")
    order = np.argsort(v, kind="stable")
    cw = np.cumsum(w[order])
    k = int(np.searchsorted(cw, 0.5 * cw[-1], side="left"))
    return float(v[order][k])


def fit_adaboost_r2(X, y, cfg: AdaConfig) -> AdaBoostModel:
    """AdaBoost.R2: reweighted bootstrap stages aggregated by weighted median.

    Each stage trains a depth-limited tree on a weight-proportional bootstrap
    resample. Normalized absolute losses give the average loss L; stages with
    L >= 0.5 stop the fit (kept only if first), otherwise beta = L/(1-L)
    weights the stage by log(1/beta) and the sample weights are updated by
    beta^((1-l) * learning_rate) and renormalized. A zero-error stage becomes
    the whole model.
    """
    X, y = _check_xy(X, y)
    n = len(y)
    tree_cfg = TreeConfig(max_depth=cfg.max_depth)
    w = np.full(n, 1.0 / n)
    trees: list[RegressionTree] = []
    stage_weights: list[float] = []
    betas: list[float] = []
    avg_losses: list[float] = []
    weight_sums: list[float] = []
    for m in range(cfg.n_stages):
        rng = substream(cfg.seed, STREAM_ADABOOST, m)
        idx = rng.choice(n, size=n, replace=True, p=w)
        tree = fit_tree(X[idx], y[idx], None, tree_cfg, rng)
        err = np.abs(tree.predict(X) - y)
        err_max = err.max()
        if err_max == 0.0:
            trees = [tree]
            stage_weights = [1.0]
            betas.append(0.0)
            avg_losses.append(0.0)
            weight_sums.append(float(w.sum()))
            break
        loss = err / err_max
        if cfg.loss == "square":
            loss = loss**2
        elif cfg.loss == "exponential":
            loss = 1.0 - np.exp(-loss)
        avg_loss = float(w @ loss)
        if avg_loss >= 0.5:
            if not trees:
                trees = [tree]
                stage_weights = [1.0]
                avg_losses.append(avg_loss)
                weight_sums.append(float(w.sum()))
            break
        beta = avg_loss / (1.0 - avg_loss)
        trees.append(tree)
        stage_weights.append(math.log(1.0 / beta))
        w = w * beta ** ((1.0 - loss) * cfg.learning_rate)
        w = w / w.sum()
        betas.append(beta)
        avg_losses.append(avg_loss)
        weight_sums.append(float(w.sum()))
    return AdaBoostModel(
        kind=ModelKind.ADA_BOOST,
        trees=trees,
        stage_weights=stage_weights,
        config=cfg,
        stage_betas=betas,
        stage_avg_losses=avg_losses,
        weight_sums=weight_sums,
    )


def fit_gradient_boosting(X, y, cfg: BoostConfig = BoostConfig()) -> GradientBoostingModel:
    """Stagewise residual fitting: F_m = F_{m-1} + lr * tree(y - F_{m-1})."""
    X, y = _check_xy(X, y)
    baseline = float(np.mean(y))
    current = np.full(len(y), baseline, dtype=np.float64)
    rng = substream(0, 0)  # exact-mode full-feature trees draw nothing
    trees = []
    stage_mse = []
    for _ in range(cfg.n_stages):
        residual = y - current
        tree = fit_tree(X, residual, None, cfg.tree, rng)
        trees.append(tree)
        current = current + cfg.learning_rate * tree.predict(X)
        stage_mse.append(float(np.mean((y - current) ** 2)))
    return GradientBoostingModel(
        kind=ModelKind.GRADIENT_BOOSTING,
        baseline=baseline,
        learning_rate=cfg.learning_rate,
        trees=trees,
        config=cfg,
        stage_train_mse=stage_mse,
    )


def fit_hist_gradient_boosting(X, y, cfg: HistBoostConfig = HistBoostConfig()) -> HistGradientBoostingModel:
    """Gradient boosting on quantile-binned features with leaf-wise trees.

    Halved squared loss: per stage g = F - y, h = 1; no early stopping.
    """
    X, y = _check_xy(X, y)
    bin_spec, binned = build_bins(X, cfg.max_bins)
    baseline = float(np.mean(y))
    current = np.full(len(y), baseline, dtype=np.float64)
    ones = np.ones(len(y), dtype=np.float64)
    trees = []
    for _ in range(cfg.n_stages):
        g = current - y
        tree = fit_hist_tree(binned, bin_spec, g, ones, cfg.tree)
        trees.append(tree)
        current = current + cfg.learning_rate * tree.predict(X)
    return HistGradientBoostingModel(
        kind=ModelKind.HIST_GRADIENT_BOOSTING,
        baseline=baseline,
        learning_rate=cfg.learning_rate,
        trees=trees,
        config=cfg,
    )


def fit_ridge(Z, y, lam: float = 1.0) -> RidgeModel:
    """Ridge regression via the normal equations on centered data.

    The intercept is unpenalized: columns and target are centered, the
    (Z'Z + lam*I) system is solved directly, and the intercept recovers the
    means.
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if Z.ndim != 2 or len(Z) != len(y):
        raise DimensionMismatch("Z must be 2-dimensional with one row per target")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    z_mean = Z.mean(axis=0)
    y_mean = float(y.mean())
    Zc = Z - z_mean
    yc = y - y_mean
    p = Z.shape[1]
    if lam == 0.0 and np.linalg.matrix_rank(Zc) < p:
        raise SingularSystem("centered design matrix is rank-deficient and lam == 0")
    weights = np.linalg.solve(Zc.T @ Zc + lam * np.eye(p), Zc.T @ yc)
    intercept = y_mean - float(weights @ z_mean)
    return RidgeModel(weights=weights, intercept=intercept, lam=lam)


def stacking_folds(n: int, k_folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic seeded k-fold partition; fold sizes differ by at most 1."""
    perm = substream(seed, STREAM_STACKING_FOLDS).permutation(n)
    return list(np.array_split(perm, k_folds))


def stacking_oof_matrix(X, y, cfg: StackingConfig) -> np.ndarray:
    """Out-of-fold base predictions: Z[i, b] comes from a fit that never saw row i."""
    X, y = _check_xy(X, y)
    n = len(y)
    folds = stacking_folds(n, cfg.k_folds, cfg.seed)
    Z = np.empty((n, len(cfg.base_kinds)), dtype=np.float64)
    for b, base_kind in enumerate(cfg.base_kinds):
        for f, fold in enumerate(folds):
            train_idx = np.sort(np.setdiff1d(np.arange(n), fold))
            seed = child_seed(cfg.seed, STREAM_STACKING_BASE, b, f)
            model = fit_model(base_kind, X[train_idx], y[train_idx], seed=seed)
            Z[fold, b] = model.predict(X[fold])
    return Z


def fit_stacking(X, y, cfg: StackingConfig = StackingConfig()) -> StackingModel:
    """Two-level ensemble: ridge trained on out-of-fold base predictions."""
    X, y = _check_xy(X, y)
    n = len(y)
    if n < 2 * cfg.k_folds:
        raise ValueError(f"stacking needs at least {2 * cfg.k_folds} samples")
    Z = stacking_oof_matrix(X, y, cfg)
    ridge = fit_ridge(Z, y, cfg.lam)
    base_models = [
        fit_model(kind, X, y, seed=child_seed(cfg.seed, STREAM_STACKING_BASE, b, cfg.k_folds))
        for b, kind in enumerate(cfg.base_kinds)
    ]
    return StackingModel(kind=ModelKind.STACKING, base_models=base_models, ridge=ridge, config=cfg)


def fit_voting(X, y, cfg: VotingConfig = VotingConfig()) -> VotingModel:
    """Weighted arithmetic mean of independently trained base models."""
    X, y = _check_xy(X, y)
    base_models = [
        fit_model(kind, X, y, seed=child_seed(cfg.seed, STREAM_VOTING_BASE, b))
        for b, kind in enumerate(cfg.base_kinds)
    ]
    return VotingModel(kind=ModelKind.VOTING, base_models=base_models, weights=cfg.weights, config=cfg)


def default_config(kind: ModelKind, seed: int = 0):
    """The pinned default configuration for each model kind."""
    if kind is ModelKind.BAGGING:
        return bagging_config(seed)
    if kind is ModelKind.RANDOM_FOREST:
        return random_forest_config(seed)
    if kind is ModelKind.EXTRA_TREES:
        return extra_trees_config(seed)
    if kind is ModelKind.ADA_BOOST:
        return AdaConfig(seed=seed)
    if kind is ModelKind.GRADIENT_BOOSTING:
        return BoostConfig()
    if kind is ModelKind.HIST_GRADIENT_BOOSTING:
        return HistBoostConfig()
    if kind is ModelKind.STACKING:
        return StackingConfig(seed=seed)
    if kind is ModelKind.VOTING:
        return VotingConfig(seed=seed)
    raise ValueError(f"unknown model kind {kind!r}")


def fit_model(kind: ModelKind, X, y, seed: int = 0, config=None) -> FittedModel:
    """Front door: fit any of the eight models with its preset (or override)."""
    cfg = default_config(kind, seed) if config is None else config
    if kind in (ModelKind.BAGGING, ModelKind.RANDOM_FOREST, ModelKind.EXTRA_TREES):
        return fit_bagged_trees(X, y, cfg, kind=kind)
    if kind is ModelKind.ADA_BOOST:
        return fit_adaboost_r2(X, y, cfg)
    if kind is ModelKind.GRADIENT_BOOSTING:
        return fit_gradient_boosting(X, y, cfg)
    if kind is ModelKind.HIST_GRADIENT_BOOSTING:
        return fit_hist_gradient_boosting(X, y, cfg)
    if kind is ModelKind.STACKING:
        return fit_stacking(X, y, cfg)
    if kind is ModelKind.VOTING:
        return fit_voting(X, y, cfg)
    raise ValueError(f"unknown model kind {kind!r}")


def _bagged_from_dict(doc: dict) -> BaggedTreesModel:
    c = doc["config"]
    cfg = BaggedConfig(
        n_estimators=c["n_estimators"],
        bootstrap=c["bootstrap"],
        threshold_mode=c["threshold_mode"],
        tree=TreeConfig(**c["tree"]),
        seed=c["seed"],
    )
    trees = [RegressionTree.from_dict(t) for t in doc["trees"]]
    return BaggedTreesModel(kind=ModelKind.parse(doc["kind"]), trees=trees, config=cfg)


def _ada_from_dict(doc: dict) -> AdaBoostModel:
    cfg = AdaConfig(**doc["config"])
    trees = [RegressionTree.from_dict(t) for t in doc["trees"]]
    return AdaBoostModel(
        kind=ModelKind.ADA_BOOST, trees=trees, stage_weights=list(doc["stage_weights"]), config=cfg
    )


def _gbr_from_dict(doc: dict) -> GradientBoostingModel:
    c = doc["config"]
    cfg = BoostConfig(n_stages=c["n_stages"], learning_rate=c["learning_rate"], tree=TreeConfig(**c["tree"]))
    trees = [RegressionTree.from_dict(t) for t in doc["trees"]]
    return GradientBoostingModel(
        kind=ModelKind.GRADIENT_BOOSTING,
        baseline=doc["baseline"],
        learning_rate=cfg.learning_rate,
        trees=trees,
        config=cfg,
    )


def _hist_from_dict(doc: dict) -> HistGradientBoostingModel:
    c = doc["config"]
    cfg = HistBoostConfig(
        n_stages=c["n_stages"],
        learning_rate=c["learning_rate"],
        max_bins=c["max_bins"],
        tree=HistTreeConfig(**c["tree"]),
    )
    trees = [RegressionTree.from_dict(t) for t in doc["trees"]]
    return HistGradientBoostingModel(
        kind=ModelKind.HIST_GRADIENT_BOOSTING,
        baseline=doc["baseline"],
        learning_rate=cfg.learning_rate,
        trees=trees,
        config=cfg,
    )


def _stacking_from_dict(doc: dict) -> StackingModel:
    c = doc["config"]
    cfg = StackingConfig(
        base_kinds=tuple(ModelKind.parse(k) for k in c["base_kinds"]),
        k_folds=c["k_folds"],
        lam=c["lam"],
        seed=c["seed"],
    )
    bases = [FittedModel.from_dict(b) for b in doc["base_models"]]
    return StackingModel(
        kind=ModelKind.STACKING, base_models=bases, ridge=RidgeModel.from_dict(doc["ridge"]), config=cfg
    )


def _voting_from_dict(doc: dict) -> VotingModel:
    c = doc["config"]
    cfg = VotingConfig(
        base_kinds=tuple(ModelKind.parse(k) for k in c["base_kinds"]),
        weights=None if c["weights"] is None else tuple(c["weights"]),
        seed=c["seed"],
    )
    bases = [FittedModel.from_dict(b) for b in doc["base_models"]]
    return VotingModel(kind=ModelKind.VOTING, base_models=bases, weights=cfg.weights, config=cfg)


_FROM_DICT = {
    ModelKind.BAGGING: _bagged_from_dict,
    ModelKind.RANDOM_FOREST: _bagged_from_dict,
    ModelKind.EXTRA_TREES: _bagged_from_dict,
    ModelKind.ADA_BOOST: _ada_from_dict,
    ModelKind.GRADIENT_BOOSTING: _gbr_from_dict,
    ModelKind.HIST_GRADIENT_BOOSTING: _hist_from_dict,
    ModelKind.STACKING: _stacking_from_dict,
    ModelKind.VOTING: _voting_from_dict,
}
