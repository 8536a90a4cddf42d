"""Tests for the eight ensemble models and their shared machinery."""

import numpy as np
import pytest

from estatebench.ensemble import (
    AdaConfig,
    BaggedConfig,
    BoostConfig,
    EmptyInput,
    FittedModel,
    HistBoostConfig,
    ModelKind,
    SingularSystem,
    StackingConfig,
    VotingConfig,
    bagging_config,
    extra_trees_config,
    fit_adaboost_r2,
    fit_bagged_trees,
    fit_gradient_boosting,
    fit_hist_gradient_boosting,
    fit_model,
    fit_ridge,
    fit_stacking,
    fit_voting,
    random_forest_config,
    stacking_folds,
    stacking_oof_matrix,
    weighted_median,
)
from estatebench.metrics import evaluate
from estatebench.preprocess import train_test_split
from estatebench.rng import STREAM_BAGGED, substream
from estatebench.tree import DimensionMismatch, HistTreeConfig, TreeConfig, build_bins, find_best_split, fit_tree


def _step_data(n=200, seed=77, noise=1.0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, size=(n, 3))
    y = np.where(X[:, 0] > 0.5, 10.0, 0.0) + np.where(X[:, 1] > 0.3, 5.0, 0.0)
    if noise:
        y = y + rng.normal(0, noise, n)
    return X, y


# --- bagged family -----------------------------------------------------------


def test_parse_model_kind():
    assert ModelKind.parse("AdaBoost") is ModelKind.ADA_BOOST
    assert ModelKind.parse("hist_gradient_boosting") is ModelKind.HIST_GRADIENT_BOOSTING
    assert ModelKind.parse("Extra Trees Regressor") is ModelKind.EXTRA_TREES
    assert ModelKind.parse("random-forest") is ModelKind.RANDOM_FOREST
    with pytest.raises(ValueError):
        ModelKind.parse("linear")


def test_display_names_match_report_rows():
    names = sorted(k.display_name for k in ModelKind)
    assert names == [
        "Ada Boost Regressor",
        "Bagging Regressor",
        "Extra Trees Regressor",
        "Gradient Boosting Regressor",
        "Hist Gradient Boosting Regressor",
        "Random Forest Regressor",
        "Stacking Regressor",
        "Voting Regressor",
    ]


def test_presets():
    assert bagging_config(1) == BaggedConfig(10, True, "exact", TreeConfig(), 1)
    assert random_forest_config(2).n_estimators == 100
    assert random_forest_config(2).bootstrap is True
    et = extra_trees_config(3)
    assert (et.n_estimators, et.bootstrap, et.threshold_mode) == (100, False, "random")


def test_ensemble_of_one_equals_single_tree_bitwise():
    X, y = _step_data(50)
    cfg = BaggedConfig(n_estimators=1, bootstrap=False, threshold_mode="exact", seed=5)
    model = fit_bagged_trees(X, y, cfg)
    rng = substream(5, STREAM_BAGGED, list(ModelKind).index(ModelKind.BAGGING), 0)
    lone = fit_tree(X, y, None, TreeConfig(threshold_mode="exact"), rng)
    np.testing.assert_array_equal(model.predict(X), lone.predict(X))


def test_bagged_prediction_within_member_hull():
    X, y = _step_data(80)
    for cfg, kind in [
        (bagging_config(1), ModelKind.BAGGING),
        (BaggedConfig(20, True, "exact", TreeConfig(max_depth=3), 2), ModelKind.RANDOM_FOREST),
        (BaggedConfig(15, False, "random", TreeConfig(), 3), ModelKind.EXTRA_TREES),
    ]:
        model = fit_bagged_trees(X, y, cfg, kind)
        member = np.stack([t.predict(X) for t in model.trees])
        pred = model.predict(X)
        assert np.all(pred >= member.min(axis=0) - 1e-12)
        assert np.all(pred <= member.max(axis=0) + 1e-12)


def test_random_forest_beats_mean_predictor_regression_pin():
    # pinned from a one-off run of this exact configuration
    X, y = _step_data()
    split = train_test_split(200, 0.25, seed=7)
    model = fit_model(ModelKind.RANDOM_FOREST, X[split.train], y[split.train], seed=7)
    r = evaluate(y[split.test], model.predict(X[split.test]))
    assert r.r2 > 0.0
    assert r.r2 == pytest.approx(0.9143677125549046, abs=1e-9)


def test_bagged_kinds_differ_with_same_seed():
    X, y = _step_data(60)
    bag = fit_model(ModelKind.BAGGING, X, y, seed=4)
    rf = fit_model(ModelKind.RANDOM_FOREST, X, y, seed=4)
    assert not np.array_equal(bag.trees[0].predict(X), rf.trees[0].predict(X))


# --- weighted median and AdaBoost ---------------------------------------------


def test_weighted_median_examples():
    assert weighted_median([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]) == 2.0
    assert weighted_median([5.5], [0.1]) == 5.5
    assert weighted_median([1.0, 2.0, 3.0], [1.0, 1.0, 3.0]) == 3.0
    # unsorted input: sorted values [1,2,3] carry weights [3,1,1], cum [3,4,5], half 2.5
    assert weighted_median([3.0, 1.0, 2.0], [1.0, 3.0, 1.0]) == 1.0


def test_weighted_median_errors():
    with pytest.raises(EmptyInput):
        weighted_median([], [])
    with pytest.raises(DimensionMismatch):
        weighted_median([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        weighted_median([1.0, 2.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        weighted_median([1.0, 2.0], [1.0, -1.0])


def test_adaboost_zero_loss_shortcut():
    # depth-3 trees fit 4 distinct points exactly: stage 1 has zero error
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 1.0, 4.0, 9.0])
    model = fit_adaboost_r2(X, y, AdaConfig(seed=1))
    assert len(model.trees) == 1
    assert model.stage_weights == [1.0]
    np.testing.assert_array_equal(model.predict(X), y)


def test_adaboost_weight_sums_and_betas():
    X, y = _step_data(120, seed=9, noise=2.0)
    model = fit_adaboost_r2(X, y, AdaConfig(seed=2))
    assert len(model.trees) >= 2
    for s in model.weight_sums:
        assert s == pytest.approx(1.0, abs=1e-12)
    for beta in model.stage_betas:
        assert 0.0 < beta < 1.0
    for sw in model.stage_weights:
        assert sw > 0.0


def test_adaboost_identical_stage_predictions_median():
    X = np.array([[0.0], [1.0]])
    tree = fit_tree(X, np.array([2.0, 2.0]))
    from estatebench.ensemble import AdaBoostModel

    model = AdaBoostModel(ModelKind.ADA_BOOST, [tree, tree, tree], [0.2, 1.0, 0.5], AdaConfig())
    np.testing.assert_array_equal(model.predict(X), [2.0, 2.0])


def test_adaboost_loss_variants_fit():
    X, y = _step_data(60, seed=12, noise=2.0)
    for loss in ("linear", "square", "exponential"):
        model = fit_adaboost_r2(X, y, AdaConfig(n_stages=5, loss=loss, seed=3))
        assert np.all(np.isfinite(model.predict(X)))


# --- gradient boosting ---------------------------------------------------------


def test_gbr_zero_learning_rate_is_mean():
    X, y = _step_data(40)
    model = fit_gradient_boosting(X, y, BoostConfig(n_stages=5, learning_rate=0.0))
    np.testing.assert_allclose(model.predict(X), np.full(40, y.mean()), rtol=1e-15)


def test_gbr_single_stage_unrolled_bitwise():
    X, y = _step_data(50)
    model = fit_gradient_boosting(X, y, BoostConfig(n_stages=1, learning_rate=1.0))
    baseline = float(np.mean(y))
    tree = fit_tree(X, y - np.full(len(y), baseline), None, TreeConfig(max_depth=3), substream(0, 0))
    np.testing.assert_array_equal(model.predict(X), baseline + tree.predict(X))


def test_gbr_training_mse_non_increasing():
    X, y = _step_data(200, seed=5, noise=2.0)
    model = fit_gradient_boosting(X, y, BoostConfig(n_stages=100))
    mses = model.stage_train_mse
    assert len(mses) == 100
    assert all(a >= b for a, b in zip(mses, mses[1:]))


# --- hist gradient boosting -----------------------------------------------------


def test_hist_first_split_matches_exact_on_small_cardinality():
    rng = np.random.default_rng(8)
    X = rng.integers(0, 12, size=(150, 3)).astype(float)
    y = rng.normal(size=150) + X[:, 1] * 2
    spec, binned = build_bins(X)
    # bin thresholds are exactly the exact-mode midpoints
    for j in range(3):
        distinct = np.unique(X[:, j])
        np.testing.assert_array_equal(spec.thresholds[j], (distinct[:-1] + distinct[1:]) / 2)
    from estatebench.tree import fit_hist_tree

    hist = fit_hist_tree(binned, spec, -y, np.ones(150), HistTreeConfig(max_leaf_nodes=2, min_samples_leaf=1))
    exact = find_best_split(X, y, np.ones(150), range(3), "exact")
    assert hist.feature[0] == exact.feature
    assert hist.threshold[0] == exact.threshold


def test_hist_gbr_single_stage_matches_exact_depth_one():
    X = np.array([[1.0], [2.0], [10.0], [11.0]])
    y = np.array([1.0, 1.0, 10.0, 10.0])
    cfg = HistBoostConfig(n_stages=1, learning_rate=1.0,
                          tree=HistTreeConfig(max_leaf_nodes=2, min_samples_leaf=1))
    hist = fit_hist_gradient_boosting(X, y, cfg)
    baseline = float(np.mean(y))
    tree = fit_tree(X, y - baseline, None, TreeConfig(max_depth=1), substream(0, 0))
    np.testing.assert_allclose(hist.predict(X), baseline + tree.predict(X), rtol=1e-15)


def test_hist_gbr_fits_benchmark_shape():
    X, y = _step_data(150, seed=6, noise=1.0)
    model = fit_hist_gradient_boosting(X, y, HistBoostConfig(n_stages=20))
    assert evaluate(y, model.predict(X)).r2 > 0.5


# --- ridge ---------------------------------------------------------------------


def test_ridge_self_regression():
    y = np.array([3.0, 7.0, 1.0, 9.0, 4.0])
    model = fit_ridge(y[:, None], y, lam=0.0)
    assert model.weights[0] == pytest.approx(1.0, rel=1e-12)
    assert model.intercept == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(model.predict(y[:, None]), y, rtol=1e-12)


def test_ridge_shrinkage_limit():
    rng = np.random.default_rng(13)
    Z = rng.normal(size=(50, 3))
    y = Z @ [1.0, -2.0, 0.5] + rng.normal(size=50) * 0.1
    model = fit_ridge(Z, y, lam=1e12)
    assert np.all(np.abs(model.weights) < 1e-6)
    np.testing.assert_allclose(model.predict(Z), np.full(50, y.mean()), atol=1e-4)


def test_ridge_normal_equation_residual_orthogonality():
    rng = np.random.default_rng(14)
    Z = rng.normal(size=(40, 4))
    y = rng.normal(size=40)
    model = fit_ridge(Z, y, lam=0.0)
    residual = y - model.predict(Z)
    Zc = Z - Z.mean(axis=0)
    scale = np.abs(Zc.T @ y).max() + 1.0
    assert np.all(np.abs(Zc.T @ residual) <= 1e-8 * scale)


def test_ridge_singular_system():
    col = np.arange(10.0)
    Z = np.column_stack([col, col])
    with pytest.raises(SingularSystem):
        fit_ridge(Z, col, lam=0.0)
    fit_ridge(Z, col, lam=1.0)  # regularized solve is fine


# --- stacking -------------------------------------------------------------------


def test_stacking_folds_partition():
    folds = stacking_folds(53, 5, seed=3)
    sizes = [len(f) for f in folds]
    assert sum(sizes) == 53
    assert max(sizes) - min(sizes) <= 1
    assert sorted(np.concatenate(folds).tolist()) == list(range(53))


def test_stacking_oof_no_leakage_spot_check():
    X, y = _step_data(50, seed=15, noise=0.5)
    cfg = StackingConfig(base_kinds=(ModelKind.BAGGING,), k_folds=5, seed=11)
    Z = stacking_oof_matrix(X, y, cfg)
    for i in (0, 17, 49):
        y_mut = y.copy()
        y_mut[i] += 1000.0
        Z_mut = stacking_oof_matrix(X, y_mut, cfg)
        np.testing.assert_array_equal(Z_mut[i], Z[i])


def test_stacking_near_identity_on_trivially_learnable_data():
    # every fold model predicts the clean step exactly, so OOF == y and the
    # lightly regularized meta-learner approaches the identity
    X = np.column_stack([np.repeat([0.0, 1.0], 25)])
    y = np.repeat([0.0, 10.0], 25)
    cfg = StackingConfig(base_kinds=(ModelKind.BAGGING,), k_folds=5, lam=1e-9, seed=2)
    Z = stacking_oof_matrix(X, y, cfg)
    np.testing.assert_array_equal(Z[:, 0], y)
    model = fit_stacking(X, y, cfg)
    assert model.ridge.weights[0] == pytest.approx(1.0, rel=1e-6)
    np.testing.assert_allclose(model.predict(X), y, atol=1e-6)


def test_stacking_requires_enough_rows():
    X, y = _step_data(8)
    with pytest.raises(ValueError):
        fit_stacking(X, y, StackingConfig(base_kinds=(ModelKind.BAGGING,), k_folds=5))


# --- voting ---------------------------------------------------------------------


def test_voting_identical_bases_equals_single():
    X, y = _step_data(40)
    cfg = VotingConfig(base_kinds=(ModelKind.GRADIENT_BOOSTING, ModelKind.GRADIENT_BOOSTING), seed=1)
    voting = fit_voting(X, y, cfg)
    single = fit_model(ModelKind.GRADIENT_BOOSTING, X, y)
    np.testing.assert_allclose(voting.predict(X), single.predict(X), rtol=1e-15)


def test_voting_degenerate_weights_select_base():
    X, y = _step_data(40)
    cfg = VotingConfig(base_kinds=(ModelKind.GRADIENT_BOOSTING, ModelKind.BAGGING), weights=(1.0, 0.0), seed=1)
    voting = fit_voting(X, y, cfg)
    np.testing.assert_allclose(voting.predict(X), voting.base_models[0].predict(X), rtol=1e-15)


def test_voting_within_convex_hull():
    X, y = _step_data(60)
    cfg = VotingConfig(base_kinds=(ModelKind.BAGGING, ModelKind.GRADIENT_BOOSTING), weights=(2.0, 1.0), seed=6)
    voting = fit_voting(X, y, cfg)
    member = np.stack([m.predict(X) for m in voting.base_models])
    pred = voting.predict(X)
    assert np.all(pred >= member.min(axis=0) - 1e-9)
    assert np.all(pred <= member.max(axis=0) + 1e-9)


# --- cross-cutting ----------------------------------------------------------------


@pytest.mark.parametrize("kind,config", [
    (ModelKind.BAGGING, BaggedConfig(3, True, "exact", TreeConfig(max_depth=4), 7)),
    (ModelKind.RANDOM_FOREST, BaggedConfig(3, True, "exact", TreeConfig(max_depth=4), 7)),
    (ModelKind.EXTRA_TREES, BaggedConfig(3, False, "random", TreeConfig(max_depth=4), 7)),
    (ModelKind.ADA_BOOST, AdaConfig(n_stages=4, seed=7)),
    (ModelKind.GRADIENT_BOOSTING, BoostConfig(n_stages=4)),
    (ModelKind.HIST_GRADIENT_BOOSTING, HistBoostConfig(n_stages=4)),
    (ModelKind.STACKING, StackingConfig(base_kinds=(ModelKind.BAGGING,), k_folds=3, seed=7)),
    (ModelKind.VOTING, VotingConfig(base_kinds=(ModelKind.BAGGING, ModelKind.GRADIENT_BOOSTING), seed=7)),
])
def test_determinism_and_json_round_trip(kind, config):
    X, y = _step_data(45, seed=21, noise=1.5)
    a = fit_model(kind, X, y, seed=7, config=config)
    b = fit_model(kind, X, y, seed=7, config=config)
    probe = np.random.default_rng(1).uniform(0, 1, size=(20, 3))
    np.testing.assert_array_equal(a.predict(probe), b.predict(probe))
    np.testing.assert_array_equal(a.predict(probe), a.predict(probe))  # reentrant

    revived = FittedModel.from_dict(a.to_dict())
    assert revived.kind is kind
    np.testing.assert_array_equal(revived.predict(probe), a.predict(probe))

    assert a.predict(np.empty((0, 3))).shape == (0,)
    with pytest.raises(DimensionMismatch):
        a.predict(np.ones((2, 5)))


def test_fit_rejects_tiny_input():
    with pytest.raises(ValueError):
        fit_model(ModelKind.BAGGING, np.ones((1, 2)), np.ones(1))
    with pytest.raises(DimensionMismatch):
        fit_model(ModelKind.BAGGING, np.ones((4, 2)), np.ones(3))
