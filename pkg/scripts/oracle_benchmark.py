#!/usr/bin/env python3
"""Independent oracle for the synthetic benchmark regression values.

Runs scikit-learn implementations of the eight models, configured with the
same pinned hyperparameters, on the exact preprocessing output (matrices and
split) the benchmark uses. The resulting R^2/RMSE/MAE values are frozen into
tests/test_acceptance.py as expected values with +-0.02 R^2 and +-3% RMSE/MAE
tolerances. Re-run this script to regenerate them:

    python3 scripts/oracle_benchmark.py
"""

from __future__ import annotations

import json
import math

import numpy as np
from sklearn.ensemble import (
    AdaBoostRegressor,
    BaggingRegressor,
    ExtraTreesRegressor,
    GradientBoostingRegressor,
    HistGradientBoostingRegressor,
    RandomForestRegressor,
    StackingRegressor,
    VotingRegressor,
)
from sklearn.linear_model import Ridge
from sklearn.metrics import mean_absolute_error, mean_squared_error, r2_score
from sklearn.model_selection import KFold
from sklearn.tree import DecisionTreeRegressor

from estatebench.bench import SyntheticSpec, generate_synthetic
from estatebench.preprocess import (
    dedupe_rows,
    drop_columns,
    drop_missing_columns,
    encode,
    fit_ordinal_encoding,
    train_test_split,
)

SEED = 42
N = 1200
NOISE = 6000.0


def models(seed: int) -> dict:
    def rf():
        return RandomForestRegressor(n_estimators=100, max_features=1.0, random_state=seed)

    def gbr():
        return GradientBoostingRegressor(
            n_estimators=100, learning_rate=0.1, max_depth=3, criterion="squared_error", random_state=seed
        )

    def et():
        return ExtraTreesRegressor(n_estimators=100, bootstrap=False, random_state=seed)

    bases = [("rf", rf()), ("gbr", gbr()), ("et", et())]
    return {
        "Ada Boost Regressor": AdaBoostRegressor(
            estimator=DecisionTreeRegressor(max_depth=3),
            n_estimators=50,
            learning_rate=1.0,
            loss="linear",
            random_state=seed,
        ),
        "Bagging Regressor": BaggingRegressor(n_estimators=10, random_state=seed),
        "Extra Trees Regressor": et(),
        "Gradient Boosting Regressor": gbr(),
        "Hist Gradient Boosting Regressor": HistGradientBoostingRegressor(
            max_iter=100,
            learning_rate=0.1,
            max_leaf_nodes=31,
            min_samples_leaf=20,
            l2_regularization=0.0,
            max_bins=255,
            early_stopping=False,
            random_state=seed,
        ),
        "Random Forest Regressor": rf(),
        "Stacking Regressor": StackingRegressor(
            estimators=bases,
            final_estimator=Ridge(alpha=1.0),
            cv=KFold(n_splits=5, shuffle=True, random_state=seed),
        ),
        "Voting Regressor": VotingRegressor(estimators=bases),
    }


def main() -> None:
    ds = generate_synthetic(SyntheticSpec(n=N, noise_sigma=NOISE, seed=SEED))
    ds = drop_columns(ds, ["id"])
    ds = dedupe_rows(ds)
    ds, _ = drop_missing_columns(ds)
    features, target = encode(ds, fit_ordinal_encoding(ds))
    split = train_test_split(len(ds), 0.25, SEED)
    x_train, y_train = features.values[split.train], target[split.train]
    x_test, y_test = features.values[split.test], target[split.test]

    results = {}
    for name, model in models(SEED).items():
        model.fit(x_train, y_train)
        pred = model.predict(x_test)
        results[name] = {
            "r2": round(r2_score(y_test, pred), 6),
            "rmse": round(math.sqrt(mean_squared_error(y_test, pred)), 1),
            "mae": round(mean_absolute_error(y_test, pred), 1),
        }
        print(f"{name:<36} r2={results[name]['r2']:.3f} "
              f"rmse={results[name]['rmse']:.0f} mae={results[name]['mae']:.0f}")
    print()
    print("ORACLE_RESULTS =", json.dumps(results, indent=4))


if __name__ == "__main__":
    main()
