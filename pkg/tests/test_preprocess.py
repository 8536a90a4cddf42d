"""Tests for the preprocessing chain."""

import numpy as np
import pytest

from estatebench.preprocess import (
    EncodingMap,
    TargetDropForbidden,
    TargetHasMissing,
    UnknownColumn,
    UnseenCategory,
    dedupe_rows,
    drop_columns,
    drop_missing_columns,
    encode,
    fit_ordinal_encoding,
    train_test_split,
)
from estatebench.tabular import DEFAULT_SCHEMA, ColumnSchema, Dataset, TableSchema


def _schema(*cols):
    return TableSchema(cols)


SMALL = _schema(
    ColumnSchema("total_area", "real"),
    ColumnSchema("market", "text"),
    ColumnSchema("price", "integer", "target"),
)


def _listing(i=1, area=60.0, market="secondary", price=50000):
    return (i, "apartment", area, 3, 9, "renovated", "brick", "yes", "central", "1990-2000", market, price)


def test_drop_columns():
    ds = Dataset(DEFAULT_SCHEMA, [_listing()])
    out = drop_columns(ds, ["id"])
    assert len(out.schema.columns) == 11
    assert "id" not in out.schema.names
    assert out.rows[0][0] == "apartment"

    assert drop_columns(ds, []) is ds
    with pytest.raises(TargetDropForbidden):
        drop_columns(ds, ["price"])
    with pytest.raises(UnknownColumn):
        drop_columns(ds, ["rooms"])


def test_dedupe_rows():
    a = (60.0, "primary", 1)
    b = (70.0, "primary", 2)
    assert dedupe_rows(Dataset(SMALL, [a, b, a])).rows == (a, b)
    distinct = Dataset(SMALL, [a, b])
    assert dedupe_rows(distinct).rows == distinct.rows
    assert dedupe_rows(Dataset(SMALL, [a, a, a])).rows == (a,)


def test_dedupe_leaves_no_duplicates_property():
    rng = np.random.default_rng(3)
    for _ in range(20):
        rows = [(float(rng.integers(0, 3)), "m", int(rng.integers(0, 3))) for _ in range(rng.integers(1, 25))]
        out = dedupe_rows(Dataset(SMALL, rows)).rows
        assert len(set(out)) == len(out)
        assert len(out) <= len(rows)


def test_drop_missing_columns_threshold_zero():
    rows = [(None if i == 0 else 60.0, "primary", 10 + i) for i in range(100)]
    out, dropped = drop_missing_columns(Dataset(SMALL, rows), 0.0)
    assert dropped == ["total_area"]
    assert "total_area" not in out.schema.names
    assert len(out) == 100


def test_drop_missing_columns_no_missing():
    ds = Dataset(SMALL, [(60.0, "primary", 10), (61.0, "primary", 11)])
    out, dropped = drop_missing_columns(ds)
    assert dropped == []
    assert out.rows == ds.rows


def test_drop_missing_columns_nonzero_threshold_deletes_rows():
    rows = [(None if i == 0 else 60.0 + i, "primary", 10 + i) for i in range(100)]
    out, dropped = drop_missing_columns(Dataset(SMALL, rows), 0.05)
    assert dropped == []
    assert len(out) == 99
    assert all(None not in row for row in out.rows)


def test_drop_missing_target_errors():
    ds = Dataset(SMALL, [(60.0, "primary", None), (61.0, "primary", 11)])
    with pytest.raises(TargetHasMissing):
        drop_missing_columns(ds, 0.0)
    # nonzero threshold deletes the offending row instead
    out, _ = drop_missing_columns(ds, 0.5)
    assert len(out) == 1


def test_fit_ordinal_encoding_lexicographic():
    ds = Dataset(SMALL, [(1.0, "panel", 1), (2.0, "brick", 2), (3.0, "brick", 3)])
    enc = fit_ordinal_encoding(ds)
    assert enc.codes == {"market": {"brick": 0, "panel": 1}}

    single = Dataset(SMALL, [(1.0, "brick", 1)])
    assert fit_ordinal_encoding(single).codes["market"] == {"brick": 0}


def test_fit_ordinal_encoding_independent_columns():
    schema = _schema(
        ColumnSchema("market", "text"),
        ColumnSchema("furniture", "text"),
        ColumnSchema("price", "integer", "target"),
    )
    ds = Dataset(schema, [("primary", "no", 1), ("secondary", "yes", 2)])
    enc = fit_ordinal_encoding(ds)
    assert enc.codes == {
        "market": {"primary": 0, "secondary": 1},
        "furniture": {"no": 0, "yes": 1},
    }


def test_encode_direct_application():
    ds = Dataset(SMALL, [(60.0, "secondary", 50000)])
    mapping = EncodingMap({"market": {"primary": 0, "secondary": 1}})
    features, target = encode(ds, mapping)
    assert features.feature_names == ["total_area", "market"]
    np.testing.assert_array_equal(features.values, [[60.0, 1.0]])
    np.testing.assert_array_equal(target, [50000.0])


def test_encode_unseen_category():
    ds = Dataset(SMALL, [(60.0, "auction", 50000)])
    mapping = EncodingMap({"market": {"primary": 0, "secondary": 1}})
    with pytest.raises(UnseenCategory) as exc:
        encode(ds, mapping)
    assert exc.value.column == "market"
    assert exc.value.value == "auction"


def test_encode_after_fit_never_errors_property():
    rng = np.random.default_rng(11)
    cats = ["a", "b", "c", "dd"]
    for _ in range(25):
        rows = [
            (float(rng.normal()), str(rng.choice(cats)), int(rng.integers(0, 9)))
            for _ in range(int(rng.integers(1, 30)))
        ]
        ds = Dataset(SMALL, rows)
        enc = fit_ordinal_encoding(ds)
        features, target = encode(ds, enc)
        k = len(enc.codes["market"])
        col = features.values[:, features.feature_names.index("market")]
        assert np.all(col == np.floor(col))
        assert col.min() >= 0 and col.max() <= k - 1
        assert len(target) == len(ds)


def test_encoding_map_json_round_trip():
    enc = EncodingMap({"market": {"primary": 0, "secondary": 1}, "wall": {"brick": 0}})
    assert EncodingMap.from_json(enc.to_json()) == enc


def test_encode_requires_complete_dataset():
    ds = Dataset(SMALL, [(None, "primary", 5)])
    with pytest.raises(ValueError):
        fit_ordinal_encoding(ds)
    with pytest.raises(ValueError):
        encode(ds, EncodingMap({"market": {"primary": 0}}))


def test_split_sizes():
    split = train_test_split(1200, 0.25, seed=0)
    assert len(split.test) == 300
    assert len(split.train) == 900

    s8 = train_test_split(8, 0.25, seed=5)
    assert len(s8.test) == 2
    assert sorted(np.concatenate([s8.train, s8.test]).tolist()) == list(range(8))
    assert set(s8.train.tolist()).isdisjoint(s8.test.tolist())


def test_split_deterministic():
    a = train_test_split(100, 0.25, seed=9)
    b = train_test_split(100, 0.25, seed=9)
    np.testing.assert_array_equal(a.train, b.train)
    np.testing.assert_array_equal(a.test, b.test)
    c = train_test_split(100, 0.25, seed=10)
    assert not np.array_equal(a.test, c.test)


def test_split_partition_property():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(4, 200))
        frac = float(rng.uniform(0.05, 0.95))
        seed = int(rng.integers(0, 2**32))
        split = train_test_split(n, frac, seed)
        assert len(split.test) == round(n * frac)
        combined = sorted(np.concatenate([split.train, split.test]).tolist())
        assert combined == list(range(n))


def test_split_preconditions():
    with pytest.raises(ValueError):
        train_test_split(3, 0.25, 0)
    with pytest.raises(ValueError):
        train_test_split(10, 0.0, 0)
    with pytest.raises(ValueError):
        train_test_split(10, 1.0, 0)


def test_pipeline_idempotent():
    rows = [_listing(i=1), _listing(i=2), _listing(i=3, area=70.0), _listing(i=4, market="primary")]
    ds = Dataset(DEFAULT_SCHEMA, rows)
    once = drop_missing_columns(dedupe_rows(drop_columns(ds, ["id"])))[0]
    # rows 1 and 2 collapse once the id is gone
    assert len(once) == 3
    twice = drop_missing_columns(dedupe_rows(once))[0]
    assert twice.rows == once.rows
    assert twice.schema == once.schema
