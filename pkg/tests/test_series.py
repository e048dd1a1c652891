import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simintervals.errors import ConfigError, DataError
from simintervals.series import (
    LagDataset,
    TimeSeries,
    build_lag_dataset,
    chronological_split,
    fit_standardizer,
    load_csv,
)


def _series(values, name="s", start="2021-01-04"):
    ts = np.datetime64(start) + np.arange(len(values))
    return TimeSeries(name, ts, values)


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


class TestLoadCsv:
    def test_identity(self, write_csv):
        path = write_csv("date,AAPL\n2024-01-02,1\n2024-01-03,2\n2024-01-04,3\n")
        (s,) = load_csv(path, "date", ["AAPL"])
        assert s.name == "AAPL"
        assert len(s) == 3
        np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])

    def test_blank_cell_dropped_and_logged(self, write_csv, caplog):
        path = write_csv("date,AAPL\n2024-01-02,1\n2024-01-03,\n2024-01-04,3\n2024-01-05,4\n")
        with caplog.at_level(logging.WARNING):
            (s,) = load_csv(path, "date", ["AAPL"])
        assert len(s) == 3
        assert "dropped 1 row" in caplog.text

    def test_drop_is_row_wise_across_requested_columns(self, write_csv):
        path = write_csv("date,a,b,c\n2024-01-02,1,2,\n2024-01-03,3,,5\n2024-01-04,5,6,7\n")
        a, c = load_csv(path, "date", ["a", "c"])
        np.testing.assert_array_equal(a.values, [3, 5])
        np.testing.assert_array_equal(c.values, [5, 7])

    def test_unparseable_value_dropped(self, write_csv):
        path = write_csv("date,a\n2024-01-02,1\n2024-01-03,n/a\n2024-01-04,abc\n")
        (s,) = load_csv(path)
        assert len(s) == 1

    def test_sorted_chronologically(self, write_csv):
        path = write_csv("date,a\n2024-01-05,3\n2024-01-02,1\n2024-01-03,2\n")
        (s,) = load_csv(path)
        np.testing.assert_array_equal(s.values, [1, 2, 3])
        assert np.all(np.diff(s.timestamps).astype(int) > 0)

    def test_duplicate_timestamp(self, write_csv):
        path = write_csv("date,a\n2024-01-02,1\n2024-01-02,2\n")
        with pytest.raises(DataError, match="duplicate"):
            load_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="no such file"):
            load_csv(str(tmp_path / "nope.csv"))

    def test_missing_column(self, write_csv):
        path = write_csv("date,a\n2024-01-02,1\n")
        with pytest.raises(DataError, match="'b'"):
            load_csv(path, "date", ["b"])

    def test_zero_usable_rows(self, write_csv):
        path = write_csv("date,a\n2024-01-02,\nnot-a-date,3\n")
        with pytest.raises(DataError, match="zero usable rows"):
            load_csv(path)


class TestTimeSeries:
    def test_rejects_non_increasing(self):
        with pytest.raises(DataError):
            TimeSeries("x", np.array(["2024-01-02", "2024-01-02"], dtype="datetime64[D]"), [1, 2])

    def test_rejects_nan(self):
        with pytest.raises(DataError):
            _series([1.0, np.nan])

    def test_rejects_empty(self):
        with pytest.raises(DataError):
            _series([])


class TestLagDataset:
    def test_hand_construction(self):
        ds = build_lag_dataset(_series([1, 2, 3, 4]), [], 2)
        np.testing.assert_array_equal(ds.features, [[2, 1], [3, 2]])
        np.testing.assert_array_equal(ds.target, [3, 4])
        assert ds.column_labels == (("s", 1), ("s", 2))

    def test_boundary_single_row(self):
        assert build_lag_dataset(_series([1, 2]), [], 1).rows == 1

    def test_lag_too_large(self):
        with pytest.raises(DataError):
            build_lag_dataset(_series([1, 2, 3, 4]), [], 4)

    def test_predictor_columns_follow_target(self):
        y = _series([1, 2, 3, 4, 5], "y")
        x = _series([10, 20, 30, 40, 50], "x")
        ds = build_lag_dataset(y, [x], 2)
        assert ds.features.shape == (3, 4)
        assert ds.column_labels == (("y", 1), ("y", 2), ("x", 1), ("x", 2))
        np.testing.assert_array_equal(ds.features[0], [2, 1, 20, 10])

    def test_mismatched_grid(self):
        y = _series([1, 2, 3, 4], "y")
        x = _series([1, 2, 3, 4], "x", start="2021-02-01")
        with pytest.raises(DataError, match="grid"):
            build_lag_dataset(y, [x], 1)

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.integers(3, 30),
        n_pred=st.integers(0, 3),
        max_lag=st.integers(1, 5),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_no_look_ahead(self, n, n_pred, max_lag, seed):
        if max_lag >= n:
            return
        rng = np.random.default_rng(seed)
        # values encode their own sample index, so each feature reveals its source time
        y = _series(np.arange(n) * 1.0, "y")
        preds = [_series(np.arange(n) + 1000.0 * (i + 1), f"x{i}") for i in range(n_pred)]
        rng.shuffle(preds)
        ds = build_lag_dataset(y, preds, max_lag)
        assert ds.rows == n - max_lag
        assert ds.features.shape[1] == (1 + n_pred) * max_lag
        src_time = np.mod(ds.features, 1000.0)
        target_time = ds.target[:, None]
        assert np.all(src_time < target_time)
        for j, (_, lag) in enumerate(ds.column_labels):
            np.testing.assert_array_equal(src_time[:, j], ds.target - lag)


class TestSplit:
    def _ds(self, rows):
        return LagDataset(np.arange(rows, dtype=float)[:, None], np.arange(rows, dtype=float), (("s", 1),))

    @pytest.mark.parametrize("rows,frac,n_train,n_test", [(10, 0.8, 8, 2), (2, 0.5, 1, 1), (7, 0.5, 3, 4)])
    def test_floor_arithmetic(self, rows, frac, n_train, n_test):
        tr, te = chronological_split(self._ds(rows), frac)
        assert (tr.rows, te.rows) == (n_train, n_test)
        np.testing.assert_array_equal(np.concatenate([tr.target, te.target]), np.arange(rows))
        assert te.offset == n_train

    def test_near_one_fraction_still_leaves_a_test_row(self):
        # floor(0.99 * 3) = 2, so the test partition can never be empty for fraction < 1
        tr, te = chronological_split(self._ds(3), 0.99)
        assert (tr.rows, te.rows) == (2, 1)

    def test_empty_train(self):
        with pytest.raises(DataError):
            chronological_split(self._ds(3), 0.1)

    @pytest.mark.parametrize("frac", [0.0, 1.0, -0.5])
    def test_fraction_range(self, frac):
        with pytest.raises(ConfigError):
            chronological_split(self._ds(10), frac)

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        ds = LagDataset(rng.normal(size=(50, 3)), rng.normal(size=50), (("a", 1), ("a", 2), ("a", 3)))
        a = chronological_split(ds, 0.7)
        b = chronological_split(ds, 0.7)
        for pa, pb in zip(a, b):
            assert pa.features.tobytes() == pb.features.tobytes()
            assert pa.target.tobytes() == pb.target.tobytes()


class TestStandardizer:
    def test_hand_values(self):
        std = fit_standardizer(np.array([[1.0], [3.0]]))
        assert std.means[0] == 2.0 and std.scales[0] == 1.0
        np.testing.assert_array_equal(std.apply([[1.0], [3.0]]).ravel(), [-1.0, 1.0])

    def test_constant_column(self):
        with pytest.warns(RuntimeWarning, match="zero-variance"):
            std = fit_standardizer(np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]]))
        assert std.scales[0] == 1.0
        np.testing.assert_array_equal(std.apply([[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]])[:, 0], 0.0)

    def test_train_means_zero(self):
        X = np.random.default_rng(0).normal(5, 3, size=(40, 4))
        Z = fit_standardizer(X).apply(X)
        np.testing.assert_allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(Z.std(axis=0), 1.0, rtol=1e-12)

    def test_applied_unchanged_to_test(self):
        rng = np.random.default_rng(1)
        tr, te = rng.normal(size=(20, 2)), rng.normal(size=(5, 2))
        std = fit_standardizer(tr)
        np.testing.assert_array_equal(std.apply(te), (te - tr.mean(0)) / tr.std(0))

    def test_empty(self):
        with pytest.raises(DataError):
            fit_standardizer(np.empty((0, 2)))

    def test_column_mismatch(self):
        with pytest.raises(DataError):
            fit_standardizer(np.ones((3, 2)) * [[1], [2], [3]]).apply(np.ones((2, 3)))

    @settings(max_examples=100, deadline=None)
    @given(
        rows=st.integers(2, 20),
        cols=st.integers(1, 5),
        seed=st.integers(0, 2**32 - 1),
        loc=st.floats(-1e3, 1e3),
        spread=st.floats(1e-3, 1e3),
    )
    def test_round_trip(self, rows, cols, seed, loc, spread):
        X = np.random.default_rng(seed).normal(loc, spread, size=(rows, cols))
        std = fit_standardizer(X)
        back = std.invert(std.apply(X))
        np.testing.assert_allclose(back, X, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(X).max()))
