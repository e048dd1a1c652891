import numpy as np
import pytest

from simintervals.distances import MetricParams, dtw
from simintervals.errors import ConfigError, DataError
from simintervals.intervals import (
    DEFAULT_METHODS,
    IntervalSeries,
    MethodConfig,
    build_interval,
    compare_methods,
    conventional_interval,
    evaluate,
    similarity_interval,
    similarity_margin,
    z_value,
)

SIM_METHODS = ["euclidean", "dtw", "lcss", "hausdorff", "frechet", "twed"]


@pytest.fixture(scope="module")
def forecast_case():
    rng = np.random.default_rng(42)
    n_hist, n_test = 60, 80
    truth = 100 + np.cumsum(rng.normal(size=n_hist + n_test))
    pred = truth + rng.normal(scale=1.5, size=truth.size)
    return {
        "hist_pred": pred[:n_hist],
        "hist_act": truth[:n_hist],
        "pred": pred[n_hist:],
        "act": truth[n_hist:],
    }


def _build(method, case, scale=1.0, actual=None):
    cfg = MethodConfig(method, scale=scale)
    act = case["act"] if actual is None else actual
    return build_interval(cfg, case["pred"], act, case["hist_pred"], case["hist_act"])


class TestConventional:
    def test_hand_margin(self):
        # residuals [0, 2, 4] have sample SD exactly 2
        iv = conventional_interval([100.0], [0.0, 2.0, 4.0], 0.95, ci_n=16)
        me = z_value(0.95) * 2 / 4
        assert me == pytest.approx(0.98, abs=1e-4)
        assert iv.lowers[0] == pytest.approx(100 - me, abs=1e-12)
        assert iv.uppers[0] == pytest.approx(100 + me, abs=1e-12)
        assert (iv.lowers[0], iv.uppers[0]) == pytest.approx((99.02, 100.98), abs=1e-4)

    def test_zero_residuals(self):
        iv = conventional_interval([5.0, 6.0], np.zeros(10), 0.95)
        np.testing.assert_array_equal(iv.lowers, iv.uppers)
        np.testing.assert_array_equal(iv.centers, [5.0, 6.0])

    @pytest.mark.parametrize("conf", [0.0, 1.0, 1.5, -0.1])
    def test_confidence_range(self, conf):
        with pytest.raises(ConfigError):
            conventional_interval([1.0], [0.0, 1.0], conf)

    def test_needs_residuals(self):
        with pytest.raises(DataError):
            conventional_interval([1.0], [0.5], 0.95)

    def test_z_value(self):
        assert z_value(0.95) == pytest.approx(1.959963984540054, abs=1e-12)

    def test_rolling_window_uses_realized_residuals(self):
        hist = np.array([1.0, -1.0, 2.0, -2.0])
        pred = np.array([10.0, 10.0, 10.0])
        act = np.array([13.0, 7.0, 50.0])
        iv = conventional_interval(pred, hist, 0.9, actual=act, window=3)
        z = z_value(0.9)
        resid = np.concatenate([hist, act - pred])
        for t in range(3):
            sd = np.std(resid[4 + t - 3: 4 + t], ddof=1)
            assert iv.uppers[t] - pred[t] == pytest.approx(z * sd, rel=1e-12)

    def test_fixed_window_without_actual(self):
        iv = conventional_interval([1.0, 2.0], [0.0, 2.0, 4.0, 100.0], 0.95, window=3)
        widths = iv.widths
        assert widths[0] == widths[1]
        assert widths[0] == pytest.approx(2 * z_value(0.95) * np.std([2.0, 4.0, 100.0], ddof=1))


class TestSimilarity:
    def test_dtw_hand_case(self):
        # 2x2 grid costs [[0, 2], [0, 2]]: cheapest path 0 + 2 = 2, margin 2 / w = 1
        assert dtw([10, 10], [10, 12]) == 2.0
        assert similarity_margin("dtw", [10, 10], [10, 12]) == 1.0
        iv = similarity_interval("dtw", [50.0], [0.0], [10, 10], [10, 12], window=2)
        assert (iv.lowers[0], iv.uppers[0]) == (49.0, 51.0)

    @pytest.mark.parametrize("method", ["euclidean", "dtw", "hausdorff", "frechet", "twed"])
    def test_identical_windows_give_zero_width(self, method):
        hist = np.array([1.0, 3.0, 2.0, 5.0, 4.0])
        iv = similarity_interval(method, [7.0], [9.0], hist, hist, window=5)
        assert iv.widths[0] == 0.0

    def test_lcss_full_match_floor(self):
        A = np.array([1.0, 3.0, 2.0, 5.0])
        m = similarity_margin("lcss", A, A, scale=2.0)
        assert m == pytest.approx(2.0 * np.std(A), rel=1e-15)

    def test_lcss_no_match_ceiling(self):
        A = np.array([0.0, 1.0, 0.0, 1.0])
        P = A + 100
        m = similarity_margin("lcss", P, A, MetricParams(lcss_epsilon=0.1))
        assert m == pytest.approx(np.std(A) * (1 + 4))

    def test_lcss_flat_window(self):
        A = np.full(5, 3.0)
        assert similarity_margin("lcss", A, A) == 0.0

    def test_max_type_not_divided(self):
        P, A = np.zeros(4), np.array([0.0, 0.0, 3.0, 0.0])
        assert similarity_margin("hausdorff", P, A, MetricParams(embed="value")) == 3.0
        assert similarity_margin("euclidean", P, A) == 3.0 / 4

    def test_unknown_method(self):
        with pytest.raises(ConfigError):
            similarity_interval("cosine", [1.0], [1.0], [1, 2], [1, 2], window=2)

    def test_insufficient_warmup(self):
        with pytest.raises(DataError, match="warm-up"):
            similarity_interval("dtw", [1.0], [1.0], [1.0, 2.0], [1.0, 2.0], window=3)

    def test_non_positive_scale(self):
        with pytest.raises(ConfigError):
            similarity_interval("dtw", [1.0], [1.0], [1.0, 2.0], [1.0, 2.0], window=2, scale=0)

    @pytest.mark.parametrize("method", SIM_METHODS + ["conventional"])
    def test_no_look_ahead(self, forecast_case, method):
        base = _build(method, forecast_case)
        rng = np.random.default_rng(7)
        T = len(forecast_case["act"])
        for t in rng.integers(0, T, size=10):
            mutated = forecast_case["act"].copy()
            mutated[t:] += rng.normal(scale=50, size=T - t)
            iv = _build(method, forecast_case, actual=mutated)
            np.testing.assert_array_equal(iv.lowers[: t + 1], base.lowers[: t + 1])
            np.testing.assert_array_equal(iv.uppers[: t + 1], base.uppers[: t + 1])


@pytest.mark.parametrize("method", SIM_METHODS + ["conventional"])
def test_symmetric_about_centers(forecast_case, method):
    iv = _build(method, forecast_case)
    np.testing.assert_allclose(iv.uppers - iv.centers, iv.centers - iv.lowers, atol=1e-12)
    assert np.all(iv.lowers <= iv.centers) and np.all(iv.centers <= iv.uppers)


@pytest.mark.parametrize("method", SIM_METHODS + ["conventional"])
def test_coverage_monotone_in_scale(forecast_case, method):
    cov = [evaluate(_build(method, forecast_case, c), forecast_case["act"]).coverage_pct for c in (0.25, 0.5, 1, 2, 4, 8)]
    assert cov == sorted(cov)


@pytest.mark.parametrize("method", SIM_METHODS + ["conventional"])
def test_width_linear_in_scale(forecast_case, method):
    w1 = evaluate(_build(method, forecast_case, 1.0), forecast_case["act"]).mean_width
    w3 = evaluate(_build(method, forecast_case, 3.0), forecast_case["act"]).mean_width
    assert w3 == pytest.approx(3 * w1, rel=1e-12)


class TestEvaluate:
    def test_single(self):
        rep = evaluate(IntervalSeries("m", [1.0], [0.0], [2.0]), [1.0])
        assert (rep.coverage_pct, rep.mean_width, rep.n_points) == (100.0, 2.0, 1)

    def test_half_covered(self):
        rep = evaluate(IntervalSeries("m", [1.0, 2.0], [0.0, 0.0], [2.0, 4.0]), [1.0, 5.0])
        assert rep.coverage_pct == 50.0
        assert rep.mean_width == 3.0

    def test_bound_counts_as_covered(self):
        iv = IntervalSeries("m", [1.0, 1.0], [0.0, 0.0], [2.0, 2.0])
        assert evaluate(iv, [0.0, 2.0]).coverage_pct == 100.0

    def test_coverage_is_exact_ratio(self):
        iv = IntervalSeries("m", np.zeros(3), -np.ones(3), np.ones(3))
        assert evaluate(iv, [0.0, 5.0, 5.0]).coverage_pct == 100.0 * 1 / 3

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            evaluate(IntervalSeries("m", [1.0], [0.0], [2.0]), [1.0, 2.0])

    def test_bounds_must_bracket(self):
        with pytest.raises(DataError):
            IntervalSeries("m", [1.0], [1.5], [2.0])


class TestCompare:
    def test_single_conventional(self, forecast_case):
        c = forecast_case
        reps = compare_methods(c["pred"], c["act"], [MethodConfig("conventional")], c["hist_pred"], c["hist_act"])
        assert len(reps) == 1 and reps[0].method == "conventional"

    def test_empty(self, forecast_case):
        c = forecast_case
        with pytest.raises(ConfigError):
            compare_methods(c["pred"], c["act"], [], c["hist_pred"], c["hist_act"])

    def test_order_and_schedule_independence(self, forecast_case):
        c = forecast_case
        configs = [MethodConfig(m) for m in reversed(DEFAULT_METHODS)]
        seq = compare_methods(c["pred"], c["act"], configs, c["hist_pred"], c["hist_act"])
        par = compare_methods(c["pred"], c["act"], configs, c["hist_pred"], c["hist_act"], max_workers=4)
        assert [r.method for r in seq] == list(reversed(DEFAULT_METHODS))
        assert seq == par

    def test_label_override(self, forecast_case):
        c = forecast_case
        cfgs = [MethodConfig("dtw", scale=1.0, label="dtw_x1"), MethodConfig("dtw", scale=2.0, label="dtw_x2")]
        a, b = compare_methods(c["pred"], c["act"], cfgs, c["hist_pred"], c["hist_act"])
        assert (a.method, b.method) == ("dtw_x1", "dtw_x2")
        assert b.mean_width == pytest.approx(2 * a.mean_width)

    def test_unknown_method_config(self):
        with pytest.raises(ConfigError):
            MethodConfig("bootstrap")
