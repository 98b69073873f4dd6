import csv

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sabeam.metrics import (MetricsReport, alignment_probability, error_cdf, fraction_below, rmse,
                            snr_linear, throughput_ratio, write_cdf_csv)


def test_rmse_examples():
    assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rmse([0.0, 0.0], [3.0, -3.0]) == 3.0
    y = np.linspace(-80, -30, 11)
    assert rmse(y, y + 2.5) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        rmse([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        rmse([], [])


def test_alignment_examples():
    rng = np.random.default_rng(0)
    Y = rng.normal(size=(500, 64))
    assert alignment_probability(Y, Y) == 1.0
    assert alignment_probability(Y, 2 * Y) == 1.0
    assert alignment_probability(Y, -Y) == 0.0
    assert alignment_probability(Y, np.exp(Y) + 3) == 1.0


def test_throughput_examples():
    Y = np.array([[15.0, 10.0]])
    assert throughput_ratio(Y, np.array([[0.0, 1.0]])) == pytest.approx(
        np.log2(11) / np.log2(16))
    assert throughput_ratio(Y, np.array([[0.0, 1.0]])) == pytest.approx(0.8648, abs=1e-4)
    assert throughput_ratio(Y, np.array([[99.0, -5.0]])) == 1.0
    assert throughput_ratio(Y, selected=np.array([1])) == pytest.approx(0.8648, abs=1e-4)
    with pytest.raises(ValueError):
        throughput_ratio(Y)


@settings(max_examples=100)
@given(st.integers(0, 10_000))
def test_throughput_bounds(seed):
    rng = np.random.default_rng(seed)
    Y = rng.exponential(5.0, (40, 8))
    P = rng.normal(size=(40, 8))
    r = throughput_ratio(Y, P)
    worst = np.log2(1 + Y.min(axis=1)).sum() / np.log2(1 + Y.max(axis=1)).sum()
    assert worst - 1e-12 <= r <= 1.0
    # per sample, an aligned pick earns ratio 1, so the mean per-sample ratio is >= P_A
    per_sample = [throughput_ratio(Y[i:i + 1], P[i:i + 1]) for i in range(len(Y))]
    assert np.mean(per_sample) >= alignment_probability(Y, P) - 1e-12


def test_aggregate_ratio_can_fall_below_alignment():
    # aligned on a weak sample, wrong on a strong one: ratio of sums < P_A
    Y = np.array([[1.0, 0.5], [1000.0, 0.0]])
    P = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert alignment_probability(Y, P) == 0.5
    assert throughput_ratio(Y, P) < 0.5


def test_snr_linear():
    assert snr_linear(-60.0, -90.0) == pytest.approx(1000.0)
    assert snr_linear(0.0, 0.0) == 1.0


def test_error_cdf_and_fraction():
    cdf = error_cdf([0.0, 0.0], [1.5, -0.5])
    assert cdf.tolist() == [0.5, 1.5]
    assert fraction_below(cdf, 1.0) == 0.5
    assert fraction_below(error_cdf([1, 2, 3], [1, 2, 3]), 1e-9) == 1.0
    assert len(error_cdf(np.zeros(7), np.ones(7))) == 7


def test_cdf_csv_and_report(tmp_path):
    write_cdf_csv(np.array([0.25, 1.0]), tmp_path / "c.csv")
    rows = list(csv.reader(open(tmp_path / "c.csv")))
    assert rows == [["abs_error_db", "cdf"], ["0.25", "0.5"], ["1.0", "1.0"]]
    rep = MetricsReport(rmse_db=1.0, p_align=0.5, r_throughput=0.9, m=10, noise_floor_dbm=-90.0)
    assert '"noise_floor_dbm": -90.0' in rep.to_json()
