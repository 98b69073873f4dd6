"""Beam-selection metrics: RMSE, alignment probability, throughput ratio, error CDF."""
import csv
import json
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class MetricsReport:
    rmse_db: float | None = None
    p_align: float | None = None
    r_throughput: float | None = None
    error_cdf: list = field(default_factory=list)
    m: int = 0
    noise_floor_dbm: float | None = None

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _pair(y_true, y_pred):
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise ValueError("empty input")
    return y_true, y_pred


def rmse(y_true, y_pred):
    """Root mean squared error, in whatever (dB) units the inputs carry."""
    y_true, y_pred = _pair(y_true, y_pred)
    return float(np.sqrt(np.mean((y_pred - y_true) ** 2)))


def alignment_probability(Y_true, Y_pred):
    """Fraction of rows whose argmax agrees (first maximum on ties)."""
    Y_true, Y_pred = _pair(Y_true, Y_pred)
    Y_true, Y_pred = np.atleast_2d(Y_true), np.atleast_2d(Y_pred)
    return float(np.mean(np.argmax(Y_true, axis=1) == np.argmax(Y_pred, axis=1)))


def selected_indices(Y_pred):
    return np.argmax(np.atleast_2d(np.asarray(Y_pred, dtype=np.float64)), axis=1)


def throughput_ratio(Y_true_linear, Y_pred=None, selected=None):
    """``sum log2(1 + y[selected]) / sum log2(1 + max y)`` over samples.

    ``Y_true_linear`` holds linear SNRs. The selected beam is the argmax of
    ``Y_pred`` unless explicit 0-based ``selected`` indices are given (used
    for classifiers).
    """
    Y = np.atleast_2d(np.asarray(Y_true_linear, dtype=np.float64))
    if Y.size == 0:
        raise ValueError("empty input")
    if selected is None:
        if Y_pred is None:
            raise ValueError("need predictions or selected indices")
        Y, _ = _pair(Y, np.atleast_2d(Y_pred))
        selected = selected_indices(Y_pred)
    selected = np.asarray(selected, dtype=np.int64)
    if selected.shape != (Y.shape[0],):
        raise ValueError("one selected index per sample required")
    achieved = np.log2(1.0 + Y[np.arange(Y.shape[0]), selected]).sum()
    best = np.log2(1.0 + Y.max(axis=1)).sum()
    if best <= 0:
        raise ValueError("true powers are all zero")
    return float(achieved / best)


def snr_linear(y_dbm, noise_floor_dbm):
    """Linear SNR of dBm powers against a noise floor in dBm."""
    return 10.0 ** ((np.asarray(y_dbm, dtype=np.float64) - noise_floor_dbm) / 10.0)


def error_cdf(y_true, y_pred):
    """Sorted absolute errors ``|y_pred - y_true|``."""
    y_true, y_pred = _pair(y_true, y_pred)
    return np.sort(np.abs(y_pred - y_true).ravel())


def fraction_below(cdf, threshold):
    """Share of errors strictly below ``threshold`` in a sorted error list."""
    cdf = np.asarray(cdf)
    if cdf.size == 0:
        return 0.0
    return float(np.searchsorted(cdf, threshold, side="left") / cdf.size)


def write_cdf_csv(cdf, path):
    cdf = np.asarray(cdf)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["abs_error_db", "cdf"])
        for k, e in enumerate(cdf, start=1):
            writer.writerow([repr(float(e)), repr(k / cdf.size)])
