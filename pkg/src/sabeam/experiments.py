"""Model comparison, awareness sweep, quantisation sweep and all-beam evaluation.

Every runner takes a :class:`~sabeam.dataset.Dataset`, drops outage samples,
splits it deterministically and returns tidy rows (lists of dicts).
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from . import learn
from .dataset import OUTAGE_DBM, make_label, split, ORDERED, RECONSTRUCTED
from .features import MAX_LEVEL
from .metrics import (alignment_probability, error_cdf, fraction_below, rmse, snr_linear,
                      throughput_ratio)
from .quantizer import NO_QUANTIZATION, CqiParams

log = logging.getLogger(__name__)


@dataclass
class Split:
    X_train: np.ndarray
    X_test: np.ndarray
    Y_train: np.ndarray  # dBm, (m, n_beams)
    Y_test: np.ndarray
    s_train: np.ndarray
    s_test: np.ndarray
    n_outage: int
    max_per_group: int

    def features(self, n_cols=None):
        if n_cols is None:
            return self.X_train, self.X_test
        return self.X_train[:, :n_cols], self.X_test[:, :n_cols]


def prepare(ds, train_frac, seed):
    """Drop outage samples (no path at all) and split the rest."""
    keep = [i for i, s in enumerate(ds.samples) if s.y_dbm.max() > OUTAGE_DBM]
    n_outage = len(ds) - len(keep)
    if n_outage:
        log.info("excluding %d outage samples of %d", n_outage, len(ds))
    train, test = split(ds.subset(keep), train_frac, seed)
    if len(train) < 2 or len(test) < 1:
        raise ValueError("dataset too small to split")
    mpg = int(ds.config.get("generation", {}).get("max_per_group", 2))
    return Split(train.features(), test.features(), train.y_dbm(), test.y_dbm(),
                 train.best_index(), test.best_index(), n_outage, mpg)


def strongest_labels(Y, params=NO_QUANTIZATION):
    """Per-sample reconstructed strongest-beam power (ordered label, M = 1)."""
    return np.array([make_label(y, ORDERED, params, 1).values[0] for y in Y])


def _with_target(spec, target):
    return spec if isinstance(spec, learn.ClassifierSpec) else replace(spec, target=target)


def _strongest_rmse(spec, X_train, y_train, X_test, y_true, workers):
    model = learn.fit(_with_target(spec, learn.STRONGEST), X_train, y_train, workers=workers)
    pred = learn.predict(model, X_test)
    return rmse(y_true, pred), pred


def run_table2(data, specs, workers=1):
    """Strongest-beam RMSE per model on raw (unquantised) labels."""
    y_train = strongest_labels(data.Y_train)
    y_test = strongest_labels(data.Y_test)
    rows = []
    for name, spec in specs.items():
        err, _ = _strongest_rmse(spec, data.X_train, y_train, data.X_test, y_test, workers)
        log.info("table2 %s rmse=%.4f", name, err)
        rows.append({"model": name, "rmse_db": err})
    return rows


def run_awareness_sweep(data, spec, mode="group", workers=1):
    """RMSE of the strongest beam versus the amount of situational awareness.

    ``mode="group"`` steps through awareness levels 1..5 (RSU, +t1, +t2, +c1,
    +c2); ``mode="vehicle"`` adds one vehicle slot at a time in the same order.
    """
    mpg = data.max_per_group
    if mode == "group":
        steps = [(level, 2 + (level - 1) * 2 * mpg) for level in range(1, MAX_LEVEL + 1)]
    elif mode == "vehicle":
        steps = [(i, 2 + 2 * i) for i in range(0, (MAX_LEVEL - 1) * mpg + 1)]
    else:
        raise ValueError("mode must be 'group' or 'vehicle'")
    y_train = strongest_labels(data.Y_train)
    y_test = strongest_labels(data.Y_test)
    rows = []
    for step, n_cols in steps:
        X_train, X_test = data.features(n_cols)
        err, _ = _strongest_rmse(spec, X_train, y_train, X_test, y_test, workers)
        log.info("awareness %s=%d rmse=%.4f", mode, step, err)
        rows.append({"mode": mode, "prefix": step, "n_features": n_cols, "rmse_db": err})
    return rows


@dataclass(frozen=True)
class QuantGrid:
    p_upper: tuple = (-30.0, -35.0, -40.0, -45.0)
    p_lower: tuple = (-80.0, -90.0)
    granularity: tuple = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)

    def params(self):
        return [CqiParams(pu, pl, r) for pu in self.p_upper for pl in self.p_lower
                for r in self.granularity]

    @property
    def reference(self):
        """Widest bounds: the pair least affected by clamping."""
        return max(self.p_upper), min(self.p_lower)


def _quant_row(params, **metrics):
    row = {"p_upper": "" if not params.enabled else params.p_upper,
           "p_lower": "" if not params.enabled else params.p_lower,
           "r_cqi": "none" if not params.enabled else params.granularity}
    row.update({"rmse_db": "", "p_align": "", "r_throughput": "", "frac_below_1db": ""})
    row.update(metrics)
    return row


def run_quant_sweep(data, spec, grid=QuantGrid(), workers=1, cdf_out=None):
    """Strongest-beam RMSE when training on quantise-and-reconstruct labels.

    Predictions are scored against the true (unquantised) test powers. The
    first row is the unquantised baseline. ``cdf_out`` (a list) collects tidy
    error-CDF rows for the baseline and for the reference bounds.
    """
    y_test = strongest_labels(data.Y_test)
    ref = grid.reference
    rows = []
    for params in [NO_QUANTIZATION] + grid.params():
        y_train = strongest_labels(data.Y_train, params)
        err, pred = _strongest_rmse(spec, data.X_train, y_train, data.X_test, y_test, workers)
        cdf = error_cdf(y_test, pred)
        rows.append(_quant_row(params, rmse_db=err, frac_below_1db=fraction_below(cdf, 1.0)))
        log.info("quant %s rmse=%.4f", rows[-1]["r_cqi"], err)
        if cdf_out is not None and (not params.enabled
                                    or (params.p_upper, params.p_lower) == ref):
            label = rows[-1]["r_cqi"]
            cdf_out.extend({"r_cqi": label, "abs_error_db": float(e), "cdf": (k + 1) / len(cdf)}
                           for k, e in enumerate(cdf))
    return rows


@dataclass(frozen=True)
class AllBeamConfig:
    """Quantisation settings of the all-beam comparison."""

    granularities: tuple = (None, 1.0, 2.0, 5.0)
    p_upper: float = -30.0
    p_lower: float = -90.0
    noise_floor_dbm: float = -90.0


def run_eval_allbeams(data, reg_spec, clf_spec, cfg=AllBeamConfig(), workers=1):
    """Beam selection by all-beam regression versus a classifier on ``s``.

    Regression rows train 64 independent regressors on reconstructed labels
    and select the argmax of the predicted powers.
    """
    snr = snr_linear(data.Y_test, cfg.noise_floor_dbm)
    rows = []

    clf = learn.fit(clf_spec, data.X_train, data.s_train, workers=workers)
    chosen = learn.predict(clf, data.X_test)
    p_a = float(np.mean(chosen == data.s_test))
    r_t = throughput_ratio(snr, selected=chosen - 1)
    rows.append({"model": "classifier", "r_cqi": "", "p_align": p_a, "r_throughput": r_t,
                 "rmse_db": "", "noise_floor_dbm": cfg.noise_floor_dbm})
    log.info("allbeams classifier P_A=%.4f R_T=%.4f", p_a, r_t)

    spec = _with_target(reg_spec, learn.ALL_BEAMS)
    for r in cfg.granularities:
        params = NO_QUANTIZATION if r is None else CqiParams(cfg.p_upper, cfg.p_lower, r)
        Y_train = np.array([make_label(y, RECONSTRUCTED, params).values for y in data.Y_train])
        model = learn.fit(spec, data.X_train, Y_train, workers=workers)
        pred = learn.predict(model, data.X_test)
        p_a = alignment_probability(data.Y_test, pred)
        r_t = throughput_ratio(snr, pred)
        err = rmse(data.Y_test, pred)
        rows.append({"model": "regression", "r_cqi": "none" if r is None else r,
                     "p_align": p_a, "r_throughput": r_t, "rmse_db": err,
                     "noise_floor_dbm": cfg.noise_floor_dbm})
        log.info("allbeams regression r=%s P_A=%.4f R_T=%.4f", r, p_a, r_t)
    return rows
