"""Model specs, the ``fit``/``predict`` entry points and model JSON files."""
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .boosting import GradientBoostingRegressor
from .forest import RandomForestClassifier, RandomForestRegressor
from .ols import LinearRegression
from .tree import DecisionTree

STRONGEST = "strongest"
ALL_BEAMS = "all"
MODEL_FORMAT = "sabeam-model"
MODEL_VERSION = 1


def _check_target(target):
    if target not in (STRONGEST, ALL_BEAMS):
        raise ValueError(f"target must be {STRONGEST!r} or {ALL_BEAMS!r}, got {target!r}")


@dataclass(frozen=True)
class OlsSpec:
    target: str = STRONGEST
    kind: str = field(default="ols", init=False)

    def __post_init__(self):
        _check_target(self.target)


@dataclass(frozen=True)
class RandomForestSpec:
    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 2
    feature_frac: float = 1 / 3
    seed: int = 0
    bootstrap: bool = True
    target: str = STRONGEST
    kind: str = field(default="random_forest", init=False)

    def __post_init__(self):
        _check_target(self.target)
        if self.n_trees < 1 or self.min_leaf < 1:
            raise ValueError("n_trees and min_leaf must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive or None")
        if not 0.0 < self.feature_frac <= 1.0:
            raise ValueError("feature_frac must be in (0, 1]")


@dataclass(frozen=True)
class GradientBoostingSpec:
    n_trees: int = 200
    depth: int = 3
    learning_rate: float = 0.1
    seed: int = 0
    target: str = STRONGEST
    kind: str = field(default="gradient_boosting", init=False)

    def __post_init__(self):
        _check_target(self.target)
        if self.n_trees < 1 or self.depth < 1:
            raise ValueError("n_trees and depth must be positive")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")


@dataclass(frozen=True)
class ClassifierSpec:
    """Random forest over the optimal beam-pair index (1-based labels)."""

    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 2
    feature_frac: float = 1 / 3
    seed: int = 0
    classes: tuple = tuple(range(1, 65))
    kind: str = field(default="rf_classifier", init=False)

    def __post_init__(self):
        if self.n_trees < 1 or self.min_leaf < 1:
            raise ValueError("n_trees and min_leaf must be positive")
        if not 0.0 < self.feature_frac <= 1.0:
            raise ValueError("feature_frac must be in (0, 1]")


_SPECS = {cls.kind: cls for cls in
          (OlsSpec, RandomForestSpec, GradientBoostingSpec, ClassifierSpec)}


def spec_to_dict(spec):
    data = asdict(spec)
    if "classes" in data:
        data["classes"] = list(data["classes"])
    return data


def spec_from_dict(data):
    data = dict(data)
    cls = _SPECS[data.pop("kind")]
    if "classes" in data:
        data["classes"] = tuple(data["classes"])
    return cls(**data)


def output_seed(seed, j):
    """Independent seed for output ``j`` of a multi-output fit."""
    return int(np.random.SeedSequence([int(seed), int(j)]).generate_state(1, np.uint64)[0])


def _make_estimator(spec, seed, workers):
    if isinstance(spec, OlsSpec):
        return LinearRegression()
    if isinstance(spec, RandomForestSpec):
        return RandomForestRegressor(spec.n_trees, spec.max_depth, spec.min_leaf,
                                     spec.feature_frac, seed, spec.bootstrap, workers)
    if isinstance(spec, GradientBoostingSpec):
        return GradientBoostingRegressor(spec.n_trees, spec.depth, spec.learning_rate, seed)
    if isinstance(spec, ClassifierSpec):
        return RandomForestClassifier(spec.n_trees, spec.max_depth, spec.min_leaf,
                                      spec.feature_frac, seed, spec.classes,
                                      workers=workers)
    raise TypeError(f"unsupported spec {spec!r}")


@dataclass
class TrainedModel:
    spec: object
    estimators: list
    n_features: int
    target_dim: int

    @property
    def is_classifier(self):
        return isinstance(self.spec, ClassifierSpec)


def fit(spec, X, Y, workers=1):
    """Fit ``spec`` on features ``X`` and targets ``Y``.

    ``Y`` is a vector for strongest-beam regression and classification, and
    an ``(m, 64)`` matrix for all-beam regression, which fits one independent
    regressor per column.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.asarray(Y)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array")
    if X.shape[0] < 2 or Y.shape[0] != X.shape[0]:
        raise ValueError("need at least two samples and one target per sample")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")

    if getattr(spec, "target", STRONGEST) == ALL_BEAMS:
        if Y.ndim != 2:
            raise ValueError("all-beam targets must be a 2-D array")
        Y = Y.astype(np.float64)

        def fit_column(j):
            est = _make_estimator(spec, output_seed(getattr(spec, "seed", 0), j), 1)
            return est.fit(X, Y[:, j])

        cols = range(Y.shape[1])
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                estimators = list(pool.map(fit_column, cols))
        else:
            estimators = [fit_column(j) for j in cols]
        return TrainedModel(spec, estimators, X.shape[1], Y.shape[1])

    if Y.ndim != 1:
        raise ValueError("strongest-beam and classifier targets must be 1-D")
    est = _make_estimator(spec, getattr(spec, "seed", 0), workers)
    est.fit(X, Y)
    return TrainedModel(spec, [est], X.shape[1], 1)


def predict(model, X):
    """Predictions of a fitted model; ``(m,)`` or ``(m, target_dim)``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        got = X.shape[1] if X.ndim == 2 else X.shape
        raise ValueError(f"model expects {model.n_features} features, got {got}")
    if model.target_dim > 1:
        return np.column_stack([est.predict(X) for est in model.estimators])
    return model.estimators[0].predict(X)


def _estimator_to_dict(est):
    if isinstance(est, LinearRegression):
        return est.to_dict()
    if isinstance(est, GradientBoostingRegressor):
        return {"init": est.init, "learning_rate": est.learning_rate,
                "trees": [t.to_dict() for t in est.trees]}
    if isinstance(est, RandomForestClassifier):
        return {"classes": est.classes.tolist(), "trees": [t.to_dict() for t in est.trees]}
    return {"trees": [t.to_dict() for t in est.trees]}


def _estimator_from_dict(spec, data):
    if isinstance(spec, OlsSpec):
        return LinearRegression.from_dict(data)
    trees = [DecisionTree.from_dict(t) for t in data["trees"]]
    if isinstance(spec, GradientBoostingSpec):
        est = GradientBoostingRegressor(spec.n_trees, spec.depth, data["learning_rate"])
        est.init = data["init"]
    elif isinstance(spec, ClassifierSpec):
        est = RandomForestClassifier(spec.n_trees, classes=data["classes"])
        est.classes = np.asarray(data["classes"])
    else:
        est = RandomForestRegressor(spec.n_trees)
    est.trees = trees
    return est


def save_model(model, path):
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "spec": spec_to_dict(model.spec),
        "n_features": model.n_features,
        "target_dim": model.target_dim,
        "estimators": [_estimator_to_dict(e) for e in model.estimators],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"{path}: unsupported model version {doc.get('version')}")
    spec = spec_from_dict(doc["spec"])
    estimators = [_estimator_from_dict(spec, e) for e in doc["estimators"]]
    return TrainedModel(spec, estimators, doc["n_features"], doc["target_dim"])
