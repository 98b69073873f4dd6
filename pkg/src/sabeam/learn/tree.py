"""CART regression and classification trees backed by the active kernel."""
import numpy as np

from . import backend


class DecisionTree:
    """A single CART tree stored as flat node arrays.

    Parameters
    ----------
    max_depth : int or None
        Depth cap; ``None`` grows until leaves are pure or too small.
    min_leaf : int
        Minimum number of samples in each child of a split.
    feature_frac : float
        Fraction of features examined at each split (at least one).
    seed : int
        Seed of the split-feature shuffle.
    n_classes : int
        ``0`` for squared-loss regression, otherwise Gini classification over
        integer class ids ``0..n_classes-1``.
    """

    def __init__(self, max_depth=None, min_leaf=1, feature_frac=1.0, seed=0,
                 n_classes=0, kernel=None):
        if min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0.0 < feature_frac <= 1.0:
            raise ValueError("feature_frac must be in (0, 1]")
        if max_depth is not None and max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_frac = feature_frac
        self.seed = int(seed)
        self.n_classes = n_classes
        self.kernel = kernel
        self.nodes = None
        self.n_features = None

    def _kernels(self):
        return backend.get_kernels(self.kernel)

    def fit(self, X, y, center=True):
        """Grow the tree.

        Regression targets are centred on their mean before the split search
        unless ``center`` is False (boosting residuals are already centred).
        """
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError("X must be 2-D and y must match its row count")
        self.n_features = X.shape[1]
        mtry = max(1, int(self.feature_frac * self.n_features))
        depth = -1 if self.max_depth is None else self.max_depth
        offset = 0.0
        if self.n_classes == 0 and center:
            # centring keeps the split proxy well conditioned for dBm-sized targets
            offset = float(np.mean(y))
            y = y - offset
        feature, threshold, left, right, value = self._kernels().build_tree(
            X, y, depth, self.min_leaf, mtry, self.seed, self.n_classes)
        if offset:
            value = value + offset
        self.nodes = {
            "feature": feature, "threshold": threshold,
            "left": left, "right": right, "value": value,
        }
        return self

    @property
    def node_count(self):
        return len(self.nodes["feature"])

    def predict(self, X):
        if self.nodes is None:
            raise RuntimeError("tree is not fitted")
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got {X.shape[-1] if X.ndim else 0}")
        nd = self.nodes
        return self._kernels().predict_tree(
            X, nd["feature"], nd["threshold"], nd["left"], nd["right"], nd["value"])

    def same_structure(self, other):
        """True when both trees have identical splits (leaf values may differ)."""
        keys = ("feature", "threshold", "left", "right")
        return all(np.array_equal(self.nodes[k], other.nodes[k]) for k in keys)

    def to_dict(self):
        nd = self.nodes
        nodes = []
        for i in range(self.node_count):
            leaf = nd["feature"][i] < 0
            nodes.append({
                "feature_idx": int(nd["feature"][i]),
                "threshold": None if leaf else float(nd["threshold"][i]),
                "left": int(nd["left"][i]),
                "right": int(nd["right"][i]),
                "leaf_value": float(nd["value"][i]),
            })
        return {
            "max_depth": self.max_depth, "min_leaf": self.min_leaf,
            "feature_frac": self.feature_frac, "seed": self.seed,
            "n_classes": self.n_classes, "n_features": self.n_features,
            "nodes": nodes,
        }

    @classmethod
    def from_dict(cls, data):
        tree = cls(max_depth=data["max_depth"], min_leaf=data["min_leaf"],
                   feature_frac=data["feature_frac"], seed=data["seed"],
                   n_classes=data["n_classes"])
        tree.n_features = data["n_features"]
        nodes = data["nodes"]
        tree.nodes = {
            "feature": np.array([n["feature_idx"] for n in nodes], dtype=np.int64),
            "threshold": np.array(
                [0.0 if n["threshold"] is None else n["threshold"] for n in nodes],
                dtype=np.float64),
            "left": np.array([n["left"] for n in nodes], dtype=np.int64),
            "right": np.array([n["right"] for n in nodes], dtype=np.int64),
            "value": np.array([n["leaf_value"] for n in nodes], dtype=np.float64),
        }
        return tree
