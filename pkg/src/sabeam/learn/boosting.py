"""Stagewise gradient boosting of regression trees under squared loss."""
import numpy as np

from .tree import DecisionTree


class GradientBoostingRegressor:
    """``F_0 = mean(y)``; stage ``m`` fits a depth-limited CART tree to the
    residuals ``y - F_{m-1}`` and adds it scaled by ``learning_rate``."""

    def __init__(self, n_trees=200, depth=3, learning_rate=0.1, seed=0,
                 min_leaf=1, kernel=None):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if not 0.0 < learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        self.n_trees = n_trees
        self.depth = depth
        self.learning_rate = learning_rate
        self.seed = seed
        self.min_leaf = min_leaf
        self.kernel = kernel
        self.init = None
        self.trees = []

    def fit(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        rng = np.random.default_rng(self.seed)
        self.init = float(np.mean(y))
        current = np.full(y.shape, self.init)
        self.trees = []
        for _ in range(self.n_trees):
            tree = DecisionTree(self.depth, self.min_leaf, 1.0,
                                int(rng.integers(2**63)), kernel=self.kernel)
            tree.fit(X, y - current, center=False)
            current = current + self.learning_rate * tree.predict(X)
            self.trees.append(tree)
        return self

    def predict(self, X):
        if self.init is None:
            raise RuntimeError("model is not fitted")
        X = np.ascontiguousarray(X, dtype=np.float64)
        out = np.full(X.shape[0], self.init)
        for tree in self.trees:
            out = out + self.learning_rate * tree.predict(X)
        return out
