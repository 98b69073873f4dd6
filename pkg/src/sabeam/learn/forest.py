"""Random forests: bootstrap + per-split feature subsampling over CART trees."""
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .tree import DecisionTree


def _map(fn, items, workers):
    # the compiled kernel releases the GIL, so threads give real parallelism
    if workers is None or workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _draw_bootstraps(n, n_trees, seed, bootstrap):
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(n_trees):
        idx = rng.integers(n, size=n) if bootstrap else np.arange(n)
        draws.append((idx, int(rng.integers(2**63))))
    return draws


class RandomForestRegressor:
    """Mean of ``n_trees`` CART regressors grown on bootstrap resamples.

    ``bootstrap=False`` is a test hook: every tree then sees the full training
    set, so with ``feature_frac=1`` the forest reduces to plain CART.
    """

    def __init__(self, n_trees=100, max_depth=None, min_leaf=2, feature_frac=1 / 3,
                 seed=0, bootstrap=True, workers=1, kernel=None):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_frac = feature_frac
        self.seed = seed
        self.bootstrap = bootstrap
        self.workers = workers
        self.kernel = kernel
        self.trees = []

    def fit(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        draws = _draw_bootstraps(X.shape[0], self.n_trees, self.seed, self.bootstrap)

        def grow(draw):
            idx, tree_seed = draw
            tree = DecisionTree(self.max_depth, self.min_leaf, self.feature_frac,
                                tree_seed, kernel=self.kernel)
            return tree.fit(X[idx], y[idx])

        self.trees = _map(grow, draws, self.workers)
        return self

    def tree_predictions(self, X):
        """Per-tree predictions, shape ``(n_trees, n_samples)``."""
        if not self.trees:
            raise RuntimeError("forest is not fitted")
        return np.stack([tree.predict(X) for tree in self.trees])

    def predict(self, X):
        return self.tree_predictions(X).mean(axis=0)


class RandomForestClassifier:
    """Majority vote of CART Gini trees; vote ties go to the lowest label."""

    def __init__(self, n_trees=100, max_depth=None, min_leaf=2, feature_frac=1 / 3,
                 seed=0, classes=None, bootstrap=True, workers=1, kernel=None):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_frac = feature_frac
        self.seed = seed
        self.classes = None if classes is None else np.asarray(classes)
        self.bootstrap = bootstrap
        self.workers = workers
        self.kernel = kernel
        self.trees = []

    def fit(self, X, labels):
        X = np.ascontiguousarray(X, dtype=np.float64)
        labels = np.asarray(labels)
        if self.classes is None:
            self.classes = np.unique(labels)
        else:
            self.classes = np.sort(self.classes)
        ids = np.searchsorted(self.classes, labels)
        if np.any(ids >= len(self.classes)) or np.any(self.classes[ids] != labels):
            raise ValueError("labels outside the declared classes")
        ids = ids.astype(np.float64)
        draws = _draw_bootstraps(X.shape[0], self.n_trees, self.seed, self.bootstrap)
        n_classes = len(self.classes)

        def grow(draw):
            idx, tree_seed = draw
            tree = DecisionTree(self.max_depth, self.min_leaf, self.feature_frac,
                                tree_seed, n_classes=n_classes, kernel=self.kernel)
            return tree.fit(X[idx], ids[idx])

        self.trees = _map(grow, draws, self.workers)
        return self

    def vote_counts(self, X):
        """Votes per class, shape ``(n_samples, n_classes)``."""
        if not self.trees:
            raise RuntimeError("forest is not fitted")
        votes = np.stack([tree.predict(X) for tree in self.trees]).astype(np.int64)
        counts = np.zeros((votes.shape[1], len(self.classes)), dtype=np.int64)
        for row in votes:
            counts[np.arange(votes.shape[1]), row] += 1
        return counts

    def predict(self, X):
        return self.classes[np.argmax(self.vote_counts(X), axis=1)]
