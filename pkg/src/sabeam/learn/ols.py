"""Ordinary least squares with an intercept."""
import numpy as np

RIDGE = 1e-8


class LinearRegression:
    """Least squares fit of ``y ~ X @ coef + intercept``.

    The normal equations are solved on standardised columns with a ``1e-8``
    ridge so that constant or collinear features (e.g. virtual-vehicle
    padding) stay solvable; coefficients are mapped back to raw units.
    """

    def __init__(self):
        self.coef = None
        self.intercept = None
        self.n_features = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError("X must be 2-D and y must match its row count")
        self.n_features = X.shape[1]
        mu = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        Z = (X - mu) / scale
        y_mean = y.mean()
        gram = Z.T @ Z + RIDGE * np.eye(Z.shape[1])
        beta = np.linalg.solve(gram, Z.T @ (y - y_mean))
        self.coef = beta / scale
        self.intercept = float(y_mean - mu @ self.coef)
        return self

    def predict(self, X):
        if self.coef is None:
            raise RuntimeError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features")
        return X @ self.coef + self.intercept

    def to_dict(self):
        return {"coef": self.coef.tolist(), "intercept": self.intercept,
                "n_features": self.n_features}

    @classmethod
    def from_dict(cls, data):
        model = cls()
        model.coef = np.asarray(data["coef"], dtype=np.float64)
        model.intercept = float(data["intercept"])
        model.n_features = data["n_features"]
        return model
