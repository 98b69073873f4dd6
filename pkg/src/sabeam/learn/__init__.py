"""In-repo learners: OLS, CART, random forests and gradient boosting."""
from .backend import BACKEND, available_backends, get_kernels
from .boosting import GradientBoostingRegressor
from .forest import RandomForestClassifier, RandomForestRegressor
from .models import (
    ALL_BEAMS,
    STRONGEST,
    ClassifierSpec,
    GradientBoostingSpec,
    OlsSpec,
    RandomForestSpec,
    TrainedModel,
    fit,
    load_model,
    predict,
    save_model,
)
from .ols import LinearRegression
from .tree import DecisionTree

__all__ = [
    "ALL_BEAMS", "BACKEND", "STRONGEST", "ClassifierSpec", "DecisionTree",
    "GradientBoostingRegressor", "GradientBoostingSpec", "LinearRegression",
    "OlsSpec", "RandomForestClassifier", "RandomForestRegressor", "RandomForestSpec",
    "TrainedModel", "available_backends", "fit", "get_kernels", "load_model",
    "predict", "save_model",
]
