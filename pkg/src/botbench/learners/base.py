from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..features import FeatureSchema, FeatureVector
from ..ingest import Label


class Algorithm(enum.Enum):
    MLP = "mlp"
    RULE_RIPPER = "ripper"
    NAIVE_BAYES = "naive_bayes"
    RANDOM_FOREST = "random_forest"
    KNN = "knn"

    @classmethod
    def parse(cls, value) -> "Algorithm":
        if isinstance(value, Algorithm):
            return value
        key = str(value).strip().lower()
        aliases = {
            "multilayerperceptron": cls.MLP,
            "jrip": cls.RULE_RIPPER,
            "rule_ripper": cls.RULE_RIPPER,
            "naivebayes": cls.NAIVE_BAYES,
            "randomforest": cls.RANDOM_FOREST,
            "ibk": cls.KNN,
        }
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ValueError(f"unknown algorithm {value!r}")


DEFAULTS: dict[Algorithm, dict[str, Any]] = {
    Algorithm.NAIVE_BAYES: {"var_floor_rel": 1e-9, "var_floor_abs": 1e-12},
    Algorithm.KNN: {"k": 1},
    Algorithm.RANDOM_FOREST: {"n_trees": 100, "max_features": None, "max_depth": None, "min_split": 2},
    Algorithm.RULE_RIPPER: {"folds": 3, "min_cover": 2.0, "optimizations": 2, "dl_slack": 64.0},
    Algorithm.MLP: {
        "hidden": None,
        "learning_rate": 0.3,
        "momentum": 0.2,
        "epochs": 500,
        "init_range": 0.5,
    },
}


class TrainingError(ValueError):
    pass


class SchemaMismatch(ValueError):
    pass


def _check_positive_int(params, key, allow_none=False):
    value = params[key]
    if value is None and allow_none:
        return
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{key} must be an integer >= 1, got {value!r}")


@dataclass(frozen=True)
class LearnerSpec:
    algorithm: Algorithm
    hyperparameters: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        algo = Algorithm.parse(self.algorithm)
        object.__setattr__(self, "algorithm", algo)
        unknown = set(self.hyperparameters) - set(DEFAULTS[algo])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {algo.value}: {sorted(unknown)}")
        merged = dict(DEFAULTS[algo])
        merged.update(self.hyperparameters)
        object.__setattr__(self, "hyperparameters", merged)
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        p = merged
        if algo is Algorithm.KNN:
            _check_positive_int(p, "k")
        elif algo is Algorithm.RANDOM_FOREST:
            _check_positive_int(p, "n_trees")
            _check_positive_int(p, "max_features", allow_none=True)
            _check_positive_int(p, "max_depth", allow_none=True)
            _check_positive_int(p, "min_split")
        elif algo is Algorithm.MLP:
            _check_positive_int(p, "epochs")
            _check_positive_int(p, "hidden", allow_none=True)
            if not p["learning_rate"] > 0:
                raise ValueError("learning_rate must be > 0")
            if not 0 <= p["momentum"] < 1:
                raise ValueError("momentum must lie in [0, 1)")
        elif algo is Algorithm.RULE_RIPPER:
            _check_positive_int(p, "folds")
            if p["folds"] < 2:
                raise ValueError("folds must be >= 2")
            if not p["optimizations"] >= 0:
                raise ValueError("optimizations must be >= 0")
        elif algo is Algorithm.NAIVE_BAYES:
            if not p["var_floor_abs"] > 0:
                raise ValueError("var_floor_abs must be > 0")

    def with_seed(self, seed: int) -> "LearnerSpec":
        return LearnerSpec(self.algorithm, dict(self.hyperparameters), int(seed))


@dataclass(frozen=True)
class Prediction:
    score: float
    label: Label

    @classmethod
    def from_score(cls, score: float) -> "Prediction":
        return cls(float(score), label_for(score))


def label_for(score: float) -> Label:
    # 0.5 goes to BOT
    return Label.BOT if score >= 0.5 else Label.HUMAN


def as_label_array(labels) -> np.ndarray:
    """Labels as an int64 array with BOT=1, HUMAN=0."""
    if isinstance(labels, np.ndarray) and labels.dtype.kind in "iub":
        arr = labels.astype(np.int64)
    else:
        arr = np.array([int(Label.parse(v)) for v in labels], dtype=np.int64)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("labels must be BOT/HUMAN (1/0)")
    return arr


def as_matrix(matrix, schema: FeatureSchema | None = None) -> np.ndarray:
    if isinstance(matrix, FeatureVector):
        matrix = [matrix]
    if isinstance(matrix, (list, tuple)) and matrix and isinstance(matrix[0], FeatureVector):
        if schema is not None and any(v.schema != schema for v in matrix):
            raise SchemaMismatch("instance schema differs from the model schema")
        return np.array([v.values for v in matrix], dtype=np.float64)
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim == 1 and X.size == 0:
        X = X.reshape(0, len(schema) if schema is not None else 0)
    if X.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    return X


class Estimator:
    """Interface every learner implements.

    ``fit`` receives a float64 matrix, int labels (1 = BOT) and a numpy
    Generator; ``predict_score`` returns the BOT score per row.
    """

    algorithm: Algorithm

    def __init__(self, **params):
        self.params = params

    def fit(self, X: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> "Estimator":
        raise NotImplementedError

    def predict_score(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def get_state(self) -> dict[str, np.ndarray]:
        raise NotImplementedError

    @classmethod
    def from_state(cls, params: dict, state: dict[str, np.ndarray]) -> "Estimator":
        raise NotImplementedError
