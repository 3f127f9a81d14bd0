"""Five classifiers behind one train/score interface."""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..features import FeatureKind, FeatureSchema, FeatureVector
from .base import (
    DEFAULTS,
    Algorithm,
    Estimator,
    LearnerSpec,
    Prediction,
    SchemaMismatch,
    TrainingError,
    as_label_array,
    as_matrix,
    label_for,
)
from .forest import RandomForest
from .knn import NearestNeighbors
from .mlp import Perceptron
from .naive_bayes import GaussianNaiveBayes
from .ripper import RipperRules

__all__ = [
    "Algorithm",
    "DEFAULTS",
    "LearnerSpec",
    "Model",
    "Prediction",
    "SchemaMismatch",
    "TrainingError",
    "label_for",
    "load_model",
    "save_model",
    "score",
    "score_batch",
    "train",
]

ESTIMATORS: dict[Algorithm, type[Estimator]] = {
    Algorithm.NAIVE_BAYES: GaussianNaiveBayes,
    Algorithm.KNN: NearestNeighbors,
    Algorithm.RANDOM_FOREST: RandomForest,
    Algorithm.RULE_RIPPER: RipperRules,
    Algorithm.MLP: Perceptron,
}

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class Model:
    spec: LearnerSpec
    schema: FeatureSchema
    estimator: Estimator

    def scores(self, matrix) -> np.ndarray:
        X = as_matrix(matrix, self.schema)
        if X.shape[1] != len(self.schema):
            raise SchemaMismatch(f"expected {len(self.schema)} features, got {X.shape[1]}")
        if len(X) == 0:
            return np.empty(0)
        return np.clip(self.estimator.predict_score(X), 0.0, 1.0)


def _default_schema(d: int) -> FeatureSchema:
    return FeatureSchema(tuple(f"f{i}" for i in range(d)), (FeatureKind.NUMERIC,) * d)


def train(spec: LearnerSpec, matrix, labels, schema: FeatureSchema | None = None) -> Model:
    """Fit ``spec.algorithm``; every random choice is drawn from ``spec.seed``."""
    X = as_matrix(matrix)
    y = as_label_array(labels)
    if len(y) != len(X):
        raise TrainingError(f"{len(X)} rows but {len(y)} labels")
    if schema is None:
        schema = _default_schema(X.shape[1])
    if X.shape[1] != len(schema):
        raise TrainingError(f"matrix has {X.shape[1]} columns, schema has {len(schema)}")
    if not np.isfinite(X).all():
        raise TrainingError("feature matrix contains non-finite values")
    if y.sum() == 0 or y.sum() == len(y):
        raise TrainingError("training data must contain both BOT and HUMAN instances")
    rng = np.random.default_rng(spec.seed)
    est = ESTIMATORS[spec.algorithm](**spec.hyperparameters)
    if spec.algorithm is Algorithm.RANDOM_FOREST:
        est.fit(X, y, rng, seed=spec.seed)
    else:
        est.fit(X, y, rng)
    return Model(spec, schema, est)


def score(model: Model, instance) -> Prediction:
    if isinstance(instance, FeatureVector) and instance.schema != model.schema:
        raise SchemaMismatch("instance schema differs from the model schema")
    x = instance.as_array() if isinstance(instance, FeatureVector) else np.asarray(instance, dtype=np.float64)
    return Prediction.from_score(model.scores(x.reshape(1, -1))[0])


def score_batch(model: Model, matrix) -> list[Prediction]:
    return [Prediction.from_score(s) for s in model.scores(matrix)]


# ---------------------------------------------------------------------------
# persistence: a zip holding meta.json plus one .npy per state array
# ---------------------------------------------------------------------------


def save_model(model: Model, path) -> None:
    meta = {
        "format": "botbench-model",
        "version": FORMAT_VERSION,
        "algorithm": model.spec.algorithm.value,
        "hyperparameters": model.spec.hyperparameters,
        "seed": int(model.spec.seed),
        "schema": {"names": list(model.schema.names), "kinds": [k.value for k in model.schema.kinds]},
    }
    with zipfile.ZipFile(Path(path), "w", compression=zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("meta.json", json.dumps(meta, sort_keys=True))
        for key, arr in model.estimator.get_state().items():
            buf = io.BytesIO()
            np.save(buf, np.asarray(arr), allow_pickle=False)
            zf.writestr(f"state/{key}.npy", buf.getvalue())


def load_model(path) -> Model:
    with zipfile.ZipFile(Path(path)) as zf:
        meta = json.loads(zf.read("meta.json"))
        if meta.get("format") != "botbench-model":
            raise ValueError("not a botbench model file")
        if meta.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {meta.get('version')}")
        state = {}
        for name in zf.namelist():
            if name.startswith("state/") and name.endswith(".npy"):
                state[name[6:-4]] = np.load(io.BytesIO(zf.read(name)), allow_pickle=False)
    spec = LearnerSpec(Algorithm.parse(meta["algorithm"]), meta["hyperparameters"], meta["seed"])
    schema = FeatureSchema(
        tuple(meta["schema"]["names"]), tuple(FeatureKind(k) for k in meta["schema"]["kinds"])
    )
    est = ESTIMATORS[spec.algorithm].from_state(dict(spec.hyperparameters), state)
    return Model(spec, schema, est)
