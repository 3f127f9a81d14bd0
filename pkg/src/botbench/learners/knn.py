import numpy as np

from .. import kernels
from .base import Algorithm, Estimator


class NearestNeighbors(Estimator):
    """k-NN on min-max normalised Euclidean distance; score = BOT share of the k neighbours."""

    algorithm = Algorithm.KNN

    def fit(self, X, y, rng):
        self.X_ = X.copy()
        self.y_ = y.copy()
        self.mins_ = X.min(axis=0)
        span = X.max(axis=0) - self.mins_
        self.active_ = span > 0
        self.span_ = np.where(self.active_, span, 1.0)
        self.train_norm_ = self._normalise(X)
        return self

    def _normalise(self, X):
        # constant training columns carry no distance information
        Z = np.where(self.active_, (X - self.mins_) / self.span_, 0.0)
        return np.ascontiguousarray(Z)

    def predict_score(self, X):
        if len(X) == 0:
            return np.empty(0)
        k = min(self.params["k"], len(self.X_))
        idx = kernels.nearest(self.train_norm_, self._normalise(X), k)
        return self.y_[idx].mean(axis=1).astype(np.float64)

    def get_state(self):
        return {"X": self.X_, "y": self.y_}

    @classmethod
    def from_state(cls, params, state):
        est = cls(**params)
        return est.fit(state["X"], state["y"], None)
