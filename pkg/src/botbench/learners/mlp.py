import math

import numpy as np

from .. import kernels
from .base import Algorithm, Estimator


class Perceptron(Estimator):
    """One sigmoid hidden layer, one sigmoid output, trained by per-instance backprop.

    Inputs are min-max scaled to [-1, 1] using the training ranges.  The
    training order is shuffled once from the seed and reused every epoch.
    """

    algorithm = Algorithm.MLP

    def fit(self, X, y, rng):
        n, d = X.shape
        hidden = self.params["hidden"] or math.ceil((d + 2) / 2)
        r = self.params["init_range"]
        self.mins_ = X.min(axis=0)
        span = X.max(axis=0) - self.mins_
        self.span_ = np.where(span > 0, span, 1.0)
        Xn = self._scale(X)
        self.W1_ = rng.uniform(-r, r, size=(hidden, d))
        self.b1_ = rng.uniform(-r, r, size=hidden)
        self.w2_ = rng.uniform(-r, r, size=hidden)
        self.b2_ = rng.uniform(-r, r, size=1)
        order = rng.permutation(n).astype(np.int64)
        kernels.mlp_sgd(
            Xn,
            y.astype(np.float64),
            self.W1_,
            self.b1_,
            self.w2_,
            self.b2_,
            order,
            float(self.params["learning_rate"]),
            float(self.params["momentum"]),
            int(self.params["epochs"]),
        )
        return self

    def _scale(self, X):
        return np.ascontiguousarray(2.0 * (X - self.mins_) / self.span_ - 1.0, dtype=np.float64)

    def predict_score(self, X):
        return kernels.mlp_forward(self._scale(X), self.W1_, self.b1_, self.w2_, self.b2_)

    def get_state(self):
        return {
            "mins": self.mins_,
            "span": self.span_,
            "W1": self.W1_,
            "b1": self.b1_,
            "w2": self.w2_,
            "b2": self.b2_,
        }

    @classmethod
    def from_state(cls, params, state):
        est = cls(**params)
        est.mins_ = state["mins"]
        est.span_ = state["span"]
        est.W1_ = state["W1"]
        est.b1_ = state["b1"]
        est.w2_ = state["w2"]
        est.b2_ = state["b2"]
        return est
