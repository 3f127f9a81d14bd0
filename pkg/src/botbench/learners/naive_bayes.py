import numpy as np

from .base import Algorithm, Estimator


class GaussianNaiveBayes(Estimator):
    """Per-class, per-feature normal densities with frequency priors.

    Class variances are the unbiased sample variance (ddof=1, or 0 for a
    singleton class) floored at ``var_floor_rel`` times the feature's global
    variance, or ``var_floor_abs`` when that is zero.
    """

    algorithm = Algorithm.NAIVE_BAYES

    def fit(self, X, y, rng):
        global_var = X.var(axis=0)
        floor = np.where(global_var > 0, self.params["var_floor_rel"] * global_var, self.params["var_floor_abs"])
        means, variances, priors = [], [], []
        for c in (0, 1):
            Xc = X[y == c]
            means.append(Xc.mean(axis=0))
            ddof = 1 if len(Xc) > 1 else 0
            variances.append(np.maximum(Xc.var(axis=0, ddof=ddof), floor))
            priors.append(len(Xc) / len(X))
        self.means_ = np.array(means)
        self.vars_ = np.array(variances)
        self.log_priors_ = np.log(np.array(priors))
        return self

    def joint_log_likelihood(self, X):
        diff = X[:, None, :] - self.means_[None, :, :]
        ll = -0.5 * (np.log(2 * np.pi * self.vars_)[None] + diff**2 / self.vars_[None]).sum(axis=2)
        return ll + self.log_priors_

    def predict_score(self, X):
        jll = self.joint_log_likelihood(X)
        # P(BOT | x) = 1 / (1 + exp(jll_human - jll_bot))
        delta = jll[:, 0] - jll[:, 1]
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(delta))

    def get_state(self):
        return {"means": self.means_, "vars": self.vars_, "log_priors": self.log_priors_}

    @classmethod
    def from_state(cls, params, state):
        est = cls(**params)
        est.means_ = state["means"]
        est.vars_ = state["vars"]
        est.log_priors_ = state["log_priors"]
        return est
