"""
Ordered rule list learned with IREP* grow/prune and MDL stopping, followed by
RIPPER-style optimisation passes.

Rules are learned for the minority class (BOT on ties); anything not covered
falls through to a default rule for the majority class.  A condition is
``x[f] <= v`` or ``x[f] > v``.
"""

from __future__ import annotations

import math

import numpy as np

from .base import Algorithm, Estimator

LE, GT = 0, 1


def cond_mask(cond, X):
    f, op, v = cond
    return X[:, f] <= v if op == LE else X[:, f] > v


def rule_mask(rule, X):
    mask = np.ones(len(X), dtype=bool)
    for cond in rule:
        mask &= cond_mask(cond, X)
    return mask


def ruleset_mask(rules, X):
    mask = np.zeros(len(X), dtype=bool)
    for rule in rules:
        mask |= rule_mask(rule, X)
    return mask


# ---------------------------------------------------------------------------
# description length
# ---------------------------------------------------------------------------


def _xlog2(k, p):
    if k == 0:
        return 0.0
    return k * math.log2(min(max(p, 1e-300), 1.0))


def subset_dl(total, k, p):
    """Bits to pick ``k`` elements out of ``total`` with per-element probability ``p``."""
    p = min(max(p, 0.0), 1.0)
    return -_xlog2(k, p) - _xlog2(total - k, 1.0 - p)


def theory_dl(n_conditions, n_possible):
    if n_conditions == 0:
        return 0.0
    k = n_conditions
    bits = math.log2(k)
    if k > 1:
        bits += 2.0 * math.log2(bits)
    bits += subset_dl(n_possible, k, k / n_possible)
    return 0.5 * bits


def data_dl(exp_fp_over_err, cover, uncover, fp, fn):
    bits = math.log2(cover + uncover + 1)
    if cover > uncover:
        exp_err = exp_fp_over_err * (fp + fn)
        bits += subset_dl(cover, fp, exp_err / cover)
        bits += subset_dl(uncover, fn, fn / uncover) if uncover > 0 else 0.0
    else:
        exp_err = (1.0 - exp_fp_over_err) * (fp + fn)
        bits += subset_dl(cover, fp, fp / cover) if cover > 0 else 0.0
        bits += subset_dl(uncover, fn, exp_err / uncover) if uncover > 0 else 0.0
    return bits


class _Context:
    """Fixed per-fit quantities shared by the DL computations."""

    def __init__(self, X, P, min_cover, dl_slack):
        self.X = X
        self.P = P
        self.min_cover = min_cover
        self.dl_slack = dl_slack
        n_cuts = sum(max(len(np.unique(X[:, f])) - 1, 0) for f in range(X.shape[1]))
        self.n_possible = max(2 * n_cuts, 1)
        self.exp_fp_over_err = P.mean()

    def dl(self, rules):
        covered = ruleset_mask(rules, self.X)
        cover = int(covered.sum())
        fp = int((covered & ~self.P).sum())
        fn = int((~covered & self.P).sum())
        theory = sum(theory_dl(len(r), self.n_possible) for r in rules)
        return theory + data_dl(self.exp_fp_over_err, cover, len(self.P) - cover, fp, fn)


# ---------------------------------------------------------------------------
# growing and pruning
# ---------------------------------------------------------------------------


def best_condition(X, P, min_cover):
    """Condition with the largest FOIL gain over the rows in X."""
    p0 = int(P.sum())
    n0 = len(P) - p0
    if p0 == 0:
        return None
    base = math.log2(p0 / (p0 + n0))
    best_gain, best = 0.0, None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        v = X[order, f]
        bounds = np.flatnonzero(v[:-1] != v[1:])
        if bounds.size == 0:
            continue
        cum_p = np.cumsum(P[order])[bounds]
        cum_t = bounds + 1
        for op, p1, t1 in ((LE, cum_p, cum_t), (GT, p0 - cum_p, len(P) - cum_t)):
            ok = (p1 > 0) & (t1 >= min_cover)
            if not ok.any():
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                gain = np.where(ok, p1 * (np.log2(np.where(ok, p1 / t1, 1.0)) - base), -np.inf)
            j = int(np.argmax(gain))
            if gain[j] > best_gain + 1e-12:
                i = bounds[j]
                cut = 0.5 * (v[i] + v[i + 1])
                if cut >= v[i + 1]:
                    cut = v[i]
                best_gain, best = float(gain[j]), (int(f), op, float(cut))
    return best


def grow_rule(X, P, min_cover, start=()):
    rule = list(start)
    covered = rule_mask(rule, X)
    while True:
        p = int((P & covered).sum())
        if p == 0 or p == int(covered.sum()):
            break
        cond = best_condition(X[covered], P[covered], min_cover)
        if cond is None:
            break
        rule.append(cond)
        covered &= cond_mask(cond, X)
    return tuple(rule)


def prune_rule(rule, X, P):
    """Drop the trailing conditions that maximise (p + 1) / (p + n + 2) on the prune set."""
    if not rule or len(P) == 0:
        return rule
    best_len, best_worth = len(rule), -1.0
    covered = np.ones(len(P), dtype=bool)
    worths = []
    for cond in rule:
        covered &= cond_mask(cond, X)
        p = int((P & covered).sum())
        t = int(covered.sum())
        worths.append((p + 1.0) / (t + 2.0))
    for j, w in enumerate(worths, start=1):
        if w > best_worth + 1e-12:
            best_len, best_worth = j, w
    return rule[:best_len]


def prune_for_ruleset(rules, i, candidate, X, P, min_len=1):
    """Truncate ``candidate`` (to stand at slot i) minimising ruleset error on (X, P)."""
    best, best_err = candidate, None
    for j in range(min_len, len(candidate) + 1):
        trial = rules[:i] + [candidate[:j]] + rules[i + 1 :]
        err = int((ruleset_mask(trial, X) != P).sum())
        if best_err is None or err < best_err:
            best, best_err = candidate[:j], err
    return best


def stratified_split(P, idx, rng, folds):
    """Split ``idx`` into grow (folds-1 parts) and prune (1 part), per class."""
    grow, prune = [], []
    for cls in (True, False):
        members = idx[P[idx] == cls]
        members = members[rng.permutation(len(members))]
        n_prune = len(members) // folds
        prune.append(members[:n_prune])
        grow.append(members[n_prune:])
    return np.sort(np.concatenate(grow)), np.sort(np.concatenate(prune))


# ---------------------------------------------------------------------------
# ruleset construction
# ---------------------------------------------------------------------------


def irep_star(ctx, rules, rng, folds):
    X, P = ctx.X, ctx.P
    rules = list(rules)
    min_dl = ctx.dl(rules)
    remaining = ~ruleset_mask(rules, X)
    while (P & remaining).any():
        idx = np.flatnonzero(remaining)
        g, pr = stratified_split(P, idx, rng, folds)
        rule = grow_rule(X[g], P[g], ctx.min_cover)
        rule = prune_rule(rule, X[pr], P[pr])
        if not rule:
            break
        covered = rule_mask(rule, X) & remaining
        t = int(covered.sum())
        if t == 0 or int((covered & ~P).sum()) / t >= 0.5:
            break
        rules.append(rule)
        dl = ctx.dl(rules)
        if dl > min_dl + ctx.dl_slack:
            rules.pop()
            break
        min_dl = min(min_dl, dl)
        remaining &= ~covered
    return rules


def optimise(ctx, rules, rng, folds):
    X, P = ctx.X, ctx.P
    rules = list(rules)
    for i in range(len(rules)):
        reach = ~ruleset_mask(rules[:i], X)
        idx = np.flatnonzero(reach)
        g, pr = stratified_split(P, idx, rng, folds)
        if len(pr) == 0:
            continue
        replacement = grow_rule(X[g], P[g], ctx.min_cover)
        replacement = prune_for_ruleset(rules, i, replacement, X[pr], P[pr]) if replacement else replacement
        revision = grow_rule(X[g], P[g], ctx.min_cover, start=rules[i])
        revision = prune_for_ruleset(rules, i, revision, X[pr], P[pr], min_len=len(rules[i]))
        best, best_dl = rules[i], ctx.dl(rules)
        for variant in (replacement, revision):
            if not variant or variant == rules[i]:
                continue
            trial = rules[:i] + [variant] + rules[i + 1 :]
            dl = ctx.dl(trial)
            if dl < best_dl - 1e-12:
                best, best_dl = variant, dl
        rules[i] = best
    return rules


def drop_rules_raising_dl(ctx, rules):
    rules = list(rules)
    for i in range(len(rules) - 1, -1, -1):
        without = rules[:i] + rules[i + 1 :]
        if ctx.dl(without) < ctx.dl(rules):
            rules = without
    return rules


class RipperRules(Estimator):
    algorithm = Algorithm.RULE_RIPPER

    def fit(self, X, y, rng):
        bots = int(y.sum())
        self.positive_ = 1 if bots <= len(y) - bots else 0
        P = y == self.positive_
        ctx = _Context(X, P, self.params["min_cover"], self.params["dl_slack"])
        folds = self.params["folds"]
        rules = irep_star(ctx, [], rng, folds)
        for _ in range(self.params["optimizations"]):
            rules = optimise(ctx, rules, rng, folds)
            rules = irep_star(ctx, rules, rng, folds)
            rules = drop_rules_raising_dl(ctx, rules)
        self.rules_ = [tuple(r) for r in rules if r]
        self._fit_scores(X, y)
        return self

    def _fit_scores(self, X, y):
        # Laplace-corrected BOT share among training rows reaching each rule
        reach = np.ones(len(y), dtype=bool)
        scores = []
        for rule in self.rules_:
            covered = rule_mask(rule, X) & reach
            scores.append((y[covered].sum() + 1.0) / (covered.sum() + 2.0))
            reach &= ~covered
        self.rule_scores_ = np.array(scores, dtype=np.float64)
        self.default_score_ = float((y[reach].sum() + 1.0) / (reach.sum() + 2.0))

    def predict_score(self, X):
        out = np.full(len(X), self.default_score_)
        open_ = np.ones(len(X), dtype=bool)
        for rule, s in zip(self.rules_, self.rule_scores_):
            hit = rule_mask(rule, X) & open_
            out[hit] = s
            open_ &= ~hit
        return out

    def describe(self, names=None):
        lines = []
        for rule, s in zip(self.rules_, self.rule_scores_):
            parts = []
            for f, op, v in rule:
                name = names[f] if names else f"x{f}"
                parts.append(f"{name} {'<=' if op == LE else '>'} {v:.6g}")
            lines.append(f"({' and '.join(parts)}) => bot_score={s:.3f}")
        lines.append(f"otherwise => bot_score={self.default_score_:.3f}")
        return "\n".join(lines)

    def get_state(self):
        rows = [(r, f, op, v) for r, rule in enumerate(self.rules_) for f, op, v in rule]
        conds = np.array(rows, dtype=np.float64).reshape(-1, 4)
        return {
            "conditions": conds,
            "rule_scores": self.rule_scores_,
            "default_score": np.array([self.default_score_]),
            "positive": np.array([self.positive_]),
        }

    @classmethod
    def from_state(cls, params, state):
        est = cls(**params)
        rules: dict[int, list] = {}
        for r, f, op, v in state["conditions"]:
            rules.setdefault(int(r), []).append((int(f), int(op), float(v)))
        est.rules_ = [tuple(rules[r]) for r in sorted(rules)]
        est.rule_scores_ = state["rule_scores"]
        est.default_score_ = float(state["default_score"][0])
        est.positive_ = int(state["positive"][0])
        return est
