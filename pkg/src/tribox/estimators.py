"""scikit-learn style wrappers for batch work on many boxes.

Rows of ``X`` are boxes as 64 probabilities (see ``check_behaviors``).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .box import TOL_QUANTUM, Behavior, correlators_to_probs, probs_to_correlators
from .measures import mermin_moduli, nested_values, svetlichny_moduli
from .polytope import Region, membership, vertex_set
from .validation import check_behaviors, check_correlators


class CorrelatorTransformer(TransformerMixin, BaseEstimator):
    """Probabilities (n, 64) to correlators (n, 26) and back."""

    def __init__(self, tol: float = TOL_QUANTUM):
        self.tol = tol

    def fit(self, X, y=None):
        check_behaviors(X, self.tol)
        self.n_features_in_ = 64
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return probs_to_correlators(check_behaviors(X, self.tol))

    def inverse_transform(self, X):
        return correlators_to_probs(check_correlators(X))


class DiscordTransformer(TransformerMixin, BaseEstimator):
    """Boxes to ``[G, Q]``, or to the 9 + 9 candidate values when ``candidates``."""

    def __init__(self, candidates: bool = False, tol: float = TOL_QUANTUM):
        self.candidates = candidates
        self.tol = tol

    def fit(self, X, y=None):
        check_behaviors(X, self.tol)
        self.n_features_in_ = 64
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        P = check_behaviors(X, self.tol)
        g = nested_values(svetlichny_moduli(P))
        q = nested_values(mermin_moduli(P))
        if self.candidates:
            return np.hstack([g, q])
        return np.stack([g.min(axis=1), q.min(axis=1)], axis=1)


class RegionClassifier(ClassifierMixin, BaseEstimator):
    """Assigns each box to BellLocal, TwoWayNonlocal, ThreeWayNonlocalInR or OutsideR.

    Nothing is learned; ``fit`` builds the vertex sets.  ``score`` compares
    against region labels as usual.
    """

    def __init__(self, pr_offsets: bool = True, tol: float = TOL_QUANTUM):
        self.pr_offsets = pr_offsets
        self.tol = tol

    def fit(self, X=None, y=None):
        if X is not None:
            check_behaviors(X, self.tol)
        self.vertex_sets_ = {n: vertex_set(n, self.pr_offsets) for n in ("L", "L2", "R")}
        self.classes_ = np.array([r.value for r in Region])
        return self

    def _region(self, b: Behavior) -> Region:
        vs = self.vertex_sets_
        if membership(b, vs["L"]).inside:
            return Region.BELL_LOCAL
        if membership(b, vs["L2"]).inside:
            return Region.TWO_WAY_NONLOCAL
        if membership(b, vs["R"]).inside:
            return Region.THREE_WAY_NONLOCAL_IN_R
        return Region.OUTSIDE_R

    def predict(self, X):
        check_is_fitted(self, "vertex_sets_")
        P = check_behaviors(X, self.tol)
        return np.array([self._region(Behavior(row, validate=False)).value for row in P])


class ThreeDecomposer(TransformerMixin, BaseEstimator):
    """Boxes to ``[μ, ν] = [G/8, Q/4]``, the weights of the Svetlichny and Mermin parts."""

    def __init__(self, tol: float = TOL_QUANTUM):
        self.tol = tol

    def fit(self, X, y=None):
        check_behaviors(X, self.tol)
        self.n_features_in_ = 64
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        P = check_behaviors(X, self.tol)
        g = nested_values(svetlichny_moduli(P)).min(axis=1)
        q = nested_values(mermin_moduli(P)).min(axis=1)
        return np.stack([g / 8, q / 4], axis=1)
