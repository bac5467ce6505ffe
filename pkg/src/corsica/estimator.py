"""Estimator-style front door over the functional pipeline.

Both classes follow the scikit-learn protocol (fit/transform/predict plus
get_params/set_params introspected from __init__), so they compose with
sklearn's clone() and Pipeline without this package depending on sklearn.
X is domain data, not arrays: file sets in, feature vectors or clusters
out.
"""

from __future__ import annotations

import inspect

from .extract import MAX_SUBFEATURES, build_feature_vector, normalize_vector
from .sim import identify
from .tree import TreeConfig, build_tree, tree_metrics
from .validation import check_file_sets, check_is_fitted, check_vectors

__all__ = ["FeatureVectorExtractor", "ServiceTreeClassifier"]


class _ParamsMixin:
    """get_params/set_params compatible with sklearn.base.BaseEstimator."""

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return [name for name, p in signature.parameters.items()
                if name != "self" and p.kind != p.VAR_KEYWORD]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({params})"


class FeatureVectorExtractor(_ParamsMixin):
    """Transformer: ServiceFileSets -> FeatureVectors.

    When `oracle_factory` is given (fileset -> compatibility oracle), the
    vectors are normalized through it after extraction.
    """

    def __init__(self, max_subfeatures: int = MAX_SUBFEATURES,
                 oracle_factory=None):
        self.max_subfeatures = max_subfeatures
        self.oracle_factory = oracle_factory

    def fit(self, X, y=None):
        check_file_sets(X)
        return self

    def transform(self, X):
        filesets = check_file_sets(X)
        vectors = [build_feature_vector(fs, self.max_subfeatures)
                   for fs in filesets]
        if self.oracle_factory is not None:
            vectors = [
                normalize_vector(vector, self.oracle_factory(fileset))
                for vector, fileset in zip(vectors, filesets)
            ]
        return vectors

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)


class ServiceTreeClassifier(_ParamsMixin):
    """Classifier: fit on feature vectors, predict service clusters.

    fit() compiles the decision tree; predict() walks it against file
    sets with simulator semantics. Fitted attributes: `tree_` (the
    DecisionTree), `classes_` (service tokens), `metrics_`.
    """

    def __init__(self, max_subfeatures: int = MAX_SUBFEATURES,
                 max_depth: int = 32, weights: dict | None = None):
        self.max_subfeatures = max_subfeatures
        self.max_depth = max_depth
        self.weights = weights
        self.tree_ = None
        self.classes_ = None
        self.metrics_ = None

    def fit(self, X, y=None):
        vectors = check_vectors(X)
        config = TreeConfig(
            max_subfeatures=self.max_subfeatures,
            max_depth=self.max_depth,
            weights=tuple(sorted((self.weights or {}).items())),
        )
        self.tree_ = build_tree(vectors, config)
        self.classes_ = [v.service.token() for v in vectors]
        self.metrics_ = tree_metrics(self.tree_, vectors)
        return self

    def predict(self, X) -> list[list[str]]:
        """Identification cluster (service tokens) per probed file set."""
        check_is_fitted(self, "tree_")
        return [identify(fs, self.tree_)["cluster"]
                for fs in check_file_sets(X)]

    def identify(self, fileset) -> dict:
        """Full identification result: cluster, hop outcomes, caveat flag."""
        check_is_fitted(self, "tree_")
        return identify(fileset, self.tree_)

    def score(self, X, y=None) -> float:
        """Fraction of file sets whose cluster contains their own service."""
        filesets = check_file_sets(X)
        if not filesets:
            return 0.0
        hits = sum(
            1 for fs in filesets
            if fs.service.token() in set(self.identify(fs)["cluster"])
        )
        return hits / len(filesets)
