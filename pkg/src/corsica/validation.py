"""Input validation helpers for the estimator layer."""

from __future__ import annotations

from .corpus import ServiceFileSet
from .features import FeatureVector

__all__ = ["NotFittedError", "check_file_sets", "check_is_fitted", "check_vectors"]


class NotFittedError(ValueError):
    """predict/transform called before fit."""


def check_file_sets(X) -> list[ServiceFileSet]:
    items = list(X)
    for item in items:
        if not isinstance(item, ServiceFileSet):
            raise TypeError(
                f"expected ServiceFileSet, got {type(item).__name__}"
            )
    return items


def check_vectors(X) -> list[FeatureVector]:
    items = list(X)
    tokens = set()
    for item in items:
        if not isinstance(item, FeatureVector):
            raise TypeError(
                f"expected FeatureVector, got {type(item).__name__}"
            )
        token = item.service.token()
        if token in tokens:
            raise ValueError(f"duplicate service id: {token}")
        tokens.add(token)
    return items


def check_is_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
