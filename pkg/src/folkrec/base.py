"""Shared recommender plumbing: requests, ranked lists, estimator base class."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, ClassVar, Mapping

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .datasets import DatasetSample
from .folksonomy import Folksonomy


@dataclass(frozen=True)
class RecRequest:
    """One recommendation query: who, for what, as of when, how many."""

    user: str
    resource: str | None
    reference_time: int
    k: int = 10


@dataclass(frozen=True)
class RecList:
    """Ranked scored answer to a request.

    Items are unique, ordered by score descending with a deterministic
    tie-break (training frequency, then lexicographic id), and truncated
    to the requested k.
    """

    items: tuple[tuple[str, float], ...]
    algorithm: str
    request: RecRequest | None = None

    @property
    def ids(self) -> list[str]:
        return [item_id for item_id, _ in self.items]

    def __len__(self) -> int:
        return len(self.items)


def check_positive_int(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value


def check_unit_interval(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def check_open_unit_interval(name: str, value: float) -> float:
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must be in (0, 1), got {value!r}")
    return value


def check_positive(name: str, value: float) -> float:
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def check_non_negative(name: str, value: float) -> float:
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return value


def rank_top_k(
    scores: Mapping[str, float],
    frequency: Callable[[str], int],
    k: int,
) -> tuple[tuple[str, float], ...]:
    """Order scored items descending and truncate to k.

    Exact score ties break by higher training frequency, then by id, so
    every ranking is total and reproducible.
    """
    ordered = sorted(
        scores.items(), key=lambda kv: (-kv[1], -frequency(kv[0]), kv[0])
    )
    return tuple(ordered[:k])


class FolksonomyRecommender(BaseEstimator):
    """Base class for all recommenders.

    ``fit`` accepts either a DatasetSample or a prebuilt Folksonomy and
    stores the frozen snapshot as ``model_``. Scoring methods are pure
    functions over that snapshot, so fitted instances are safe to share
    across threads.
    """

    algorithm: ClassVar[str] = ""
    task: ClassVar[str] = "tags"

    def fit(self, X: DatasetSample | Folksonomy, y=None):
        self._validate_params()
        self.model_ = X if isinstance(X, Folksonomy) else Folksonomy.build(X)
        return self

    def _validate_params(self) -> None:
        """Hook for subclasses to reject bad hyperparameters at fit time."""

    def _model(self) -> Folksonomy:
        model = getattr(self, "model_", None)
        if model is None:
            raise NotFittedError(
                f"{type(self).__name__} is not fitted; call fit() first"
            )
        return model

    def _tag_frequency(self, tag: str) -> int:
        return self._model().tag_freq.get(tag, 0)

    def _resource_popularity(self, resource: str) -> int:
        return self._model().resource_post_count.get(resource, 0)


class TagRecommender(FolksonomyRecommender):
    """Recommenders answering (user, resource, time) tag queries."""

    task: ClassVar[str] = "tags"

    def recommend(self, request: RecRequest) -> RecList:
        raise NotImplementedError

    def _reclist(self, scores: Mapping[str, float], request: RecRequest) -> RecList:
        items = rank_top_k(scores, self._tag_frequency, request.k)
        return RecList(items=items, algorithm=self.algorithm, request=request)

    def _most_popular_scores(self) -> dict[str, float]:
        freq = self._model().tag_freq
        if not freq:
            return {}
        top = max(freq.values())
        return {tag: count / top for tag, count in freq.items()}


class ResourceRecommender(FolksonomyRecommender):
    """Recommenders producing unseen-resource rankings for a user."""

    task: ClassVar[str] = "resources"

    def recommend_for_user(
        self, user: str, k: int = 10, reference_time: int | None = None
    ) -> RecList:
        raise NotImplementedError

    def _reclist(
        self,
        scores: Mapping[str, float],
        user: str,
        k: int,
        reference_time: int | None = None,
    ) -> RecList:
        items = rank_top_k(scores, self._resource_popularity, k)
        when = self._model().max_timestamp if reference_time is None else reference_time
        request = RecRequest(user=user, resource=None, reference_time=when, k=k)
        return RecList(items=items, algorithm=self.algorithm, request=request)
