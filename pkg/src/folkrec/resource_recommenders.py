"""Resource recommendation algorithms: CF, tag/time re-ranking, SUSTAIN.

All recommenders here answer the same question: which resources that the
user has NOT bookmarked should they look at next. Candidate generation is
always user-based collaborative filtering over binary bookmark vectors;
the cognitive variants re-rank those candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .base import (
    RecList,
    ResourceRecommender,
    check_non_negative,
    check_open_unit_interval,
    check_positive,
    check_positive_int,
    rank_top_k,
)
from .folksonomy import Folksonomy
from .tag_recommenders import bll_tag_weights


def _cf_resource_scores(
    model: Folksonomy, user: str, n_neighbors: int
) -> dict[str, float]:
    """CF scores over unseen resources; popularity fallback when alone.

    Similarity is the cosine between binary bookmark vectors. When the user
    has no positive-similarity neighbor (unknown, lone, or disjoint users)
    the unseen resources are scored by training popularity instead.
    """
    bookmarked = model.user_resources.get(user, frozenset())

    def popularity_fallback() -> dict[str, float]:
        unseen = [r for r in model.resources if r not in bookmarked]
        if not unseen:
            return {}
        top = max(model.resource_post_count[r] for r in unseen)
        if top <= 0:
            return {}
        return {r: model.resource_post_count[r] / top for r in unseen}

    if not bookmarked:
        return popularity_fallback()

    own_size = math.sqrt(len(bookmarked))
    similarities: list[tuple[float, str]] = []
    for other in model.users:
        if other == user:
            continue
        other_marks = model.user_resources[other]
        overlap = len(bookmarked & other_marks)
        if not overlap:
            continue
        sim = overlap / (own_size * math.sqrt(len(other_marks)))
        if sim > 0:
            similarities.append((sim, other))
    similarities.sort(key=lambda pair: (-pair[0], pair[1]))
    neighborhood = similarities[:n_neighbors]
    if not neighborhood:
        return popularity_fallback()

    scores: dict[str, float] = {}
    for sim, neighbor in neighborhood:
        for resource in model.user_resources[neighbor]:
            if resource in bookmarked:
                continue
            scores[resource] = scores.get(resource, 0.0) + sim
    if not scores:
        return popularity_fallback()
    return scores


class UserKnnResources(ResourceRecommender):
    """User-based collaborative filtering over binary bookmark vectors."""

    algorithm: ClassVar[str] = "cf_r"

    def __init__(self, n_neighbors: int = 20):
        self.n_neighbors = n_neighbors

    def _validate_params(self) -> None:
        check_positive_int("n_neighbors", self.n_neighbors)

    def recommend_for_user(
        self, user: str, k: int = 10, reference_time: int | None = None
    ) -> RecList:
        scores = _cf_resource_scores(self._model(), user, self.n_neighbors)
        return self._reclist(scores, user, k, reference_time)


class CirttResources(ResourceRecommender):
    """CF candidates re-ranked by the user's time-decayed tag preferences.

    Each of the top CF candidates is re-scored as

        score(i) = cf_norm(i) * (1 + sum of the user's activation weights
                                     over the candidate's training tags)

    so the multiplier is at least 1 and candidates carrying tags the user
    recently and frequently applied move up, while candidates with no tag
    overlap keep their CF order among themselves.
    """

    algorithm: ClassVar[str] = "cirtt"

    def __init__(
        self,
        n_neighbors: int = 20,
        decay: float = 0.5,
        min_age: int = 1,
        candidate_pool: int = 50,
    ):
        self.n_neighbors = n_neighbors
        self.decay = decay
        self.min_age = min_age
        self.candidate_pool = candidate_pool

    def _validate_params(self) -> None:
        check_positive_int("n_neighbors", self.n_neighbors)
        check_positive("decay", self.decay)
        check_positive_int("min_age", self.min_age)
        check_positive_int("candidate_pool", self.candidate_pool)

    def recommend_for_user(
        self, user: str, k: int = 10, reference_time: int | None = None
    ) -> RecList:
        model = self._model()
        when = model.max_timestamp + 1 if reference_time is None else reference_time
        cf_scores = _cf_resource_scores(model, user, self.n_neighbors)
        candidates = rank_top_k(
            cf_scores, self._resource_popularity, self.candidate_pool
        )
        if not candidates:
            return self._reclist({}, user, k, when)

        top = candidates[0][1]
        tag_weights = bll_tag_weights(model, user, when, self.decay, self.min_age)
        scores: dict[str, float] = {}
        for resource, cf_score in candidates:
            overlap = math.fsum(
                tag_weights.get(tag, 0.0)
                for tag in model.resource_tag_freq.get(resource, {})
            )
            scores[resource] = (cf_score / top) * (1.0 + overlap)
        return self._reclist(scores, user, k, when)


@dataclass
class SustainUserModel:
    """Incremental category-learning state for one user.

    ``attention`` holds one positive tuning per feature; ``clusters`` are
    positions in feature space, created whenever no existing cluster wins
    clearly enough; ``trained_on`` counts chronologically presented items.
    """

    attention: np.ndarray
    clusters: list[np.ndarray] = field(default_factory=list)
    trained_on: int = 0

    def best_activation(self, item: np.ndarray, focus: float) -> float:
        if not self.clusters:
            return 0.0
        return max(
            cluster_activation(item, cluster, self.attention, focus)
            for cluster in self.clusters
        )


def cluster_activation(
    item: np.ndarray, cluster: np.ndarray, attention: np.ndarray, focus: float
) -> float:
    """Attention-weighted similarity of an item to a cluster, in (0, 1].

    H = sum_f(attention_f^focus * exp(-attention_f * |x_f - c_f|))
        / sum_f(attention_f^focus)

    equals 1 exactly when the item sits on the cluster.
    """
    weights = attention**focus
    distance = np.abs(item - cluster)
    return float((weights * np.exp(-attention * distance)).sum() / weights.sum())


ATTENTION_FLOOR = 1e-6


class SustainResources(ResourceRecommender):
    """CF candidates re-ranked by a per-user category learning model.

    Resources are encoded as binary vectors over the globally most frequent
    training tags. The user's bookmarks are replayed chronologically: the
    most activated cluster wins; if its output after cluster competition,
    (H_win^competition / sum_j H_j^competition) * H_win, stays below the
    recruitment threshold a new cluster is created at the item, otherwise
    the winner's position and the attention tunings move toward the item.
    Candidates are then scored by cf_norm * best cluster activation.
    """

    algorithm: ClassVar[str] = "sustain"

    def __init__(
        self,
        n_neighbors: int = 20,
        focus: float = 2.0,
        competition: float = 1.0,
        learning_rate: float = 0.1,
        recruit_threshold: float = 0.5,
        n_features: int = 20,
        candidate_pool: int = 50,
    ):
        self.n_neighbors = n_neighbors
        self.focus = focus
        self.competition = competition
        self.learning_rate = learning_rate
        self.recruit_threshold = recruit_threshold
        self.n_features = n_features
        self.candidate_pool = candidate_pool

    def _validate_params(self) -> None:
        check_positive_int("n_neighbors", self.n_neighbors)
        check_non_negative("focus", self.focus)
        check_non_negative("competition", self.competition)
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate!r}")
        check_open_unit_interval("recruit_threshold", self.recruit_threshold)
        check_positive_int("n_features", self.n_features)
        check_positive_int("candidate_pool", self.candidate_pool)

    def fit(self, X, y=None):
        super().fit(X, y)
        freq = self.model_.tag_freq
        ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
        self.feature_tags_ = tuple(tag for tag, _ in ranked[: self.n_features])
        return self

    def encode_resource(self, resource: str) -> np.ndarray:
        """Binary feature vector of a resource over the feature tags."""
        tags = self._model().resource_tag_freq.get(resource, {})
        return np.array(
            [1.0 if tag in tags else 0.0 for tag in self.feature_tags_]
        )

    def train_user_model(self, user: str) -> SustainUserModel:
        """Replay the user's bookmarks chronologically into a fresh model."""
        n_features = len(self.feature_tags_)
        state = SustainUserModel(attention=np.ones(n_features))
        if not n_features:
            return state
        for post in self._model().user_posts.get(user, ()):
            item = self.encode_resource(post.resource)
            self._present(state, item)
            state.trained_on += 1
        return state

    def _present(self, state: SustainUserModel, item: np.ndarray) -> None:
        if not state.clusters:
            state.clusters.append(item.copy())
            return
        activations = np.array(
            [
                cluster_activation(item, cluster, state.attention, self.focus)
                for cluster in state.clusters
            ]
        )
        winner = int(np.argmax(activations))  # ties resolve to the lowest index
        strength = activations[winner]
        competed = activations**self.competition
        output = (competed[winner] / competed.sum()) * strength
        if output < self.recruit_threshold:
            state.clusters.append(item.copy())
            return
        cluster = state.clusters[winner]
        distance = np.abs(item - cluster)
        cluster += self.learning_rate * (item - cluster)
        state.attention += (
            self.learning_rate
            * np.exp(-state.attention * distance)
            * (1.0 - state.attention * distance)
        )
        np.clip(state.attention, ATTENTION_FLOOR, None, out=state.attention)

    def recommend_for_user(
        self, user: str, k: int = 10, reference_time: int | None = None
    ) -> RecList:
        model = self._model()
        cf_scores = _cf_resource_scores(model, user, self.n_neighbors)
        candidates = rank_top_k(
            cf_scores, self._resource_popularity, self.candidate_pool
        )
        if not candidates:
            return self._reclist({}, user, k, reference_time)

        state = self.train_user_model(user)
        if not state.clusters:
            return self._reclist(dict(candidates), user, k, reference_time)

        top = candidates[0][1]
        scores = {
            resource: (cf_score / top)
            * state.best_activation(self.encode_resource(resource), self.focus)
            for resource, cf_score in candidates
        }
        return self._reclist(scores, user, k, reference_time)
