"""Tag recommendation algorithms over a folksonomy snapshot.

The cognitive recommenders score a tag by the base-level activation of
human memory:

    A(tag) = ln( sum_j max(reference_time - t_j, min_age) ** (-decay) )

where t_1..t_n are the times the user applied the tag before the reference
time. Activation grows with usage frequency and recency and decays by a
power law of age.
"""

from __future__ import annotations

import math
from typing import ClassVar

from .base import (
    RecList,
    RecRequest,
    TagRecommender,
    check_positive,
    check_positive_int,
    check_unit_interval,
    rank_top_k,
)
from .folksonomy import Folksonomy


def base_level_activation(
    use_times,
    reference_time: int,
    decay: float = 0.5,
    min_age: int = 1,
) -> float:
    """Activation of one item given its past use times.

    Uses at or after the reference time are ignored (offline protocol).
    Ages clamp to ``min_age`` to avoid the singularity of age**(-decay)
    at zero. Returns -inf when there are no eligible uses.
    """
    mass = math.fsum(
        max(reference_time - t, min_age) ** (-decay)
        for t in use_times
        if t < reference_time
    )
    return math.log(mass) if mass > 0 else float("-inf")


def bll_tag_weights(
    model: Folksonomy,
    user: str,
    reference_time: int,
    decay: float = 0.5,
    min_age: int = 1,
) -> dict[str, float]:
    """Softmax-normalized activation weights over the user's past tags.

    Equivalent to softmax over the activations: exp(A) recovers the raw
    decayed-usage mass, so weights are masses normalized to sum 1. Empty
    when the user has no uses before the reference time.
    """
    masses: dict[str, float] = {}
    for tag, times in model.user_tag_times.get(user, {}).items():
        mass = math.fsum(
            max(reference_time - t, min_age) ** (-decay)
            for t in times
            if t < reference_time
        )
        if mass > 0:
            masses[tag] = mass
    total = math.fsum(masses.values())
    if total <= 0:
        return {}
    return {tag: mass / total for tag, mass in masses.items()}


class MostPopularTags(TagRecommender):
    """Rank tags by global training frequency, normalized by the max."""

    algorithm: ClassVar[str] = "mp"

    def recommend(self, request: RecRequest) -> RecList:
        return self._reclist(self._most_popular_scores(), request)


class MostRecentTags(TagRecommender):
    """Rank the user's own tags by last use, most recent first.

    Scores decay with the gap to the user's most recent tag use, so the
    freshest tag always scores 1. Unknown users get an empty list.
    """

    algorithm: ClassVar[str] = "mr"

    def recommend(self, request: RecRequest) -> RecList:
        last_used = self._model().user_tag_last.get(request.user)
        if not last_used:
            return RecList(items=(), algorithm=self.algorithm, request=request)
        newest = max(last_used.values())
        scores = {tag: 1.0 / (1 + (newest - ts)) for tag, ts in last_used.items()}
        return self._reclist(scores, request)


class BllTags(TagRecommender):
    """Base-level activation blended with the resource's tag frequencies.

    score = memory_weight * p_user(tag) + (1 - memory_weight) * p_resource(tag)

    p_user is the softmax-normalized activation weight of the requesting
    user; p_resource is the resource's tag frequency distribution from
    training. With memory_weight 1 the ranking is purely memory-driven,
    with 0 it degenerates to the resource's most frequent tags.
    """

    algorithm: ClassVar[str] = "bll"

    def __init__(self, decay: float = 0.5, memory_weight: float = 0.5, min_age: int = 1):
        self.decay = decay
        self.memory_weight = memory_weight
        self.min_age = min_age

    def _validate_params(self) -> None:
        check_positive("decay", self.decay)
        check_unit_interval("memory_weight", self.memory_weight)
        check_positive_int("min_age", self.min_age)

    def _context_scores(self, request: RecRequest) -> dict[str, float]:
        """Resource-side score distribution; override point for variants."""
        freq = self._model().resource_tag_freq.get(request.resource or "", {})
        total = sum(freq.values())
        if not total:
            return {}
        return {tag: count / total for tag, count in freq.items()}

    def recommend(self, request: RecRequest) -> RecList:
        user_weights = bll_tag_weights(
            self._model(), request.user, request.reference_time, self.decay, self.min_age
        )
        context = self._context_scores(request) if self.memory_weight < 1.0 else {}
        w = self.memory_weight
        scores = {}
        for tag in user_weights.keys() | context.keys():
            score = w * user_weights.get(tag, 0.0) + (1 - w) * context.get(tag, 0.0)
            if score > 0.0:
                scores[tag] = score
        return self._reclist(scores, request)


class BllAssociativeTags(BllTags):
    """BLL hybridized with an associative context component.

    The context score of a candidate tag is its co-occurrence mass with the
    resource's training tags, normalized over the candidate set, so tags
    that frequently appear together with the resource's vocabulary are
    promoted even when the user never applied them.
    """

    algorithm: ClassVar[str] = "bll_ac"

    def _context_scores(self, request: RecRequest) -> dict[str, float]:
        model = self._model()
        resource_tags = model.resource_tag_freq.get(request.resource or "", {})
        raw: dict[str, float] = {}
        for context_tag in resource_tags:
            for candidate, count in model.cooc.get(context_tag, {}).items():
                raw[candidate] = raw.get(candidate, 0.0) + count
        total = math.fsum(raw.values())
        if total <= 0:
            return {}
        return {tag: mass / total for tag, mass in raw.items()}


class UserKnnTags(TagRecommender):
    """User-based collaborative filtering over tag frequency vectors.

    Neighbor similarity is the cosine between per-user tag count vectors;
    the candidate score aggregates the neighbors' normalized tag profiles
    weighted by similarity. Users without a usable neighborhood fall back
    to the global popularity ranking.
    """

    algorithm: ClassVar[str] = "cf"

    def __init__(self, n_neighbors: int = 20):
        self.n_neighbors = n_neighbors

    def _validate_params(self) -> None:
        check_positive_int("n_neighbors", self.n_neighbors)

    def recommend(self, request: RecRequest) -> RecList:
        model = self._model()
        own_counts = model.user_tag_counts.get(request.user)
        if not own_counts:
            return self._reclist(self._most_popular_scores(), request)

        own_norm = math.sqrt(sum(c * c for c in own_counts.values()))
        similarities: list[tuple[float, str]] = []
        for other in model.users:
            if other == request.user:
                continue
            other_counts = model.user_tag_counts[other]
            shared = own_counts.keys() & other_counts.keys()
            if not shared:
                continue
            dot = sum(own_counts[t] * other_counts[t] for t in shared)
            other_norm = math.sqrt(sum(c * c for c in other_counts.values()))
            sim = dot / (own_norm * other_norm)
            if sim > 0:
                similarities.append((sim, other))

        similarities.sort(key=lambda pair: (-pair[0], pair[1]))
        neighborhood = similarities[: self.n_neighbors]
        if not neighborhood:
            return self._reclist(self._most_popular_scores(), request)

        scores: dict[str, float] = {}
        for sim, neighbor in neighborhood:
            counts = model.user_tag_counts[neighbor]
            total = sum(counts.values())
            for tag, count in counts.items():
                scores[tag] = scores.get(tag, 0.0) + sim * (count / total)
        return self._reclist(scores, request)


def user_cosine_similarity(model: Folksonomy, first: str, second: str) -> float:
    """Cosine similarity between two users' tag frequency vectors."""
    a = model.user_tag_counts.get(first, {})
    b = model.user_tag_counts.get(second, {})
    if not a or not b:
        return 0.0
    dot = sum(a[t] * b[t] for t in a.keys() & b.keys())
    if not dot:
        return 0.0
    return dot / (
        math.sqrt(sum(c * c for c in a.values()))
        * math.sqrt(sum(c * c for c in b.values()))
    )
