"""Per-list ranking metrics: accuracy, rank quality, diversity, novelty.

All functions take the recommendation list in rank order plus the relevant
ground-truth set, truncate to the cutoff themselves, and return a float in
[0, 1]. Empty truth sets are defined to score 0.
"""

from __future__ import annotations

import math
from typing import Callable, Collection, Mapping, Sequence


def hits_at_k(recommended: Sequence[str], relevant: Collection[str], k: int) -> int:
    truth = set(relevant)
    return sum(1 for item in recommended[:k] if item in truth)


def recall_at_k(recommended: Sequence[str], relevant: Collection[str], k: int) -> float:
    if not relevant:
        return 0.0
    return hits_at_k(recommended, relevant, k) / len(relevant)


def precision_at_k(
    recommended: Sequence[str], relevant: Collection[str], k: int
) -> float:
    return hits_at_k(recommended, relevant, k) / k


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def mrr_at_k(recommended: Sequence[str], relevant: Collection[str], k: int) -> float:
    """Reciprocal rank of the first relevant item within the cutoff."""
    truth = set(relevant)
    for rank, item in enumerate(recommended[:k], start=1):
        if item in truth:
            return 1.0 / rank
    return 0.0


def average_precision_at_k(
    recommended: Sequence[str], relevant: Collection[str], k: int
) -> float:
    """Precision averaged over hit positions, normalized by min(|truth|, k)."""
    if not relevant:
        return 0.0
    truth = set(relevant)
    hits = 0
    accumulated = 0.0
    for rank, item in enumerate(recommended[:k], start=1):
        if item in truth:
            hits += 1
            accumulated += hits / rank
    return accumulated / min(len(relevant), k)


def ndcg_at_k(recommended: Sequence[str], relevant: Collection[str], k: int) -> float:
    """Binary-gain nDCG with the log2(position + 1) discount."""
    if not relevant:
        return 0.0
    truth = set(relevant)
    dcg = 0.0
    for rank, item in enumerate(recommended[:k], start=1):
        if item in truth:
            dcg += 1.0 / math.log2(rank + 1)
    ideal = 0.0
    for rank in range(1, min(k, len(relevant)) + 1):
        ideal += 1.0 / math.log2(rank + 1)
    return dcg / ideal if ideal > 0 else 0.0


def cosine_profiles(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine of two sparse profiles; 0 when either profile is empty."""
    if not a or not b:
        return 0.0
    dot = sum(a[key] * b[key] for key in a.keys() & b.keys())
    if not dot:
        return 0.0
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    return dot / (norm_a * norm_b)


def intra_list_distance_at_k(
    recommended: Sequence[str],
    profile: Callable[[str], Mapping[str, float]],
    k: int,
) -> float:
    """Mean pairwise (1 - cosine) distance of the recommended items.

    Profiles come from training statistics: a tag's co-occurrence vector or
    a resource's tag frequency vector. Lists shorter than two items
    contribute 0.
    """
    items = list(recommended[:k])
    if len(items) < 2:
        return 0.0
    profiles = [profile(item) for item in items]
    total = 0.0
    pairs = 0
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            total += 1.0 - cosine_profiles(profiles[i], profiles[j])
            pairs += 1
    return total / pairs


def inverse_popularity_at_k(
    recommended: Sequence[str],
    frequency: Callable[[str], int],
    max_frequency: int,
    k: int,
) -> float:
    """Mean (1 - freq/max_freq) over the list; 0 for the most popular item."""
    items = list(recommended[:k])
    if not items or max_frequency <= 0:
        return 0.0
    return math.fsum(
        1.0 - frequency(item) / max_frequency for item in items
    ) / len(items)
