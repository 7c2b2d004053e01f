"""Algorithm key registry shared by the CLI and the service."""

from __future__ import annotations

from .base import FolksonomyRecommender
from .folkrank import FolkRankTags
from .resource_recommenders import CirttResources, SustainResources, UserKnnResources
from .tag_recommenders import (
    BllAssociativeTags,
    BllTags,
    MostPopularTags,
    MostRecentTags,
    UserKnnTags,
)

REGISTRY: dict[str, type[FolksonomyRecommender]] = {
    cls.algorithm: cls
    for cls in (
        MostPopularTags,
        MostRecentTags,
        BllTags,
        BllAssociativeTags,
        UserKnnTags,
        FolkRankTags,
        UserKnnResources,
        CirttResources,
        SustainResources,
    )
}

# which generic CLI option feeds which constructor parameter, per algorithm
_OPTION_MAP: dict[str, dict[str, str]] = {
    "mp": {},
    "mr": {},
    "bll": {"d": "decay", "beta": "memory_weight"},
    "bll_ac": {"d": "decay", "beta": "memory_weight"},
    "cf": {"knn": "n_neighbors"},
    "folkrank": {"lambda": "damping"},
    "cf_r": {"knn": "n_neighbors"},
    "cirtt": {"knn": "n_neighbors", "d": "decay"},
    "sustain": {"knn": "n_neighbors"},
}


def algorithm_names() -> list[str]:
    return list(REGISTRY)


def algorithm_task(key: str) -> str:
    return REGISTRY[key].task


def make_recommender(key: str, options: dict | None = None) -> FolksonomyRecommender:
    """Instantiate an algorithm by key, applying any matching CLI options."""
    if key not in REGISTRY:
        raise KeyError(f"unknown algorithm {key!r}; known: {', '.join(REGISTRY)}")
    params = {}
    for option, param in _OPTION_MAP[key].items():
        value = (options or {}).get(option)
        if value is not None:
            params[param] = value
    return REGISTRY[key](**params)
