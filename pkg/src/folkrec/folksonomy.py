"""Immutable indexed view of a training sample, shared by all recommenders."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .datasets import DatasetSample, Post


@dataclass(frozen=True)
class DatasetStats:
    """Headline dataset figures; means are 0 for empty datasets."""

    n_users: int
    n_resources: int
    n_tags: int
    n_posts: int
    n_assignments: int
    mean_tags_per_post: float
    mean_posts_per_user: float


class Folksonomy:
    """Frozen index over a post list.

    Holds interned id tables, per-user tag timelines, per-resource tag
    frequencies, global tag frequencies, and symmetric tag co-occurrence
    counts (same post, zero diagonal). Safe for unrestricted concurrent
    reads; never mutated after construction.
    """

    __slots__ = (
        "posts",
        "users",
        "resources",
        "tags",
        "user_index",
        "resource_index",
        "tag_index",
        "user_posts",
        "user_tag_counts",
        "user_tag_last",
        "user_tag_times",
        "user_resources",
        "resource_tag_freq",
        "resource_post_count",
        "tag_freq",
        "cooc",
        "tag_total_cooc",
        "max_timestamp",
    )

    def __init__(self, posts: Iterable[Post]):
        self.posts: tuple[Post, ...] = tuple(posts)

        user_posts: dict[str, list[Post]] = defaultdict(list)
        user_tag_counts: dict[str, Counter[str]] = defaultdict(Counter)
        user_tag_last: dict[str, dict[str, int]] = defaultdict(dict)
        user_tag_times: dict[str, dict[str, list[int]]] = defaultdict(
            lambda: defaultdict(list)
        )
        user_resources: dict[str, set[str]] = defaultdict(set)
        resource_tag_freq: dict[str, Counter[str]] = defaultdict(Counter)
        resource_post_count: Counter[str] = Counter()
        tag_freq: Counter[str] = Counter()
        cooc: dict[str, Counter[str]] = defaultdict(Counter)
        tag_total_cooc: Counter[str] = Counter()
        max_timestamp = 0

        for post in self.posts:
            user, resource = post.user, post.resource
            ordered_tags = sorted(post.tags)
            user_posts[user].append(post)
            user_resources[user].add(resource)
            resource_post_count[resource] += 1
            max_timestamp = max(max_timestamp, post.timestamp)
            for tag in ordered_tags:
                user_tag_counts[user][tag] += 1
                user_tag_last[user][tag] = max(
                    user_tag_last[user].get(tag, 0), post.timestamp
                )
                user_tag_times[user][tag].append(post.timestamp)
                resource_tag_freq[resource][tag] += 1
                tag_freq[tag] += 1
            for i, first in enumerate(ordered_tags):
                for second in ordered_tags[i + 1 :]:
                    cooc[first][second] += 1
                    cooc[second][first] += 1
                    tag_total_cooc[first] += 1
                    tag_total_cooc[second] += 1

        self.users: tuple[str, ...] = tuple(sorted(user_posts))
        self.resources: tuple[str, ...] = tuple(sorted(resource_post_count))
        self.tags: tuple[str, ...] = tuple(sorted(tag_freq))
        self.user_index = {u: i for i, u in enumerate(self.users)}
        self.resource_index = {r: i for i, r in enumerate(self.resources)}
        self.tag_index = {t: i for i, t in enumerate(self.tags)}
        self.user_posts = {u: tuple(ps) for u, ps in user_posts.items()}
        self.user_tag_counts = dict(user_tag_counts)
        self.user_tag_last = dict(user_tag_last)
        self.user_tag_times = {
            u: {t: tuple(ts) for t, ts in per_tag.items()}
            for u, per_tag in user_tag_times.items()
        }
        self.user_resources = {u: frozenset(rs) for u, rs in user_resources.items()}
        self.resource_tag_freq = dict(resource_tag_freq)
        self.resource_post_count = resource_post_count
        self.tag_freq = tag_freq
        self.cooc = dict(cooc)
        self.tag_total_cooc = tag_total_cooc
        self.max_timestamp = max_timestamp

    @classmethod
    def build(cls, sample: DatasetSample) -> "Folksonomy":
        return cls(sample.posts)

    @property
    def n_entities(self) -> int:
        return len(self.users) + len(self.resources) + len(self.tags)

    def cooccurrence(self, first: str, second: str) -> int:
        """Number of posts whose tag set contains both tags (0 on diagonal)."""
        if first == second:
            return 0
        return self.cooc.get(first, {}).get(second, 0)

    def tag_profile(self, tag: str) -> Mapping[str, int]:
        """Co-occurrence vector of a tag, used as its similarity profile."""
        return self.cooc.get(tag, {})

    def resource_profile(self, resource: str) -> Mapping[str, int]:
        """Tag frequency vector of a resource."""
        return self.resource_tag_freq.get(resource, {})

    def tags_of_user(self, user: str) -> list[tuple[str, int, int]]:
        """The user's past tags as (tag, count, last_timestamp) rows.

        Ordered by count descending, then last use descending, then tag id.
        Unknown users get an empty list.
        """
        counts = self.user_tag_counts.get(user)
        if not counts:
            return []
        last = self.user_tag_last[user]
        rows = [(tag, count, last[tag]) for tag, count in counts.items()]
        rows.sort(key=lambda row: (-row[1], -row[2], row[0]))
        return rows

    def stats(self) -> DatasetStats:
        n_posts = len(self.posts)
        n_users = len(self.users)
        n_assignments = sum(len(post.tags) for post in self.posts)
        return DatasetStats(
            n_users=n_users,
            n_resources=len(self.resources),
            n_tags=len(self.tags),
            n_posts=n_posts,
            n_assignments=n_assignments,
            mean_tags_per_post=n_assignments / n_posts if n_posts else 0.0,
            mean_posts_per_user=n_posts / n_users if n_users else 0.0,
        )
