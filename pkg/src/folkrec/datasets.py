"""Folksonomy dataset ingest: parsing, pruning, splitting, export, synthesis.

The on-disk dataset format is one post per line, UTF-8, LF line endings:

    user<TAB>resource<TAB>timestamp<TAB>tag1,tag2,...

Timestamps are non-negative integer seconds. Tags are lowercased on read.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Raised for a malformed dataset line; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class Post:
    """One tagging event: a user annotating a resource with a set of tags."""

    user: str
    resource: str
    timestamp: int
    tags: frozenset[str]


@dataclass(frozen=True)
class DatasetSample:
    """A named, cleaned, timestamp-sorted list of posts.

    After cleaning there is at most one post per (user, resource) pair and
    posts are ordered by timestamp with ties kept in input order.
    """

    name: str
    posts: tuple[Post, ...]

    def __len__(self) -> int:
        return len(self.posts)


@dataclass(frozen=True)
class SplitSample:
    """Disjoint train/test partition of a sample."""

    train: DatasetSample
    test: DatasetSample


def clean_posts(posts: Iterable[Post]) -> tuple[Post, ...]:
    """Collapse duplicate (user, resource) posts and sort by timestamp.

    Duplicates merge to the max timestamp with the union of tags (real
    exports contain re-bookmarks). Ties in timestamp keep first-seen order.
    """
    merged: dict[tuple[str, str], list] = {}
    for idx, post in enumerate(posts):
        key = (post.user, post.resource)
        entry = merged.get(key)
        if entry is None:
            merged[key] = [post.timestamp, set(post.tags), idx]
        else:
            entry[0] = max(entry[0], post.timestamp)
            entry[1] |= post.tags
    ordered = sorted(
        ((ts, idx, key, tags) for key, (ts, tags, idx) in merged.items()),
        key=lambda item: (item[0], item[1]),
    )
    return tuple(
        Post(user, resource, ts, frozenset(tags))
        for ts, _, (user, resource), tags in ordered
    )


def parse_folksonomy_file(path: str | Path) -> DatasetSample:
    """Parse and clean a dataset file.

    Tags are lowercased, stripped, and deduplicated per post; empty tag
    tokens (e.g. from ``a,,b``) are dropped. Blank lines are skipped. An
    empty file yields an empty sample.

    Raises ParseError (with the offending line number) for a wrong field
    count, a non-integer or negative timestamp, or a post without tags.
    """
    path = Path(path)
    posts: list[Post] = []
    with path.open(encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(
                    line_number, f"expected 4 tab-separated fields, got {len(fields)}"
                )
            user, resource, ts_text, tag_text = fields
            if not user or not resource:
                raise ParseError(line_number, "empty user or resource id")
            try:
                timestamp = int(ts_text)
            except ValueError:
                raise ParseError(
                    line_number, f"timestamp is not an integer: {ts_text!r}"
                ) from None
            if timestamp < 0:
                raise ParseError(line_number, f"negative timestamp: {timestamp}")
            tags = frozenset(
                token.strip().lower() for token in tag_text.split(",") if token.strip()
            )
            if not tags:
                raise ParseError(line_number, "empty tag list")
            posts.append(Post(user, resource, timestamp, tags))
    return DatasetSample(name=path.stem, posts=clean_posts(posts))


def write_dataset_file(sample: DatasetSample, path: str | Path) -> int:
    """Write a sample in the 4-field dataset format; returns lines written."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for post in sample.posts:
            tags = ",".join(sorted(post.tags))
            handle.write(f"{post.user}\t{post.resource}\t{post.timestamp}\t{tags}\n")
    return len(sample.posts)


def p_core_prune(sample: DatasetSample, p: int) -> DatasetSample:
    """Reduce a sample to its p-core.

    Iteratively removes every user, resource, and tag occurring in fewer
    than ``p`` posts, drops posts left without tags, and repeats until a
    fixpoint. The result is the maximal sub-folksonomy in which every
    surviving entity occurs at least ``p`` times; it may be empty.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    posts = list(sample.posts)
    while True:
        user_counts: Counter[str] = Counter()
        resource_counts: Counter[str] = Counter()
        tag_counts: Counter[str] = Counter()
        for post in posts:
            user_counts[post.user] += 1
            resource_counts[post.resource] += 1
            for tag in post.tags:
                tag_counts[tag] += 1
        bad_users = {u for u, c in user_counts.items() if c < p}
        bad_resources = {r for r, c in resource_counts.items() if c < p}
        bad_tags = {t for t, c in tag_counts.items() if c < p}
        if not bad_users and not bad_resources and not bad_tags:
            break
        pruned: list[Post] = []
        for post in posts:
            if post.user in bad_users or post.resource in bad_resources:
                continue
            kept = post.tags - bad_tags
            if not kept:
                continue
            pruned.append(
                post if kept == post.tags else Post(post.user, post.resource, post.timestamp, kept)
            )
        posts = pruned
    return DatasetSample(name=sample.name, posts=tuple(posts))


def temporal_split(sample: DatasetSample) -> SplitSample:
    """Leave-latest-one-out split per user.

    Each user with at least two posts contributes their single latest post
    to the test set; everything else goes to train. Ties on the latest
    timestamp are broken by input order (the later line wins). Users with a
    single post stay entirely in train.
    """
    post_count: Counter[str] = Counter(post.user for post in sample.posts)
    latest_index: dict[str, int] = {}
    latest_ts: dict[str, int] = {}
    for idx, post in enumerate(sample.posts):
        if post.user not in latest_ts or post.timestamp >= latest_ts[post.user]:
            latest_ts[post.user] = post.timestamp
            latest_index[post.user] = idx
    test_indices = {
        idx for user, idx in latest_index.items() if post_count[user] >= 2
    }
    train = tuple(p for i, p in enumerate(sample.posts) if i not in test_indices)
    test = tuple(p for i, p in enumerate(sample.posts) if i in test_indices)
    return SplitSample(
        train=DatasetSample(name=f"{sample.name}_train", posts=train),
        test=DatasetSample(name=f"{sample.name}_test", posts=test),
    )


def export_triples(sample: DatasetSample, path: str | Path) -> int:
    """Write one `user<TAB>resource<TAB>tag` line per tag assignment.

    Lines are sorted by (timestamp, user, resource, tag). Returns the line
    count, i.e. the total number of tag assignments. I/O failures surface
    as OSError.
    """
    triples = sorted(
        (post.timestamp, post.user, post.resource, tag)
        for post in sample.posts
        for tag in post.tags
    )
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for _, user, resource, tag in triples:
            handle.write(f"{user}\t{resource}\t{tag}\n")
    return len(triples)


def _zipf_weights(n: int) -> list[float]:
    return [1.0 / (rank + 1) for rank in range(n)]


def _padded_ids(prefix: str, n: int) -> list[str]:
    width = max(3, len(str(max(n - 1, 0))))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def generate_synthetic(
    users: int,
    resources: int,
    tags: int,
    posts: int,
    recency_bias: float,
    seed: int,
) -> DatasetSample:
    """Generate a deterministic synthetic folksonomy sample.

    Every user authors at least one post; timestamps are strictly
    increasing. Each tag slot is drawn either from a Zipf-shaped global
    popularity distribution or, with probability ``recency_bias``, from the
    user's own most recently used tags, so bias 0 produces popularity-driven
    data and bias 1 produces personal-reuse-driven data.
    """
    if users < 1 or resources < 1:
        raise ValueError("users and resources must be >= 1")
    if tags < 2:
        raise ValueError(f"tags must be >= 2, got {tags}")
    if posts < users:
        raise ValueError(f"posts ({posts}) must be >= users ({users})")
    if users * resources < posts:
        raise ValueError("users * resources must be >= posts (unique pairs required)")
    if not 0.0 <= recency_bias <= 1.0:
        raise ValueError(f"recency_bias must be in [0, 1], got {recency_bias}")

    rng = random.Random(seed)
    user_ids = _padded_ids("u", users)
    resource_ids = _padded_ids("r", resources)
    tag_ids = _padded_ids("t", tags)
    tag_weights = _zipf_weights(tags)
    resource_weights = _zipf_weights(resources)

    authors = list(user_ids)
    authors.extend(rng.choices(user_ids, k=posts - users))
    rng.shuffle(authors)

    used_pairs: set[tuple[str, str]] = set()
    pair_budget: Counter[str] = Counter()
    history: dict[str, list[str]] = {u: [] for u in user_ids}
    generated: list[Post] = []

    def pick_resource(user: str) -> str | None:
        for _ in range(64):
            candidate = rng.choices(resource_ids, weights=resource_weights)[0]
            if (user, candidate) not in used_pairs:
                return candidate
        for candidate in resource_ids:
            if (user, candidate) not in used_pairs:
                return candidate
        return None

    def pick_popular(exclude: set[str]) -> str:
        for _ in range(64):
            candidate = rng.choices(tag_ids, weights=tag_weights)[0]
            if candidate not in exclude:
                return candidate
        return next(t for t in tag_ids if t not in exclude)

    def recent_tags(user: str) -> list[str]:
        seen: list[str] = []
        for tag in reversed(history[user]):
            if tag not in seen:
                seen.append(tag)
            if len(seen) == 10:
                break
        return seen

    for index, user in enumerate(authors):
        if pair_budget[user] >= resources:
            # this author exhausted their resource row; hand the post to the
            # first user (by id) with capacity left
            user = next(u for u in user_ids if pair_budget[u] < resources)
        resource = pick_resource(user)
        assert resource is not None  # guaranteed by the capacity checks
        used_pairs.add((user, resource))
        pair_budget[user] += 1

        n_slots = rng.randint(1, min(4, tags))
        chosen: set[str] = set()
        for _ in range(n_slots):
            recents = recent_tags(user)
            if recents and rng.random() < recency_bias:
                weights = _zipf_weights(len(recents))
                picked = None
                for _ in range(8):
                    candidate = rng.choices(recents, weights=weights)[0]
                    if candidate not in chosen:
                        picked = candidate
                        break
                if picked is None:
                    picked = pick_popular(chosen)
            else:
                picked = pick_popular(chosen)
            chosen.add(picked)
        history[user].extend(sorted(chosen))
        generated.append(Post(user, resource, (index + 1) * 10, frozenset(chosen)))

    return DatasetSample(name=f"synthetic_{seed}", posts=clean_posts(generated))
