"""Graph-based tag ranking by differential weight spreading.

The folksonomy becomes one undirected tripartite graph: users, resources,
and tags are nodes; edge weights count how often the two endpoints occur
in the same post. Weight spreading iterates

    w <- damping * S @ w + (1 - damping) * preference

with S the column-normalized adjacency matrix, until the L1 residual drops
below tolerance. A tag's score is the difference between the spread run
whose preference vector boosts the requesting user and resource and the
unboosted uniform run, so globally central nodes cancel out.
"""

from __future__ import annotations

from typing import ClassVar

import numpy as np
import scipy.sparse as sp

from .base import RecList, RecRequest, TagRecommender, check_open_unit_interval, check_positive, check_positive_int
from .folksonomy import Folksonomy


class FolksonomyGraph:
    """Node indexing and column-normalized adjacency for a snapshot."""

    def __init__(self, model: Folksonomy):
        users, resources, tags = model.users, model.resources, model.tags
        self.n_users = len(users)
        self.n_resources = len(resources)
        self.n_tags = len(tags)
        self.n_nodes = self.n_users + self.n_resources + self.n_tags
        self.user_offset = 0
        self.resource_offset = self.n_users
        self.tag_offset = self.n_users + self.n_resources
        self.user_node = {u: i for i, u in enumerate(users)}
        self.resource_node = {r: self.resource_offset + i for i, r in enumerate(resources)}
        self.tag_node = {t: self.tag_offset + i for i, t in enumerate(tags)}
        self.tags = tags
        self.matrix = self._column_normalized(self._adjacency(model))

    def _adjacency(self, model: Folksonomy) -> sp.coo_matrix:
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []

        def add_edge(a: int, b: int, weight: float) -> None:
            rows.extend((a, b))
            cols.extend((b, a))
            vals.extend((weight, weight))

        for user in model.users:
            u = self.user_node[user]
            for tag, count in sorted(model.user_tag_counts[user].items()):
                add_edge(u, self.tag_node[tag], float(count))
            for resource in sorted(model.user_resources[user]):
                add_edge(u, self.resource_node[resource], 1.0)
        for resource in model.resources:
            r = self.resource_node[resource]
            for tag, count in sorted(model.resource_tag_freq[resource].items()):
                add_edge(r, self.tag_node[tag], float(count))
        return sp.coo_matrix(
            (vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes)
        )

    @staticmethod
    def _column_normalized(adjacency: sp.coo_matrix) -> sp.csr_matrix:
        matrix = adjacency.tocsc()
        column_sums = np.asarray(matrix.sum(axis=0)).ravel()
        scale = np.divide(
            1.0, column_sums, out=np.zeros_like(column_sums), where=column_sums > 0
        )
        return (matrix @ sp.diags(scale)).tocsr()


def spread_weights(
    matrix: sp.csr_matrix,
    preference: np.ndarray,
    damping: float,
    max_iters: int = 100,
    tol: float = 1e-6,
) -> tuple[np.ndarray, int, float]:
    """Iterate the damped spreading fixpoint from the preference vector.

    Returns (weights, iterations, final L1 residual). The weight vector
    keeps unit mass whenever the preference has unit mass and the graph has
    no isolated nodes.
    """
    weights = preference.copy()
    residual = float("inf")
    iterations = 0
    retain = 1.0 - damping
    for iterations in range(1, max_iters + 1):
        updated = damping * (matrix @ weights) + retain * preference
        residual = float(np.abs(updated - weights).sum())
        weights = updated
        if residual < tol:
            break
    return weights, iterations, residual


class FolkRankTags(TagRecommender):
    """Differential personalized spreading over the tripartite graph.

    The uniform run is computed once at fit time; each request pays only
    for its personalized run. Preference boosts default to the user and
    resource counts of the training snapshot, following the convention of
    one unit of base preference mass per node.
    """

    algorithm: ClassVar[str] = "folkrank"

    def __init__(
        self,
        damping: float = 0.7,
        max_iters: int = 100,
        tol: float = 1e-6,
        user_boost: float | None = None,
        resource_boost: float | None = None,
    ):
        self.damping = damping
        self.max_iters = max_iters
        self.tol = tol
        self.user_boost = user_boost
        self.resource_boost = resource_boost

    def _validate_params(self) -> None:
        check_open_unit_interval("damping", self.damping)
        check_positive_int("max_iters", self.max_iters)
        check_positive("tol", self.tol)

    def fit(self, X, y=None):
        super().fit(X, y)
        model = self.model_
        self.graph_ = FolksonomyGraph(model)
        n = self.graph_.n_nodes
        if n:
            uniform = np.full(n, 1.0 / n)
            self.uniform_weights_, _, _ = spread_weights(
                self.graph_.matrix, uniform, self.damping, self.max_iters, self.tol
            )
        else:
            self.uniform_weights_ = np.zeros(0)
        return self

    def _boosts(self) -> tuple[float, float]:
        user_boost = (
            float(self.graph_.n_users) if self.user_boost is None else self.user_boost
        )
        resource_boost = (
            float(self.graph_.n_resources)
            if self.resource_boost is None
            else self.resource_boost
        )
        return user_boost, resource_boost

    def recommend(self, request: RecRequest) -> RecList:
        graph = self.graph_
        if not graph.n_nodes:
            return RecList(items=(), algorithm=self.algorithm, request=request)
        user_node = graph.user_node.get(request.user)
        resource_node = graph.resource_node.get(request.resource or "")
        if user_node is None and resource_node is None:
            # nothing to boost; personalization is impossible
            return self._reclist(self._most_popular_scores(), request)

        user_boost, resource_boost = self._boosts()
        preference = np.ones(graph.n_nodes)
        if user_node is not None:
            preference[user_node] += user_boost
        if resource_node is not None:
            preference[resource_node] += resource_boost
        preference /= preference.sum()

        personalized, _, _ = spread_weights(
            graph.matrix, preference, self.damping, self.max_iters, self.tol
        )
        difference = personalized - self.uniform_weights_
        scores = {
            tag: float(difference[graph.tag_node[tag]]) for tag in graph.tags
        }
        return self._reclist(scores, request)
