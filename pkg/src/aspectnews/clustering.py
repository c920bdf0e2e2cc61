"""Canonicalization of section titles via similarity-graph components.

Two titles land in the same cluster iff they are connected in the graph
whose edges are title pairs with cosine similarity at or above the
threshold; connectivity is the transitive closure of the pairwise merge
relation, computed with union-find. Pairwise O(n^2) comparison is fine:
real inputs are a few hundred titles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .validation import as_vector, check_same_dimension, check_unit_interval


def cosine(u, v) -> float:
    """Cosine similarity; defined as 0 when either vector has zero norm."""
    u = as_vector(u)
    v = as_vector(v)
    check_same_dimension(u, v)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class TitleClusterer(BaseEstimator):
    """Threshold clustering over row vectors, sklearn-style.

    ``fit`` computes ``labels_``: component ids numbered by first row
    occurrence, so the labeling is independent of any internal ordering.
    """

    def __init__(self, threshold: float = 0.95):
        self.threshold = threshold

    def fit(self, X, y=None):
        check_unit_interval(self.threshold, "threshold")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {X.shape}")
        n = X.shape[0]
        uf = _UnionFind(n)
        for i in range(n):
            for j in range(i + 1, n):
                if cosine(X[i], X[j]) >= self.threshold:
                    uf.union(i, j)
        roots: dict[int, int] = {}
        labels = np.empty(n, dtype=np.intp)
        for i in range(n):
            root = uf.find(i)
            labels[i] = roots.setdefault(root, len(roots))
        self.labels_ = labels
        return self

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_

    def predict(self, X=None) -> np.ndarray:
        check_is_fitted(self, "labels_")
        return self.labels_


@dataclass(frozen=True)
class SectionTitleCluster:
    """Canonical aspect identity: a set of equivalent section titles.

    ``cluster_id`` is the lexicographically smallest member, ``labels``
    orders members by descending usage frequency (ties alphabetical).
    """

    cluster_id: str
    members: tuple[str, ...]
    centroid: np.ndarray
    labels: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "members": list(self.members),
            "labels": list(self.labels),
        }


def cluster_titles(
    title_vectors: Mapping[str, np.ndarray],
    threshold: float = 0.95,
    title_counts: Mapping[str, int] | None = None,
) -> list[SectionTitleCluster]:
    """Partition titles into clusters of semantically equivalent ones.

    ``title_counts`` (how often each title occurs in the source corpus)
    only orders the ``labels`` list; it does not affect the partition.
    """
    if not title_vectors:
        return []
    titles = sorted(title_vectors)
    vectors = np.stack([as_vector(title_vectors[t]) for t in titles])
    labels = TitleClusterer(threshold=threshold).fit_predict(vectors)

    counts = title_counts or {}
    groups: dict[int, list[str]] = {}
    for title, label in zip(titles, labels):
        groups.setdefault(int(label), []).append(title)

    clusters = []
    for group in groups.values():
        members = tuple(sorted(group))
        centroid = np.mean([title_vectors[t] for t in members], axis=0)
        ordered = tuple(sorted(members, key=lambda t: (-counts.get(t, 0), t)))
        clusters.append(
            SectionTitleCluster(
                cluster_id=min(members),
                members=members,
                centroid=centroid,
                labels=ordered,
            )
        )
    clusters.sort(key=lambda c: c.cluster_id)
    return clusters


def member_index(clusters: list[SectionTitleCluster]) -> dict[str, str]:
    """Map every member title to its cluster id."""
    index: dict[str, str] = {}
    for cluster in clusters:
        for title in cluster.members:
            index[title] = cluster.cluster_id
    return index
