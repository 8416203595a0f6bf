"""Immutable undirected simple graphs and their topology statistics.

Graphs are stored in CSR form (``indptr``/``indices``) with every adjacency
list sorted, next to the canonical edge array where each row is ``(x, y)``
with ``x < y`` in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from ca_linkpred.errors import InputError

# Rows of the BFS distance matrix computed per batch in graph_stats.
_BFS_BATCH = 512


@dataclass(frozen=True, eq=False)
class Graph:
    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    edges: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.node_count, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        self._check_node(u)
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        self._check_node(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    @cached_property
    def adjacency(self) -> tuple:
        return tuple(self.indices[self.indptr[u]:self.indptr[u + 1]] for u in range(self.node_count))

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted ``x * node_count + y`` codes of the canonical edges."""
        return pair_keys(self.edges[:, 0], self.edges[:, 1], self.node_count)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        self._check_node(v)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def has_edges(self, pairs: np.ndarray) -> np.ndarray:
        """Vectorised membership test for an ``(n, 2)`` array of node pairs."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        x = np.minimum(pairs[:, 0], pairs[:, 1])
        y = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = pair_keys(x, y, self.node_count)
        i = np.searchsorted(self.edge_keys, keys)
        i = np.minimum(i, max(len(self.edge_keys) - 1, 0))
        if len(self.edge_keys) == 0:
            return np.zeros(len(keys), dtype=bool)
        return self.edge_keys[i] == keys

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix (int64)."""
        data = np.ones(len(self.indices), dtype=np.int64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.node_count, self.node_count))

    def _check_node(self, u):
        if not 0 <= u < self.node_count:
            raise InputError(f"node id {u} out of range [0, {self.node_count})")


def pair_keys(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(x, dtype=np.int64) * n + np.asarray(y, dtype=np.int64)


def build_graph(edges: Iterable, node_count: int) -> Graph:
    """Build a simple graph, dropping self-loops and collapsing duplicates.

    ``edges`` may be any iterable of id pairs or an ``(m, 2)`` integer array.
    """
    if node_count < 0:
        raise InputError("node_count must be non-negative")
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if len(arr) and (arr.min() < 0 or arr.max() >= node_count):
        bad = arr[(arr < 0) | (arr >= node_count)][0]
        raise InputError(f"node id {bad} out of range [0, {node_count})")
    x = np.minimum(arr[:, 0], arr[:, 1])
    y = np.maximum(arr[:, 0], arr[:, 1])
    keep = x != y
    keys = np.unique(pair_keys(x[keep], y[keep], max(node_count, 1)))
    if node_count:
        canon = np.stack([keys // node_count, keys % node_count], axis=1)
    else:
        canon = np.empty((0, 2), dtype=np.int64)
    return _from_canonical(canon, node_count)


def _from_canonical(canon: np.ndarray, node_count: int) -> Graph:
    # both directions, sorted by (source, target) so each adjacency list is sorted
    src = np.concatenate([canon[:, 0], canon[:, 1]])
    dst = np.concatenate([canon[:, 1], canon[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=node_count), out=indptr[1:])
    canon = np.ascontiguousarray(canon, dtype=np.int64)
    for a in (indptr, dst, canon):
        a.setflags(write=False)
    return Graph(node_count, indptr, dst, canon)


def common_neighbors(g: Graph, x: int, y: int) -> np.ndarray:
    if x == y:
        raise InputError("common_neighbors needs two distinct nodes")
    return np.intersect1d(g.neighbors(x), g.neighbors(y), assume_unique=True)


@dataclass(frozen=True, eq=False)
class DegreeClusteringProfile:
    """Average clustering coefficient C(k) per degree, with its per-node inputs."""

    entries: dict
    node_clustering: np.ndarray
    triangles: np.ndarray

    def __getitem__(self, k: int) -> float:
        return self.entries[k]

    def weights_for(self, degrees: np.ndarray) -> np.ndarray:
        """Map each degree to its C(k); degrees absent from the profile map to 0."""
        degrees = np.asarray(degrees, dtype=np.int64)
        top = int(degrees.max()) if len(degrees) else 0
        table = np.zeros(max(top, max(self.entries, default=0)) + 1)
        for k, c in self.entries.items():
            table[k] = c
        return table[degrees]


def triangle_counts(g: Graph) -> np.ndarray:
    """Number of triangles through each node."""
    a = g.csr
    return np.asarray((a @ a).multiply(a).sum(axis=1), dtype=np.int64).ravel() // 2


def clustering_profile(g: Graph) -> DegreeClusteringProfile:
    k = g.degrees
    tri = triangle_counts(g)
    pairs = k * (k - 1)
    # degree < 2 has no neighbour pairs; its coefficient is defined as 0
    cc = np.divide(2.0 * tri, pairs, out=np.zeros(g.node_count), where=pairs > 0)
    entries = {}
    if g.node_count:
        sums = np.bincount(k, weights=cc)
        counts = np.bincount(k)
        for deg in np.nonzero(counts)[0]:
            if deg > 0:
                entries[int(deg)] = float(sums[deg] / counts[deg])
    cc.setflags(write=False)
    tri.setflags(write=False)
    return DegreeClusteringProfile(entries, cc, tri)


@dataclass(frozen=True)
class GraphStats:
    """Topology summary. ``mean_distance`` is None when no node pair is connected."""

    N: float
    M: float
    mean_degree: float
    mean_distance: Optional[float]
    mean_clustering: float
    max_degree: float

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "mean_degree": self.mean_degree,
            "mean_distance": self.mean_distance,
            "mean_clustering": self.mean_clustering,
            "max_degree": self.max_degree,
        }

    @classmethod
    def average(cls, stats: list) -> "GraphStats":
        if not stats:
            raise InputError("cannot average an empty list of stats")
        dists = [s.mean_distance for s in stats if s.mean_distance is not None]
        mean = lambda vals: math.fsum(vals) / len(vals)  # noqa: E731
        return cls(
            N=mean([s.N for s in stats]),
            M=mean([s.M for s in stats]),
            mean_degree=mean([s.mean_degree for s in stats]),
            mean_distance=mean(dists) if dists else None,
            mean_clustering=mean([s.mean_clustering for s in stats]),
            max_degree=mean([s.max_degree for s in stats]),
        )


def mean_shortest_distance(g: Graph) -> Optional[float]:
    """Mean BFS distance over connected unordered pairs, or None if there are none."""
    n = g.node_count
    adj = g.csr.astype(np.float64)
    total = 0.0
    pairs = 0
    for start in range(0, n, _BFS_BATCH):
        rows = np.arange(start, min(start + _BFS_BATCH, n))
        dist = csgraph.shortest_path(adj, method="D", unweighted=True, directed=False, indices=rows)
        finite = np.isfinite(dist)
        finite[np.arange(len(rows)), rows] = False
        total += float(dist[finite].sum())
        pairs += int(finite.sum())
    if pairs == 0:
        return None
    # every unordered pair was visited from both ends
    return total / pairs


def graph_stats(g: Graph) -> GraphStats:
    n = g.node_count
    if n == 0:
        return GraphStats(0, 0, 0.0, None, 0.0, 0)
    prof = clustering_profile(g)
    return GraphStats(
        N=n,
        M=g.edge_count,
        mean_degree=2.0 * g.edge_count / n,
        mean_distance=mean_shortest_distance(g),
        mean_clustering=float(prof.node_clustering.mean()),
        max_degree=int(g.degrees.max()),
    )


def giant_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest connected component.

    Returns the subgraph and ``old_ids`` where new node ``i`` was ``old_ids[i]``
    in ``g``; ids keep their relative order. Equal-sized components are
    resolved in favour of the one holding the smallest original id.
    """
    n = g.node_count
    if n == 0:
        return g, np.empty(0, dtype=np.int64)
    _, labels = csgraph.connected_components(g.csr, directed=False)
    sizes = np.bincount(labels)
    first = np.full(len(sizes), n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    best = min(range(len(sizes)), key=lambda c: (-sizes[c], first[c]))
    old_ids = np.nonzero(labels == best)[0].astype(np.int64)
    remap = np.full(n, -1, dtype=np.int64)
    remap[old_ids] = np.arange(len(old_ids))
    e = remap[g.edges]
    e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
    return _from_canonical(e, len(old_ids)), old_ids
