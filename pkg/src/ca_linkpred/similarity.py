"""Common-neighbour similarity indices: CN, AA, RA and CA.

Every index has the form ``s_xy = sum_{z in N(x) & N(y)} w(z)`` with a
per-node weight: 1 (CN), 1/ln k_z (AA), 1/k_z (RA) or C(k_z) (CA). The
all-pairs scorer evaluates this as ``A diag(w) A`` on the sparse adjacency
matrix, so only pairs at distance two are materialised. All other
non-observed pairs share the score 0 and are kept as a count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp

from ca_linkpred.errors import ConsistencyError, InputError
from ca_linkpred.graph import DegreeClusteringProfile, Graph, clustering_profile, common_neighbors, pair_keys

INDICES = ("CN", "AA", "RA", "CA")


def normalize_index(name: str) -> str:
    key = name.upper()
    if key not in INDICES:
        raise InputError(f"unknown similarity index {name!r}; choose from {', '.join(INDICES)}")
    return key


def _contributors(g: Graph, x: int, y: int) -> np.ndarray:
    z = common_neighbors(g, x, y)
    k = g.degrees[z]
    # a shared neighbour is adjacent to both x and y
    assert np.all(k >= 2), "common neighbour with degree < 2"
    return k


def score_cn(g: Graph, x: int, y: int) -> int:
    return int(len(common_neighbors(g, x, y)))


def score_aa(g: Graph, x: int, y: int) -> float:
    return math.fsum(1.0 / math.log(k) for k in _contributors(g, x, y))


def score_ra(g: Graph, x: int, y: int) -> float:
    return math.fsum(1.0 / k for k in _contributors(g, x, y))


def score_ca(g: Graph, profile: DegreeClusteringProfile, x: int, y: int) -> float:
    total = []
    for k in _contributors(g, x, y):
        try:
            total.append(profile[int(k)])
        except KeyError:
            raise ConsistencyError(f"profile has no entry for degree {k}; was it built from this graph?") from None
    return math.fsum(total)


def node_weights(g: Graph, index: str, profile: Optional[DegreeClusteringProfile] = None) -> np.ndarray:
    """Per-node contribution w(z) of a common neighbour under ``index``.

    Nodes of degree < 2 never act as common neighbours; their weight is 0.
    """
    index = normalize_index(index)
    k = g.degrees.astype(np.float64)
    usable = k >= 2
    if index == "CN":
        return np.ones(g.node_count)
    if index == "AA":
        return np.divide(1.0, np.log(np.where(usable, k, 2.0)), out=np.zeros(g.node_count), where=usable)
    if index == "RA":
        return np.divide(1.0, k, out=np.zeros(g.node_count), where=usable)
    if profile is None:
        profile = clustering_profile(g)
    missing = set(np.unique(g.degrees[usable]).tolist()) - set(profile.entries)
    if missing:
        raise ConsistencyError(f"profile lacks degrees {sorted(missing)[:5]}; was it built from this graph?")
    return profile.weights_for(g.degrees)


@dataclass(frozen=True, eq=False)
class ScoredCandidates:
    """Scores of every non-observed pair that has a common neighbour.

    ``x``, ``y`` and ``score`` are parallel arrays sorted by ``(x, y)`` with
    ``x < y``. The remaining ``zero_pair_count`` non-observed pairs all
    score 0. ``graph`` is the (training) graph the scores were computed on.
    """

    x: np.ndarray
    y: np.ndarray
    score: np.ndarray
    zero_pair_count: int
    index_name: str
    graph: Graph

    def __len__(self):
        return len(self.score)

    @property
    def total_pairs(self) -> int:
        """Number of non-observed pairs, listed or not."""
        return len(self.score) + self.zero_pair_count

    @property
    def pairs(self) -> list:
        return list(zip(self.x.tolist(), self.y.tolist(), self.score.tolist()))

    @property
    def keys(self) -> np.ndarray:
        return pair_keys(self.x, self.y, self.graph.node_count)

    def locate(self, pairs: np.ndarray) -> np.ndarray:
        """Index into the listed arrays for each pair, or -1 if unlisted."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        a = np.minimum(pairs[:, 0], pairs[:, 1])
        b = np.maximum(pairs[:, 0], pairs[:, 1])
        q = pair_keys(a, b, self.graph.node_count)
        keys = self.keys
        pos = np.searchsorted(keys, q)
        found = np.zeros(len(q), dtype=bool)
        inside = pos < len(keys)
        found[inside] = keys[pos[inside]] == q[inside]
        return np.where(found, pos, -1)

    def lookup(self, pairs: np.ndarray) -> np.ndarray:
        """Scores of arbitrary node pairs (0 for pairs that are not listed)."""
        pos = self.locate(pairs)
        out = np.zeros(len(pos))
        hit = pos >= 0
        out[hit] = self.score[pos[hit]]
        return out


def _distance_two_pairs(g: Graph):
    """Upper-triangle non-edges at distance two, with their CN counts."""
    a = g.csr
    cn = sp.triu(a @ a, k=1).tocoo()
    keys = pair_keys(cn.row, cn.col, g.node_count)
    order = np.argsort(keys, kind="stable")
    keys, counts = keys[order], cn.data[order]
    if len(g.edge_keys):
        drop = np.isin(keys, g.edge_keys, assume_unique=True)
        keys, counts = keys[~drop], counts[~drop]
    return keys, counts.astype(np.float64)


def score_many(
    g: Graph,
    indices: Iterable[str],
    profile: Optional[DegreeClusteringProfile] = None,
) -> dict:
    """Score all candidate pairs under several indices sharing one enumeration."""
    names = [normalize_index(i) for i in indices]
    n = g.node_count
    keys, cn = _distance_two_pairs(g)
    x = keys // max(n, 1)
    y = keys % max(n, 1)
    zero = n * (n - 1) // 2 - g.edge_count - len(keys)
    out = {}
    for name in names:
        if name == "CN":
            s = cn
        else:
            w = node_weights(g, name, profile)
            s = _weighted_lookup(g, w, keys)
        out[name] = ScoredCandidates(x, y, s, zero, name, g)
    return out


def _weighted_lookup(g: Graph, w: np.ndarray, keys: np.ndarray) -> np.ndarray:
    a = g.csr.astype(np.float64)
    prod = sp.triu(a @ sp.diags(w) @ a, k=1).tocoo()
    pk = pair_keys(prod.row, prod.col, g.node_count)
    order = np.argsort(pk, kind="stable")
    pk, vals = pk[order], prod.data[order]
    # products that vanish (CA weight 0) are absent from ``prod`` but still listed
    out = np.zeros(len(keys))
    if len(pk):
        pos = np.minimum(np.searchsorted(pk, keys), len(pk) - 1)
        hit = pk[pos] == keys
        out[hit] = vals[pos[hit]]
    return out


def score_all(g: Graph, index: str, profile: Optional[DegreeClusteringProfile] = None) -> ScoredCandidates:
    """Score every non-observed pair of ``g`` under one index.

    For CA the degree-clustering profile is computed from ``g`` unless given.
    """
    return score_many(g, [index], profile)[normalize_index(index)]
