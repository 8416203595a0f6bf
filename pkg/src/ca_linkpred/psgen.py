"""Popularity-versus-similarity (PS) growing networks in the hyperbolic plane.

Node ``t = 1..N`` arrives at a uniform angle and radius ``r_t = (2/zeta) ln t``.
On arrival every earlier node ``s`` drifts outwards to
``r_s(t) = beta r_s + (1 - beta) r_t`` with ``beta = 1/(gamma - 1)``
(popularity fading), and the newcomer links to each earlier node with the
Fermi-Dirac probability

    p(x) = 1 / (1 + exp(zeta (x - R_t) / (2 T)))

of their hyperbolic distance ``x``. The cutoff ``R_t`` is chosen so the
expected number of new links is ``m``. At ``T = 0`` the newcomer links to
its ``m`` hyperbolically closest predecessors instead, and while at most
``m`` nodes exist it links to all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ca_linkpred.errors import InputError
from ca_linkpred.graph import Graph, GraphStats, build_graph, giant_component, graph_stats
from ca_linkpred.seeds import derive_seed


@dataclass(frozen=True)
class PSParams:
    N: int = 1000
    m: int = 3
    T: float = 0.5
    gamma: float = 2.1
    zeta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise InputError(f"m must be >= 1, got {self.m}")
        if self.N <= self.m:
            raise InputError(f"N must exceed m (N={self.N}, m={self.m})")
        if not 0 <= self.T < 1:
            raise InputError(f"temperature T must lie in [0, 1), got {self.T}")
        if not self.gamma > 2:
            raise InputError(f"gamma must be > 2, got {self.gamma}")
        if not self.zeta > 0:
            raise InputError(f"zeta must be > 0, got {self.zeta}")

    @property
    def beta(self) -> float:
        return 1.0 / (self.gamma - 1.0)


def hyperbolic_distance(r1, theta1, r2, theta2, zeta: float = 1.0):
    """Exact distance on the hyperbolic plane of curvature ``-zeta**2``."""
    dtheta = np.pi - np.abs(np.pi - np.abs(np.asarray(theta1) - theta2))
    c = np.cosh(zeta * r1) * np.cosh(zeta * r2) - np.sinh(zeta * r1) * np.sinh(zeta * r2) * np.cos(dtheta)
    return np.arccosh(np.maximum(c, 1.0)) / zeta


def link_radius(r_t: float, params: PSParams) -> float:
    """Cutoff R_t making the expected number of links of the newcomer equal m."""
    z, b, T, m = params.zeta, params.beta, params.T, params.m
    fading = 1.0 - math.exp(-0.5 * z * (1.0 - b) * r_t)
    return r_t - (2.0 / z) * math.log(2.0 * T * fading / (math.sin(T * math.pi) * m * (1.0 - b)))


def generate_ps(params: PSParams) -> Graph:
    rng = np.random.default_rng(params.seed)
    n, m, T, z, b = params.N, params.m, params.T, params.zeta, params.beta
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    radius = (2.0 / z) * np.log(np.arange(1, n + 1))
    src, dst = [], []
    for i in range(1, n):
        if i <= m:
            src.append(np.full(i, i))
            dst.append(np.arange(i))
            continue
        r_t = radius[i]
        drifted = b * radius[:i] + (1.0 - b) * r_t
        x = hyperbolic_distance(drifted, theta[:i], r_t, theta[i], z)
        if T == 0:
            targets = np.argsort(x, kind="stable")[:m]
        else:
            arg = z * (x - link_radius(r_t, params)) / (2.0 * T)
            p = 0.5 * (1.0 - np.tanh(0.5 * arg))  # logistic, overflow-free
            targets = np.nonzero(rng.random(i) < p)[0]
        src.append(np.full(len(targets), i))
        dst.append(targets)
    if src:
        edges = np.stack([np.concatenate(src), np.concatenate(dst)], axis=1)
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return build_graph(edges, n)


def replica_seeds(seed: int, replicas: int) -> list:
    return [derive_seed(seed, i) for i in range(replicas)]


def generate_replicas(params: PSParams, replicas: int) -> list:
    return [generate_ps(replace(params, seed=s)) for s in replica_seeds(params.seed, replicas)]


def calibrate_temperature_check(params: PSParams, replicas: int) -> GraphStats:
    """Average giant-component statistics over ``replicas`` generated graphs."""
    if replicas < 1:
        raise InputError("replicas must be >= 1")
    stats = [graph_stats(giant_component(g)[0]) for g in generate_replicas(params, replicas)]
    return GraphStats.average(stats)
