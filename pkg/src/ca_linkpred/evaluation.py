"""Edge hold-out splits, AUC and precision, and the repeated-split runner."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from ca_linkpred.errors import InputError
from ca_linkpred.seeds import derive_seed
from ca_linkpred.graph import Graph, _from_canonical, clustering_profile
from ca_linkpred.similarity import INDICES, ScoredCandidates, normalize_index, score_many

# Scores are rounded to this many decimals before comparison so that sums
# accumulated in different orders still tie.
TIE_DECIMALS = 9

SPLIT_MODES = ("random", "connected")


def probe_size(edge_count: int, probe_fraction: float) -> int:
    """round(probe_fraction * edge_count), halves rounded up."""
    return int(math.floor(probe_fraction * edge_count + 0.5))


@dataclass(frozen=True, eq=False)
class EdgeSplit:
    training: np.ndarray
    probe: np.ndarray
    probe_fraction: float
    seed: int
    mode: str = "random"


def split_edges(g: Graph, probe_fraction: float, seed: int, mode: str = "random") -> tuple[EdgeSplit, Graph]:
    """Hold out ``round(probe_fraction * M)`` edges as the probe set.

    ``mode="random"`` draws the probe set uniformly without replacement.
    ``mode="connected"`` visits edges in a uniformly random order and only
    moves an edge to the probe set if its endpoints remain connected in the
    training graph; the number of connected components never changes.

    Returns the split and the training graph on the same node set.
    """
    if not 0 < probe_fraction < 1:
        raise InputError(f"probe_fraction must lie in (0, 1), got {probe_fraction}")
    if mode not in SPLIT_MODES:
        raise InputError(f"unknown split mode {mode!r}")
    m = g.edge_count
    if m < 2:
        raise InputError(f"need at least 2 edges to split, graph has {m}")
    n_probe = probe_size(m, probe_fraction)
    if n_probe == 0:
        raise InputError(f"probe fraction {probe_fraction} of {m} edges leaves an empty probe set")
    if n_probe >= m:
        raise InputError(f"probe fraction {probe_fraction} of {m} edges leaves an empty training set")
    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    if mode == "random":
        chosen = order[:n_probe]
    else:
        chosen = _connected_probe(g, order, n_probe)
    mask = np.zeros(m, dtype=bool)
    mask[chosen] = True
    probe = g.edges[mask]
    training = g.edges[~mask]
    split = EdgeSplit(training, probe, probe_fraction, seed, mode)
    return split, _from_canonical(training, g.node_count)


def _connected_probe(g: Graph, order: np.ndarray, n_probe: int) -> np.ndarray:
    adj = [set(nb.tolist()) for nb in g.adjacency]
    chosen = []
    for e in order.tolist():
        u, v = g.edges[e].tolist()
        adj[u].discard(v)
        adj[v].discard(u)
        if _still_connected(adj, u, v):
            chosen.append(e)
            if len(chosen) == n_probe:
                return np.asarray(chosen, dtype=np.int64)
        else:
            adj[u].add(v)
            adj[v].add(u)
    raise InputError(
        f"only {len(chosen)} of {n_probe} probe edges can be removed without disconnecting the graph"
    )


def _still_connected(adj: list, u: int, v: int) -> bool:
    # bidirectional BFS, always growing the smaller frontier
    if not adj[u] or not adj[v]:
        return False
    seen = ({u}, {v})
    frontier = (deque([u]), deque([v]))
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = seen[side], seen[1 - side]
        for _ in range(len(frontier[side])):
            node = frontier[side].popleft()
            for nb in adj[node]:
                if nb in other:
                    return True
                if nb not in mine:
                    mine.add(nb)
                    frontier[side].append(nb)
    return False


def _tie_key(values: np.ndarray) -> np.ndarray:
    return np.round(np.asarray(values, dtype=np.float64), TIE_DECIMALS)


def _check_probe(scores: ScoredCandidates, probe: np.ndarray) -> np.ndarray:
    probe = np.asarray(probe, dtype=np.int64).reshape(-1, 2)
    if len(probe) == 0:
        raise InputError("probe set is empty")
    if (probe[:, 0] == probe[:, 1]).any():
        raise InputError("probe set contains a self-loop")
    present = scores.graph.has_edges(probe)
    if present.any():
        x, y = probe[np.argmax(present)]
        raise InputError(f"probe edge ({x}, {y}) is present in the training graph")
    return probe


def _populations(scores: ScoredCandidates, probe: np.ndarray):
    """Tie-keyed probe scores, listed nonexistent scores, and the zero-block size."""
    probe = _check_probe(scores, probe)
    pos = scores.locate(probe)
    listed = pos >= 0
    probe_scores = np.zeros(len(probe))
    probe_scores[listed] = scores.score[pos[listed]]
    is_probe = np.zeros(len(scores), dtype=bool)
    is_probe[pos[listed]] = True
    nonexistent = _tie_key(scores.score[~is_probe])
    zeros = scores.zero_pair_count - int((~listed).sum())
    return _tie_key(probe_scores), nonexistent, zeros, is_probe


def auc_exact(scores: ScoredCandidates, probe: np.ndarray) -> float:
    """Exact AUC over all (probe, nonexistent) comparisons, half credit for ties."""
    p, non, zeros, _ = _populations(scores, probe)
    n_non = len(non) + zeros
    if n_non == 0:
        raise InputError("no nonexistent links left to compare against")
    non = np.sort(non)
    below = np.searchsorted(non, p, side="left").astype(np.float64)
    equal = np.searchsorted(non, p, side="right") - below
    # the implicit block scores exactly 0; listed scores are >= 0
    below += np.where(p > 0, zeros, 0)
    equal += np.where(p == 0, zeros, 0)
    wins = math.fsum(below) + 0.5 * math.fsum(equal)
    return wins / (len(p) * n_non)


def auc_sampled(scores: ScoredCandidates, probe: np.ndarray, n: int, seed: int) -> float:
    """AUC estimated from ``n`` random (probe, nonexistent) comparisons."""
    if n < 1:
        raise InputError("number of AUC comparisons must be >= 1")
    p, non, zeros, _ = _populations(scores, probe)
    n_non = len(non) + zeros
    if n_non == 0:
        raise InputError("no nonexistent links left to compare against")
    rng = np.random.default_rng(seed)
    a = p[rng.integers(0, len(p), size=n)]
    j = rng.integers(0, n_non, size=n)
    b = np.zeros(n)
    inlist = j < len(non)
    b[inlist] = non[j[inlist]]
    higher = int((a > b).sum())
    same = int((a == b).sum())
    return (higher + 0.5 * same) / n


def precision_at_l(scores: ScoredCandidates, probe: np.ndarray, L: int) -> float:
    """Fraction of probe links among the top-``L`` non-observed pairs.

    Pairs tied with the L-th score share the remaining slots; each gets the
    expected credit under a uniformly random order of the tie group.
    """
    total = scores.total_pairs
    if not 1 <= L <= total:
        raise InputError(f"L must lie in [1, {total}], got {L}")
    p, _, _, is_probe = _populations(scores, probe)
    unlisted_probe = len(p) - int(is_probe.sum())
    key = _tie_key(scores.score)
    levels, inverse = np.unique(-key, return_inverse=True)
    size = np.bincount(inverse, minlength=len(levels)).astype(np.int64)
    hits = np.bincount(inverse, weights=is_probe, minlength=len(levels))
    if scores.zero_pair_count:
        if len(levels) and levels[-1] == 0:
            size[-1] += scores.zero_pair_count
            hits[-1] += unlisted_probe
        else:
            size = np.append(size, scores.zero_pair_count)
            hits = np.append(hits, unlisted_probe)
    before = np.concatenate([[0], np.cumsum(size)[:-1]])
    full = before + size <= L
    credit = float(hits[full].sum())
    cut = np.nonzero(~full)[0]
    if len(cut):
        g = cut[0]
        credit += (L - before[g]) * hits[g] / size[g]
    return credit / L


@dataclass
class EvaluationResult:
    index_name: str
    auc: float
    precision: float
    top_l: int
    runs: int
    auc_std: float
    precision_std: float
    auc_values: list = field(default_factory=list, repr=False)
    precision_values: list = field(default_factory=list, repr=False)

    @classmethod
    def aggregate(cls, index_name: str, aucs: list, precisions: list, top_l: int) -> "EvaluationResult":
        return cls(
            index_name=index_name,
            auc=_mean(aucs),
            precision=_mean(precisions),
            top_l=top_l,
            runs=len(aucs),
            auc_std=_sample_std(aucs),
            precision_std=_sample_std(precisions),
            auc_values=list(aucs),
            precision_values=list(precisions),
        )


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _sample_std(values) -> float:
    if len(values) < 2:
        return 0.0
    mu = _mean(values)
    return math.sqrt(math.fsum((v - mu) ** 2 for v in values) / (len(values) - 1))


def parse_auc_mode(mode: Union[str, int, None]) -> Optional[int]:
    """``"exact"`` -> None, ``"sampled:<n>"`` or an int -> n."""
    if mode is None or mode == "exact":
        return None
    if isinstance(mode, int):
        n = mode
    elif isinstance(mode, str) and mode.startswith("sampled:"):
        try:
            n = int(mode.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad AUC mode {mode!r}") from None
    else:
        raise InputError(f"bad AUC mode {mode!r}; use 'exact' or 'sampled:<n>'")
    if n < 1:
        raise InputError("sampled AUC needs n >= 1")
    return n


def resolve_top_l(policy: Union[str, int], probe_count: int) -> int:
    if policy == "probe-size":
        return probe_count
    try:
        value = int(policy)
    except (TypeError, ValueError):
        raise InputError(f"bad top-L policy {policy!r}; use 'probe-size' or an integer") from None
    if value < 1:
        raise InputError("L must be positive")
    return value


def evaluate_split(
    train: Graph,
    probe: np.ndarray,
    indices: Iterable[str],
    top_l: Union[str, int] = "probe-size",
    auc_mode: Union[str, int, None] = "exact",
    seed: int = 0,
) -> dict:
    """AUC and precision of each index on one prepared split."""
    names = [normalize_index(i) for i in indices]
    n_auc = parse_auc_mode(auc_mode)
    L = resolve_top_l(top_l, len(probe))
    profile = clustering_profile(train) if "CA" in names else None
    scored = score_many(train, names, profile)
    out = {}
    for i, name in enumerate(names):
        s = scored[name]
        if n_auc is None:
            auc = auc_exact(s, probe)
        else:
            auc = auc_sampled(s, probe, n_auc, derive_seed(seed, i))
        out[name] = (auc, precision_at_l(s, probe, L), L)
    return out


def run_experiment(
    g: Graph,
    indices: Iterable[str] = INDICES,
    probe_fraction: float = 0.1,
    runs: int = 100,
    top_l: Union[str, int] = "probe-size",
    auc_mode: Union[str, int, None] = "exact",
    seed: int = 0,
    split_mode: str = "random",
) -> dict:
    """Average AUC and precision over ``runs`` random splits of ``g``.

    All indices are scored on the same split within a run. Run ``r`` uses the
    split seed ``derive_seed(seed, r)``. Results come back in CN, AA, RA, CA
    order.
    """
    if runs < 1:
        raise InputError("runs must be >= 1")
    names = [i for i in INDICES if i in {normalize_index(x) for x in indices}]
    if not names:
        raise InputError("no similarity index requested")
    aucs = {n: [] for n in names}
    precs = {n: [] for n in names}
    top = None
    for r in range(runs):
        run_seed = derive_seed(seed, r)
        try:
            split, train = split_edges(g, probe_fraction, run_seed, split_mode)
            res = evaluate_split(train, split.probe, names, top_l, auc_mode, run_seed)
        except InputError as exc:
            raise type(exc)(f"run {r}: {exc}") from exc
        for name, (auc, prec, L) in res.items():
            aucs[name].append(auc)
            precs[name].append(prec)
            top = L
    return {n: EvaluationResult.aggregate(n, aucs[n], precs[n], top) for n in names}
