"""Edge-list text files, degree-clustering profile CSV, and result records.

Edge lists hold two node labels per line, separated by whitespace or a
chosen delimiter. Lines starting with ``#`` or ``%`` and blank lines are
skipped. Labels become dense ids in order of first appearance.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import IO, Optional, Union

from ca_linkpred.errors import ParseError
from ca_linkpred.graph import DegreeClusteringProfile, Graph, build_graph
from ca_linkpred.similarity import INDICES

PathOrFile = Union[str, os.PathLike, IO]


class EdgeListWarning(UserWarning):
    pass


@dataclass
class EdgeListDocument:
    edges: list
    label_map: dict
    comment_prefixes: tuple = ("#", "%")
    delimiter: Optional[str] = None
    self_loops: int = 0
    duplicates: int = 0
    node_count: int = field(default=0)

    def to_graph(self) -> Graph:
        ids = [(self.label_map[a], self.label_map[b]) for a, b in self.edges]
        return build_graph(ids, self.node_count)


@contextmanager
def _open(source: PathOrFile, mode: str):
    if isinstance(source, (str, os.PathLike)):
        with open(source, mode, encoding="utf-8", newline="" if "w" in mode else None) as fh:
            yield fh
    else:
        yield source


def parse_edge_list(
    text: str,
    delimiter: Optional[str] = None,
    comment_prefixes: tuple = ("#", "%"),
    integer_ids: bool = False,
    node_count: Optional[int] = None,
) -> EdgeListDocument:
    """Tokenise edge-list text.

    With ``integer_ids`` the labels are taken as dense integer ids
    (node_count defaults to max id + 1) instead of first-appearance order.
    """
    edges = []
    label_map = {}
    seen = set()
    loops = dups = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefixes):
            continue
        tokens = [t.strip() for t in line.split(delimiter)] if delimiter else line.split()
        if len(tokens) != 2 or not all(tokens):
            raise ParseError(f"expected 2 node labels, found {len(tokens)}: {raw!r}", lineno)
        a, b = tokens
        if integer_ids:
            for tok in tokens:
                if not tok.isdigit():
                    raise ParseError(f"label {tok!r} is not a non-negative integer id", lineno)
        for tok in tokens:
            if tok not in label_map:
                label_map[tok] = int(tok) if integer_ids else len(label_map)
        edges.append((a, b))
        if a == b:
            loops += 1
            continue
        key = frozenset((label_map[a], label_map[b]))
        if key in seen:
            dups += 1
        seen.add(key)
    if integer_ids:
        top = max(label_map.values(), default=-1) + 1
        if node_count is not None and node_count < top:
            raise ParseError(f"id {top - 1} exceeds node_count {node_count}")
        count = top if node_count is None else node_count
    else:
        count = len(label_map)
    return EdgeListDocument(edges, label_map, comment_prefixes, delimiter, loops, dups, count)


def read_edge_list(source: PathOrFile, **options) -> tuple[Graph, dict]:
    """Read an edge list into a graph and its label -> id map.

    Accepts a path, a text stream, or a binary stream (decoded as UTF-8).
    Self-loops and duplicate edges are dropped with an ``EdgeListWarning``.
    """
    with _open(source, "r") as fh:
        text = fh.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    doc = parse_edge_list(text, **options)
    if not doc.edges:
        warnings.warn("edge list is empty", EdgeListWarning, stacklevel=2)
    if doc.self_loops or doc.duplicates:
        warnings.warn(
            f"dropped {doc.self_loops} self-loop(s) and {doc.duplicates} duplicate edge(s)",
            EdgeListWarning,
            stacklevel=2,
        )
    return doc.to_graph(), doc.label_map


def write_edge_list(g: Graph, sink: PathOrFile, label_map: Optional[dict] = None) -> None:
    names = None
    if label_map is not None:
        names = {v: k for k, v in label_map.items()}
    with _open(sink, "w") as fh:
        for x, y in g.edges.tolist():
            if names is None:
                fh.write(f"{x} {y}\n")
            else:
                fh.write(f"{names[x]} {names[y]}\n")


def _num(v: float) -> str:
    return repr(float(v))


def write_profile_csv(profile: DegreeClusteringProfile, sink: PathOrFile) -> None:
    """One row per degree: ``k, C(k), 1/k, 1/ln k`` (last cell blank for k = 1)."""
    with _open(sink, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "C_k", "inv_k", "inv_log_k"])
        for k in sorted(profile.entries):
            inv_log = "" if k == 1 else _num(1.0 / math.log(k))
            w.writerow([k, _num(profile.entries[k]), _num(1.0 / k), inv_log])


RESULT_FIELDS = ("index", "auc", "auc_std", "precision", "precision_std", "top_l", "runs")


def result_records(results: dict) -> list:
    ordered = [results[i] for i in INDICES if i in results]
    return [
        {
            "index": r.index_name,
            "auc": r.auc,
            "auc_std": r.auc_std,
            "precision": r.precision,
            "precision_std": r.precision_std,
            "top_l": r.top_l,
            "runs": r.runs,
        }
        for r in ordered
    ]


def write_results(results: dict, sink: PathOrFile, fmt: str = "json", provenance: Optional[dict] = None) -> None:
    """Write per-index results in CN, AA, RA, CA order with their provenance.

    CSV repeats the provenance fields as ``prov_*`` columns on every row.
    """
    records = result_records(results)
    provenance = dict(provenance or {})
    if fmt == "json":
        with _open(sink, "w") as fh:
            json.dump({"provenance": provenance, "results": records}, fh, indent=2)
            fh.write("\n")
    elif fmt == "csv":
        prov_cols = [f"prov_{k}" for k in provenance]
        with _open(sink, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(RESULT_FIELDS) + prov_cols)
            for rec in records:
                row = [rec["index"]] + [_num(rec[k]) for k in ("auc", "auc_std", "precision", "precision_std")]
                row += [rec["top_l"], rec["runs"]] + [_cell(v) for v in provenance.values()]
                w.writerow(row)
    else:
        raise ValueError(f"unknown result format {fmt!r}")


def _cell(v) -> str:
    if isinstance(v, float):
        return _num(v)
    if v is None:
        return ""
    return str(v)


def read_results(source: PathOrFile) -> tuple[dict, list]:
    """Parse a JSON results file back into (provenance, records)."""
    with _open(source, "r") as fh:
        doc = json.load(fh)
    return doc["provenance"], doc["results"]
