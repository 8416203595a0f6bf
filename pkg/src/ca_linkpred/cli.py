"""Command line: ``ca-linkpred {stats,profile,eval,generate,bench}``."""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from ca_linkpred import __version__
from ca_linkpred.errors import ConfigError, ConsistencyError, InputError, ParseError
from ca_linkpred.evaluation import SPLIT_MODES, parse_auc_mode, resolve_top_l, run_experiment
from ca_linkpred.graph import GraphStats, clustering_profile, giant_component, graph_stats
from ca_linkpred.io import read_edge_list, write_edge_list, write_profile_csv, write_results
from ca_linkpred.psgen import PSParams, generate_ps, replica_seeds
from ca_linkpred.similarity import INDICES, score_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_RUNTIME = 4


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    output: Optional[str] = None
    fmt: str = "json"
    indices: tuple = INDICES
    probe_fraction: float = 0.10
    runs: int = 100
    seed: int = 0
    top_l: object = "probe-size"
    auc: str = "exact"
    split: str = "random"
    giant: bool = False
    ps: dict = field(default_factory=dict)
    replicas: int = 1
    repetitions: int = 5
    timestamp: bool = True

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls(subcommand=args.command)
        for name in ("input", "output", "seed", "giant"):
            if hasattr(args, name):
                setattr(cfg, name, getattr(args, name))
        if hasattr(args, "format"):
            cfg.fmt = args.format
        if hasattr(args, "index"):
            cfg.indices = _parse_indices(args.index)
        if hasattr(args, "probe_frac"):
            if not 0 < args.probe_frac < 1:
                raise ConfigError(f"--probe-frac must lie in (0, 1), got {args.probe_frac}")
            cfg.probe_fraction = args.probe_frac
        if hasattr(args, "runs"):
            if args.runs < 1:
                raise ConfigError("--runs must be >= 1")
            cfg.runs = args.runs
        if hasattr(args, "top_l"):
            try:
                resolve_top_l(args.top_l, 1)
            except InputError as exc:
                raise ConfigError(str(exc)) from None
            cfg.top_l = args.top_l if args.top_l == "probe-size" else int(args.top_l)
        if hasattr(args, "auc"):
            try:
                parse_auc_mode(args.auc)
            except InputError as exc:
                raise ConfigError(str(exc)) from None
            cfg.auc = args.auc
        if hasattr(args, "split"):
            cfg.split = args.split
        if hasattr(args, "replicas"):
            if args.replicas < 1:
                raise ConfigError("--replicas must be >= 1")
            cfg.replicas = args.replicas
        if hasattr(args, "repetitions"):
            if args.repetitions < 1:
                raise ConfigError("--repetitions must be >= 1")
            cfg.repetitions = args.repetitions
        if hasattr(args, "ps_n"):
            cfg.ps = dict(N=args.ps_n, m=args.ps_m, T=args.ps_t, gamma=args.ps_gamma, zeta=args.ps_zeta)
        if hasattr(args, "no_timestamp"):
            cfg.timestamp = not args.no_timestamp
        return cfg


def _parse_indices(value: str) -> tuple:
    if value.lower() == "all":
        return INDICES
    wanted = {v.strip().upper() for v in value.split(",") if v.strip()}
    unknown = wanted - set(INDICES)
    if unknown or not wanted:
        raise ConfigError(f"unknown index {', '.join(sorted(unknown)) or value!r}; choose from cn,aa,ra,ca,all")
    return tuple(i for i in INDICES if i in wanted)


def _load(cfg: RunConfig):
    if cfg.input is None:
        raise ConfigError("--input is required")
    g, labels = read_edge_list(cfg.input)
    if cfg.giant:
        g, _ = giant_component(g)
    return g, labels


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_stats(cfg: RunConfig) -> int:
    g, _ = _load(cfg)
    if g.node_count == 0:
        print("warning: graph has no nodes", file=sys.stderr)
    st = graph_stats(g).as_dict()
    st["mean_distance_over"] = "connected pairs"
    if cfg.fmt == "json":
        _emit(json.dumps(st, indent=2) + "\n", cfg.output)
    else:
        lines = [f"{k}: {v}" for k, v in st.items()]
        _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    g, _ = _load(cfg)
    prof = clustering_profile(g)
    write_profile_csv(prof, cfg.output if cfg.output else sys.stdout)
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    g, _ = _load(cfg)
    results = run_experiment(
        g,
        indices=cfg.indices,
        probe_fraction=cfg.probe_fraction,
        runs=cfg.runs,
        top_l=cfg.top_l,
        auc_mode=cfg.auc,
        seed=cfg.seed,
        split_mode=cfg.split,
    )
    prov = {
        "tool": f"ca-linkpred {__version__}",
        "input": str(cfg.input),
        "giant_component": cfg.giant,
        "nodes": g.node_count,
        "edges": g.edge_count,
        "seed": cfg.seed,
        "probe_fraction": cfg.probe_fraction,
        "runs": cfg.runs,
        "top_l_policy": str(cfg.top_l),
        "auc_mode": cfg.auc,
        "split_mode": cfg.split,
    }
    if cfg.timestamp:
        prov["timestamp"] = _now()
    write_results(results, cfg.output if cfg.output else sys.stdout, cfg.fmt, prov)
    return EXIT_OK


def cmd_generate(cfg: RunConfig) -> int:
    try:
        base = PSParams(seed=cfg.seed, **cfg.ps)
    except InputError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.output is None:
        raise ConfigError("--output directory is required")
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    stats = []
    for i, s in enumerate(replica_seeds(cfg.seed, cfg.replicas)):
        params = PSParams(seed=s, **cfg.ps)
        g = generate_ps(params)
        name = f"ps_N{params.N}_m{params.m}_T{params.T:g}_r{i:02d}.txt"
        write_edge_list(g, out / name)
        st = graph_stats(giant_component(g)[0])
        stats.append(st)
        records.append({"file": name, "seed": s, "full_nodes": g.node_count, "full_edges": g.edge_count,
                        "giant_component": st.as_dict()})
    manifest = {
        "params": {k: v for k, v in asdict(base).items() if k != "seed"},
        "master_seed": cfg.seed,
        "replicas": records,
        "average_giant_component": GraphStats.average(stats).as_dict(),
    }
    if cfg.timestamp:
        manifest["timestamp"] = _now()
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    avg = manifest["average_giant_component"]
    print(f"wrote {cfg.replicas} graph(s) to {out}; giant component <k>={avg['mean_degree']:.3f} "
          f"<C>={avg['mean_clustering']:.3f}")
    return EXIT_OK


def _time_index(g, index: str) -> float:
    t0 = time.perf_counter()
    if index == "CA":
        score_all(g, "CA", clustering_profile(g))
    else:
        score_all(g, index)
    return time.perf_counter() - t0


def cmd_bench(cfg: RunConfig) -> int:
    g, _ = _load(cfg)
    samples = {i: [_time_index(g, i) for _ in range(cfg.repetitions)] for i in cfg.indices}
    median = {i: statistics.median(v) for i, v in samples.items()}
    report = {
        "input": str(cfg.input),
        "nodes": g.node_count,
        "edges": g.edge_count,
        "repetitions": cfg.repetitions,
        "indices": {
            i: {"samples_ms": [1e3 * t for t in samples[i]], "median_ms": 1e3 * median[i]} for i in cfg.indices
        },
        "ratios": {
            f"{a}/{b}": (median[a] / median[b] if median[b] > 0 else None)
            for a in cfg.indices
            for b in cfg.indices
            if a != b
        },
    }
    if cfg.fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", cfg.output)
    else:
        lines = [f"{'index':<6}{'median_ms':>12}{'x CN':>8}"]
        ref = median.get("CN")
        for i in cfg.indices:
            rel = f"{median[i] / ref:8.2f}" if ref else f"{'-':>8}"
            lines.append(f"{i:<6}{1e3 * median[i]:12.3f}{rel}")
        _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


COMMANDS = {
    "stats": cmd_stats,
    "profile": cmd_profile,
    "eval": cmd_eval,
    "generate": cmd_generate,
    "bench": cmd_bench,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ca-linkpred", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(sp):
        sp.add_argument("--input", required=True, help="edge-list file")
        sp.add_argument("--giant", action="store_true", help="restrict to the largest connected component")

    s = sub.add_parser("stats", help="topology summary N, M, <k>, <d>, <C>, d_max")
    with_input(s)
    s.add_argument("--output")
    s.add_argument("--format", choices=("json", "text"), default="text")

    s = sub.add_parser("profile", help="C(k), 1/k and 1/ln k per degree as CSV")
    with_input(s)
    s.add_argument("--output")

    s = sub.add_parser("eval", help="averaged AUC and precision over random edge splits")
    with_input(s)
    s.add_argument("--output")
    s.add_argument("--format", choices=("csv", "json"), default="json")
    s.add_argument("--index", default="all", help="cn,aa,ra,ca or all")
    s.add_argument("--probe-frac", type=float, default=0.10)
    s.add_argument("--runs", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--top-l", default="probe-size", help="'probe-size' or an integer L")
    s.add_argument("--auc", default="exact", help="'exact' or 'sampled:<n>'")
    s.add_argument("--split", choices=SPLIT_MODES, default="random")
    s.add_argument("--no-timestamp", action="store_true")

    s = sub.add_parser("generate", help="PS-model networks plus a stats manifest")
    s.add_argument("--output", required=True, help="output directory")
    s.add_argument("--ps-n", type=int, default=1000)
    s.add_argument("--ps-m", type=int, default=3)
    s.add_argument("--ps-t", type=float, default=0.5)
    s.add_argument("--ps-gamma", type=float, default=2.1)
    s.add_argument("--ps-zeta", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--replicas", type=int, default=1)
    s.add_argument("--no-timestamp", action="store_true")

    s = sub.add_parser("bench", help="wall-clock time of score_all per index")
    with_input(s)
    s.add_argument("--output")
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.add_argument("--index", default="all")
    s.add_argument("--repetitions", type=int, default=5)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InputError, ConsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
