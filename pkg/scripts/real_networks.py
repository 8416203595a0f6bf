"""Topology (Table 1 columns) and AUC/precision (Tables 2-3 layout) for user-supplied edge lists.

    python scripts/real_networks.py data/*.txt --runs 100 --top-l 100 --split connected
"""

import argparse
from pathlib import Path

from ca_linkpred.evaluation import run_experiment
from ca_linkpred.graph import graph_stats
from ca_linkpred.io import read_edge_list
from ca_linkpred.similarity import INDICES


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+", type=Path)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--top-l", default="100")
    ap.add_argument("--split", choices=("random", "connected"), default="connected")
    args = ap.parse_args()
    top_l = args.top_l if args.top_l == "probe-size" else int(args.top_l)

    print(f"{'net':<12}{'N':>7}{'M':>8}{'<k>':>8}{'<d>':>8}{'<C>':>8}   " + "".join(f"{'AUC ' + i:>9}" for i in INDICES)
          + "".join(f"{'P ' + i:>8}" for i in INDICES))
    for path in args.files:
        g, _ = read_edge_list(path)
        st = graph_stats(g)
        res = run_experiment(g, INDICES, 0.1, args.runs, top_l, "exact", args.seed, args.split)
        d = f"{st.mean_distance:8.3f}" if st.mean_distance is not None else f"{'-':>8}"
        print(f"{path.stem:<12}{st.N:>7}{st.M:>8}{st.mean_degree:8.3f}{d}{st.mean_clustering:8.4f}   "
              + "".join(f"{res[i].auc:9.3f}" for i in INDICES)
              + "".join(f"{res[i].precision:8.3f}" for i in INDICES))


if __name__ == "__main__":
    main()
