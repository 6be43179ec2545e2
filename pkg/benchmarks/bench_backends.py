"""Stage timings for the numba and numpy kernel backends on a synthetic hypergraph.

    python benchmarks/bench_backends.py --edges 200000 --sigma 40

Each stage is timed per backend (best of ``--repeat``) after a warm-up run
on a tiny input so jit compilation is not counted.  Outputs of the two
backends are compared and the script exits non-zero if they differ.
"""
import argparse
import sys
import time

import numpy as np

from edgeclust import kernels
from edgeclust.extraction import condense, excess_of_mass
from edgeclust.hierarchy import maximum_spanning_forest, single_linkage
from edgeclust.linegraph import build_line_graph
from edgeclust.synthetic import power_law_hypergraph


def run_stages(H, sigma, min_size):
    times = {}
    out = {}

    def timed(name, fn, *args):
        start = time.perf_counter()
        res = fn(*args)
        times[name] = time.perf_counter() - start
        out[name] = res
        return res

    LG = timed("line graph", build_line_graph, H, sigma)
    F = timed("spanning forest", maximum_spanning_forest, LG)
    D = timed("single linkage", single_linkage, F)
    T = timed("condense", condense, D, min_size)
    timed("excess of mass", excess_of_mass, T)
    return times, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--edges", type=int, default=200_000)
    ap.add_argument("--sigma", type=float, default=40.0)
    ap.add_argument("--min-cluster-size", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    H = power_law_hypergraph(args.edges, seed=args.seed)
    warm = power_law_hypergraph(200, seed=1)
    best = {}
    results = {}
    for name in kernels.BACKENDS:
        kernels.use(name)
        run_stages(warm, args.sigma, args.min_cluster_size)
        for _ in range(args.repeat):
            times, out = run_stages(H, args.sigma, args.min_cluster_size)
            for stage, t in times.items():
                best[name, stage] = min(best.get((name, stage), np.inf), t)
        results[name] = out

    LG = results["numba"]["line graph"]
    print(f"{H.n_edges} hyperedges, {H.n_vertices} vertices, sigma={args.sigma:g}: "
          f"{LG.n_edges} line-graph edges, {results['numba']['excess of mass'].n_clusters} clusters")
    print(f"{'stage':<18}{'numba s':>10}{'numpy s':>10}{'speedup':>10}")
    stages = list(results["numba"])
    for stage in stages + ["total"]:
        if stage == "total":
            a = sum(best["numba", s] for s in stages)
            b = sum(best["numpy", s] for s in stages)
        else:
            a, b = best["numba", stage], best["numpy", stage]
        print(f"{stage:<18}{a:>10.3f}{b:>10.3f}{b / a:>9.2f}x")

    x, y = results["numba"], results["numpy"]
    same = (np.array_equal(x["line graph"].weights, y["line graph"].weights)
            and np.array_equal(x["spanning forest"].rows, y["spanning forest"].rows)
            and np.array_equal(x["excess of mass"].labels, y["excess of mass"].labels))
    print("outputs identical" if same else "OUTPUTS DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
