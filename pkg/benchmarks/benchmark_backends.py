#!/usr/bin/env python3
"""Compare the numba-compiled kernels against the pure-Python fallback.

Runs each workload in two fresh subprocesses (MLKIT_NUMBA=1 / 0) so each
backend gets a clean import, then prints a timing table and verifies the
two backends produced identical results.

    python benchmarks/benchmark_backends.py [--scale small|full]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import mlkit
from mlkit import SeededRng

scale = sys.argv[1]
sizes = {
    "small": dict(kmeans_n=2000, knn_n=4000, knn_m=400, kde_n=3000, kde_m=200),
    "full": dict(kmeans_n=20000, knn_n=40000, knn_m=2000, kde_n=20000, kde_m=1000),
}[scale]

rng = np.random.default_rng(7)
results = {"backend": mlkit.backend(), "timings": {}, "checks": {}}

def _t(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0

def bench(name, fn, repeat=3):
    fn()  # warm-up (includes JIT compilation on the numba path)
    results["timings"][name] = min(_t(fn) for _ in range(repeat))

# k-means: separated blobs, both variants
n, k = sizes["kmeans_n"], 10
centers = rng.uniform(-10, 10, size=(k, 2))
X = centers[rng.integers(0, k, size=n)] + 0.05 * rng.normal(size=(n, 2))
init = X[rng.integers(0, n, size=k)].copy()
bench("kmeans_lloyd", lambda: mlkit.kmeans_lloyd(X, init))
bench("kmeans_hamerly", lambda: mlkit.kmeans_hamerly(X, init))
res = mlkit.kmeans_hamerly(X, init)
results["checks"]["kmeans_inertia"] = res.inertia
results["checks"]["kmeans_dist_comps"] = res.distance_computations

# kd-tree neighbor queries
R = rng.normal(size=(sizes["knn_n"], 3))
Q = rng.normal(size=(sizes["knn_m"], 3))
tree = mlkit.kdtree_build(R, 20)
bench("knn_k5", lambda: mlkit.knn_search(tree, Q, 5))
bench("kfn_k5", lambda: mlkit.kfn_search(tree, Q, 5))
idx, dist = mlkit.knn_search(tree, Q, 5)
results["checks"]["knn_dist_sum"] = float(dist.sum())

# kernel density estimation
R2 = rng.normal(size=(sizes["kde_n"], 2))
Q2 = rng.normal(size=(sizes["kde_m"], 2))
tree2 = mlkit.kdtree_build(R2, 20)
kern = mlkit.GaussianKernel(0.5, 2)
bench("kde_rel_tol_0.01", lambda: mlkit.kde(tree2, Q2, kern, 0.01))
dens = mlkit.kde(tree2, Q2, kern, 0.01)
results["checks"]["kde_density_sum"] = float(dens.sum())

print(json.dumps(results))
"""


def run_backend(flag, scale):
    env = dict(os.environ, MLKIT_NUMBA=flag)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, scale],
        capture_output=True, text=True, env=env,
    )
    if proc.returncode != 0:
        raise SystemExit(f"worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout.splitlines()[-1])


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--scale", choices=["small", "full"],
                        default="small")
    args = parser.parse_args()

    print(f"workload scale: {args.scale}")
    numba = run_backend("1", args.scale)
    pure = run_backend("0", args.scale)
    print(f"backends: {numba['backend']} vs {pure['backend']}\n")

    header = f"{'workload':<20}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name in numba["timings"]:
        t_nb = numba["timings"][name]
        t_py = pure["timings"][name]
        print(f"{name:<20}{t_nb:>12.4f}{t_py:>12.4f}{t_py / t_nb:>9.1f}x")

    mismatches = [key for key in numba["checks"]
                  if numba["checks"][key] != pure["checks"][key]]
    if mismatches:
        print(f"\nRESULT MISMATCH between backends: {mismatches}")
        return 1
    print("\nresult check: backends agree exactly on every workload")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
