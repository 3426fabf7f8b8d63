"""Timing comparison of the numba kernels against the numpy fallbacks.

The kernel path is fixed at import time by SLICEBOUND_NO_NUMBA, so each mode
runs in a subprocess.  Usage: python benchmarks/bench_kernels.py
"""

import argparse
import json
import os
import subprocess
import sys
import time

POINT_COUNTS = (10_000, 100_000, 1_000_000)
DYKSTRA_POINTS = 2_000


def _worker(mode):
    import numpy as np

    from slicebound import Subspace, cube_decomposition, project
    from slicebound import _kernels
    from slicebound.bodies import section_polytope

    assert _kernels.USE_NUMBA == (mode == "numba"), (
        f"expected {mode} path, got USE_NUMBA={_kernels.USE_NUMBA}"
    )
    rng = np.random.default_rng(0)
    proj = project(cube_decomposition(4), Subspace.random(4, 3, rng))
    poly = section_polytope(proj)
    normals, offsets = poly.expanded_constraints()
    unit = normals / np.linalg.norm(normals, axis=1)[:, None]
    results = {"mode": mode, "count_inside": {}, "dykstra": None}

    # warm-up triggers JIT compilation on the numba path
    pts = rng.standard_normal((1000, 3))
    _kernels.count_inside(pts, poly.normals, poly.offsets, poly.symmetric)
    _kernels.dykstra_distances(pts[:50], unit, offsets, 10 ** 4, 1e-9)

    for count in POINT_COUNTS:
        pts = rng.standard_normal((count, 3)) * 1.5
        t0 = time.perf_counter()
        hits = _kernels.count_inside(pts, poly.normals, poly.offsets,
                                     poly.symmetric)
        results["count_inside"][count] = time.perf_counter() - t0
        results.setdefault("hits", {})[count] = int(hits)

    pts = rng.standard_normal((DYKSTRA_POINTS, 3)) * 2.0
    t0 = time.perf_counter()
    dists = _kernels.dykstra_distances(pts, unit, offsets, 10 ** 4, 1e-9)
    results["dykstra"] = time.perf_counter() - t0
    results["dykstra_checksum"] = float(dists.sum())
    print(json.dumps(results))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--worker", choices=["numba", "numpy"])
    args = parser.parse_args()
    if args.worker:
        _worker(args.worker)
        return

    runs = {}
    for mode, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, SLICEBOUND_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker", mode],
            env=env, capture_output=True, text=True, check=True,
        )
        runs[mode] = json.loads(out.stdout.strip().splitlines()[-1])

    for count in POINT_COUNTS:
        assert runs["numba"]["hits"][str(count)] == \
            runs["numpy"]["hits"][str(count)], "kernel paths disagree"

    print(f"{'kernel':<28}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for count in POINT_COUNTS:
        a = runs["numba"]["count_inside"][str(count)]
        b = runs["numpy"]["count_inside"][str(count)]
        print(f"{'count_inside n=%d' % count:<28}{a:>11.4f}s{b:>11.4f}s"
              f"{b / a:>9.1f}x")
    a = runs["numba"]["dykstra"]
    b = runs["numpy"]["dykstra"]
    print(f"{'dykstra n=%d' % DYKSTRA_POINTS:<28}{a:>11.4f}s{b:>11.4f}s"
          f"{b / a:>9.1f}x")
    drift = abs(runs["numba"]["dykstra_checksum"]
                - runs["numpy"]["dykstra_checksum"])
    print(f"dykstra checksum drift: {drift:.2e}")


if __name__ == "__main__":
    main()
