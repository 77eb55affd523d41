"""Compare the numba kernels with the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from ``POLYCOV_NUMBA``.  The numba timings exclude compilation
(one warm-up call first; compiled kernels are also cached on disk).

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def measure(repeat: int) -> dict:
    import numpy as np

    from polycov import _kernels
    from polycov.constructors import build
    from polycov.covers import facet_action
    from polycov.monodromy import monodromy
    from polycov.reconstruct import cayley_table, polytope_from_group
    from polycov.sggi import Sggi, intersection_condition

    G = monodromy(build("pyramid(toroid44(3))"))
    K = G.prefix(3)
    grp = K.group
    rows = grp.element_array()[:50_000]
    tab = grp._tables
    rng = np.random.default_rng(0)
    left = rng.permuted(np.tile(np.arange(360), (50_000, 1)), axis=1)
    cube = monodromy(build("hypercube(4)"))
    table = cayley_table(K)

    def fresh(S):
        return Sggi(S.gens, S.degree)

    cases = {
        "sift_rank (50k rows, 360 pts)": lambda: _kernels.sift_rank(rows, *tab),
        "compose_rows (50k x 360)": lambda: _kernels.compose_rows(left, rows),
        "orbit_union (110592 x 3)": lambda: _kernels.orbit_union(table, [0, 1]),
        "Example intersection sweep": lambda: intersection_condition(fresh(G)),
        "Example facet action": lambda: facet_action(fresh(K)),
        "reconstruct Mon(hypercube(4))": lambda: polytope_from_group(fresh(cube)),
    }
    return {"numba": _kernels.USE_NUMBA, "timings": {k: _best(f, repeat) for k, f in cases.items()}}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        print(json.dumps(measure(args.repeat)))
        return 0
    results = {}
    for name, flag in (("numba", "1"), ("numpy", "0")):
        env = dict(os.environ, POLYCOV_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                             env=env, capture_output=True, text=True, check=True)
        results[name] = json.loads(out.stdout)
    if args.json:
        print(json.dumps(results, indent=2))
        return 0
    if not results["numba"]["numba"]:
        print("note: numba unavailable, both columns use numpy", file=sys.stderr)
    a, b = results["numba"]["timings"], results["numpy"]["timings"]
    width = max(map(len, a))
    print(f"{'case':<{width}}  {'numba':>9}  {'numpy':>9}  speedup")
    for key in a:
        print(f"{key:<{width}}  {a[key]:>8.3f}s  {b[key]:>8.3f}s  {b[key] / a[key]:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
