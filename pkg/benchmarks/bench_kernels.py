"""Compare the compiled and numpy kernel backends on census and closure workloads.

Each backend runs in its own interpreter because the backend is chosen at
import time (``PERMREL_PURE=1`` forces numpy).

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from permrel import kernels
from permrel.catalog import catalog_group
from permrel.bgr import orbit_closure

repeat = int(sys.argv[1])

def best(fn):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

def census(key, k):
    G = catalog_group(key)
    gens = [g for g in G.gen_arrays if any(i != x for i, x in enumerate(g))]
    return lambda: kernels.kset_orbits(gens, G.degree, k, G.order(), False)

def powerset(key):
    G = catalog_group(key)
    return lambda: kernels.powerset_orbit_ids(G.gen_arrays, G.degree)

def images(key):
    G = catalog_group(key)
    masks = np.arange(1 << G.degree, dtype=np.uint64)
    g = G.gen_arrays[0]
    return lambda: kernels.mask_images(g, masks)

def closure(key):
    G = catalog_group(key)
    return lambda: orbit_closure(G)

cases = {
    "census M12@12 k=6": census("M12@12", 6),
    "census L4(2)@15 k=7": census("L4(2)@15", 7),
    "census M22@22 k=5": census("M22@22", 5),
    "powerset ids L2(8)@9^(2)": powerset("L2(8)@9^(2)"),
    "mask images degree 18": images("A6^(2)||A6_psi"),
    "orbit closure A5^(2)": closure("A5^(2)"),
    "orbit closure L2(9)@10": closure("L2(9)@10"),
}
print(json.dumps({"backend": kernels.BACKEND, "times": {k: best(f) for k, f in cases.items()}}))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["PERMREL_PURE"] = "1"
    else:
        env.pop("PERMREL_PURE", None)
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True).stdout
    return json.loads(out)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    compiled = run(False, args.repeat)
    pure = run(True, args.repeat)
    if args.json:
        print(json.dumps({"compiled": compiled, "python": pure}, indent=1))
        return
    if compiled["backend"] != "compiled":
        print("note: compiled extension not built; both columns use numpy")
    print(f"{'case':32s} {'compiled s':>11s} {'numpy s':>11s} {'speedup':>8s}")
    for case, tc in compiled["times"].items():
        tp = pure["times"][case]
        print(f"{case:32s} {tc:11.4f} {tp:11.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
