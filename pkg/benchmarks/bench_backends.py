"""Time the hot paths under numba and under the numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time.  Numbers are warm timings; the first call (JIT compile) is
reported separately.

    python benchmarks/bench_backends.py [--zeros 100000] [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from digamma_zeros import _accel, series, zeros

n, repeat = int(sys.argv[1]), int(sys.argv[2])
ks = np.arange(n)
out = {"backend": _accel.BACKEND}

def timed(fn):
    t = time.perf_counter(); fn(); first = time.perf_counter() - t
    best = min(_one(fn) for _ in range(repeat))
    return first, best

def _one(fn):
    t = time.perf_counter(); fn(); return time.perf_counter() - t

for fam in ("psi", "psig"):
    out[f"zeros_{fam}"] = timed(lambda: zeros.solve_batch(fam, ks))
out["tail_psi_quad"] = timed(lambda: series.tail_estimate("psi-quad", 10_000))
print(json.dumps(out))
"""


def run(backend, n, repeat):
    env = dict(os.environ)
    env["DIGAMMA_ZEROS_BACKEND"] = backend
    env.pop("DIGAMMA_ZEROS_CACHE", None)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeat)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeros", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    results = {b: run(b, args.zeros, args.repeat) for b in ("numba", "numpy")}
    print(f"{'task':<28}{'numba first':>12}{'numba warm':>12}{'numpy':>10}{'speedup':>9}")
    for task in ("zeros_psi", "zeros_psig", "tail_psi_quad"):
        nb_first, nb = results["numba"][task]
        _, np_ = results["numpy"][task]
        label = f"{task} ({args.zeros})" if task.startswith("zeros") else f"{task} (K=1e4, M=1e6)"
        print(f"{label:<28}{nb_first:>11.3f}s{nb:>11.3f}s{np_:>9.3f}s{np_ / nb:>8.1f}x")


if __name__ == "__main__":
    start = time.perf_counter()
    main()
    print(f"total {time.perf_counter() - start:.1f}s")
