"""Time the numba and numpy backends on the same workloads and check they agree.

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from seqcover import kernels
from seqcover.grp import GroupRep
from seqcover.projgeom import build_geometry
from seqcover.singer import labeling_from_singer


def _workloads():
    g3, g4 = build_geometry(2, 3), build_geometry(2, 4)
    rep3 = GroupRep(g3, labeling_from_singer(g3).psi)
    rep4 = GroupRep(g4, labeling_from_singer(g4).psi)
    perms3 = rep3.permutations()
    seqs = np.array(list(np.random.default_rng(0).permutation(21)[:4] for _ in range(8)))
    return {
        "enumerate PGL(3,3)": lambda: rep3.permutations(),
        "enumerate PGL(3,4)": lambda: rep4.permutations(),
        "coverage t=4, PGL(3,3) on 13 symbols": lambda: kernels.coverage_counts(perms3, 4),
        "coverage t=4, PGL(3,4) first 2 chunks": lambda: [
            kernels.coverage_counts(c, 4) for _, c in zip(range(2), rep4.chunks(1))
        ],
        "count ascending, 8 sequences, PGL(3,4)": lambda: rep4.count_ascending(seqs),
    }


def _same(a, b) -> bool:
    if isinstance(a, list):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    rows = []
    for name, fn in _workloads().items():
        timings, outputs = {}, {}
        for b in backends:
            with kernels.use_backend(b):
                outputs[b] = fn()  # warm-up, includes JIT compilation for numba
                best = min(_timed(fn) for _ in range(args.repeat))
            timings[b] = best
        agree = all(_same(outputs[backends[0]], outputs[b]) for b in backends)
        rows.append({"workload": name, **{f"{b}_s": round(t, 4) for b, t in timings.items()},
                     "agree": agree})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'workload':42s}" + "".join(f"{b + ' (s)':>12s}" for b in backends) + "  speedup  agree")
        for r in rows:
            cells = "".join(f"{r[b + '_s']:12.4f}" for b in backends)
            speed = r["numpy_s"] / r["numba_s"] if "numba_s" in r and r["numba_s"] else float("nan")
            print(f"{r['workload']:42s}{cells}  {speed:7.1f}  {r['agree']}")
    return 0 if all(r["agree"] for r in rows) else 1


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


if __name__ == "__main__":
    raise SystemExit(main())
