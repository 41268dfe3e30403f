"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 50] [--json out.json]

Each case runs both backends on identical inputs, checks they agree, and
reports the median wall time per call.  The "dispatch" column times the
public ``bornforge.kernels`` entry point, which sends large reductions to the
numpy path.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

import numpy as np

from bornforge import kernels
from bornforge.kernels import available_backends


def _cases(rng):
    def cplx(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    for d, n in ((2, 256), (4, 256), (8, 1024), (16, 1024)):
        E, W, R = cplx(n, d), cplx(d, d), cplx(n, d)
        yield f"born_batch d={d} n={n}", "born_batch", (E, W, R, 2.0)
    for d, n in ((2, 8), (4, 4), (4, 16), (8, 32), (16, 64)):
        mats, w = cplx(n, d, d), rng.uniform(0.1, 2.0, n)
        yield f"choi_sum d={d} n={n}", "choi_sum", (mats, w)
    for d, n in ((2, 8), (4, 16), (8, 32), (16, 64), (64, 64)):
        S, E = cplx(n, d), cplx(n, d)
        ws, we = rng.uniform(0.1, 2, n), rng.uniform(0.1, 2, n)
        yield f"weighted_born_sum d={d} n={n}", "weighted_born_sum", (S, ws, E, we, 2.0)


def _time(fn, args, repeat):
    fn(*args)
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def run(repeat: int = 50, seed: int = 0) -> list:
    backends = available_backends()
    rows = []
    for label, name, args in _cases(np.random.default_rng(seed)):
        row = {"case": label}
        outs = {}
        for bname, mod in backends.items():
            fn = getattr(mod, name)
            outs[bname] = np.asarray(fn(*args))
            row[bname] = _time(fn, args, repeat)
        row["dispatch"] = _time(getattr(kernels, name), args, repeat)
        ref = outs["python"]
        row["max_diff"] = max(float(np.max(np.abs(o - ref))) / max(1.0, float(np.max(np.abs(ref))))
                              for o in outs.values())
        rows.append(row)
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="PATH")
    args = p.parse_args(argv)
    rows = run(args.repeat, args.seed)
    names = [b for b in ("python", "cython", "dispatch") if b in rows[0]]
    print(f"{'case':34s}" + "".join(f"{n:>14s}" for n in names) + f"{'speedup':>10s}{'rel diff':>11s}")
    for r in rows:
        cells = "".join(f"{r[n] * 1e6:12.1f}us" for n in names)
        speed = f"{r['python'] / r['dispatch']:9.2f}x"
        print(f"{r['case']:34s}{cells}{speed}{r['max_diff']:11.1e}")
    if "cython" not in names:
        print("compiled backend not built; only the fallback was timed", file=sys.stderr)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
