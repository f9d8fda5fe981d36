"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both backends are also
checked for identical results on the benchmark inputs.
"""
import argparse
import timeit

import numpy as np

from gearevo import kernels

_CODES = {"L": 1, "C": 2}


def _feasibility_inputs(rng, n):
    radii = 5.0 * np.arange(1, 7, dtype=np.float64)
    cases = []
    for _ in range(n):
        k = int(rng.integers(2, 7))
        ids = rng.integers(1, 7, k)
        flags = [0] + [_CODES["LC"[int(rng.integers(0, 2))]] for _ in range(k - 1)]
        r = radii[ids - 1]
        x = np.empty(k)
        plane = np.zeros(k, dtype=np.int64)
        axle = np.zeros(k, dtype=np.int64)
        x[0] = r[0]
        for i in range(1, k):
            if flags[i] == 2:
                x[i], plane[i], axle[i] = x[i - 1], plane[i - 1] + 1, axle[i - 1]
            else:
                x[i], plane[i], axle[i] = x[i - 1] + r[i - 1] + r[i], plane[i - 1], axle.max() + 1
        cases.append((r, x, plane, axle, np.array(flags, dtype=np.int64)))
    return cases


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pop", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        raise SystemExit("compiled backend not built; reinstall with the extension enabled")

    rng = np.random.default_rng(0)
    params = rng.uniform(-1.0, 1.0, (args.pop, 208))
    queries = rng.normal(0, 50, (args.pop, 6))
    refs = rng.normal(0, 50, (40, 6))
    geo = _feasibility_inputs(rng, args.pop)

    jobs = {
        "decode_rnn_batch": lambda m: m.decode_rnn_batch(params),
        "feasibility_breaches": lambda m: [m.feasibility_breaches(*c, 150.0, 2.5) for c in geo],
        "min_distances": lambda m: m.min_distances(queries, refs, False),
        "min_distances (self)": lambda m: m.min_distances(queries, queries, True),
    }
    py, cy = kernels.python_backend, kernels.compiled_backend
    print(f"{'kernel':<24}{'python s':>11}{'compiled s':>12}{'speedup':>10}  identical")
    for name, job in jobs.items():
        tp = min(timeit.repeat(lambda: job(py), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: job(cy), number=1, repeat=args.repeat))
        a, b = job(py), job(cy)
        same = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b)) \
            if isinstance(a, tuple) else np.array_equal(np.asarray(a, dtype=object),
                                                        np.asarray(b, dtype=object))
        print(f"{name:<24}{tp:>11.4f}{tc:>12.4f}{tp / tc:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
