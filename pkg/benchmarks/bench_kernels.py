"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best-of-N wall time per backend and the speedup. The
two backends are also checked to produce identical outputs.
"""
import argparse
import timeit

import numpy as np

from stacknas import _backend
from stacknas.gbm import PRESETS, gbm_fit
from stacknas.gbm.binning import Binning


def cases(rng):
    X = rng.integers(-1, 2, size=(500, 25)).astype(np.float64)
    z = X @ rng.normal(size=25) + rng.normal(scale=0.5, size=500)
    binning = Binning.fit(X, "exact")
    codes = np.ascontiguousarray(binning.transform(X))
    rows = np.arange(500, dtype=np.int64)
    ranks = rng.integers(0, 1000, size=100_000).astype(np.int64)
    X_big = rng.integers(-1, 2, size=(20_000, 25)).astype(np.float64)
    fit_cfg = PRESETS["gbrt-mse"].with_overrides(n_iterations=100)

    def build(k):
        return k.build_tree(codes, binning.n_bins, z, rows, 4, 5)

    tree = build(_backend.get_kernels("python"))
    threshold = binning.thresholds(tree[0], tree[1], tree[2])

    def predict(k):
        out = np.zeros(len(X_big))
        k.predict_tree(X_big, tree[0], threshold, tree[3], tree[4], tree[5], 1.0, out)
        return out

    def kernel(fn):
        return lambda name: (lambda: fn(_backend.get_kernels(name)))

    return [
        ("build_tree 500x25 depth 4", kernel(build)),
        ("predict_tree 20000 rows", kernel(predict)),
        ("count_inversions n=100000", kernel(lambda k: k.count_inversions(ranks))),
        ("gbm_fit 100 trees 500x25", lambda name: (lambda: gbm_fit(X, z, fit_cfg, backend=name).predict(X))),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    try:
        _backend.get_kernels("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    print(f"{'case':32s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, make in cases(np.random.default_rng(0)):
        times, outputs = {}, {}
        for name in ("python", "cython"):
            run = make(name)
            outputs[name] = run()
            times[name] = min(timeit.repeat(run, number=1, repeat=args.repeat))
        same = _equal(outputs["python"], outputs["cython"])
        print(f"{label:32s} {times['python'] * 1e3:8.2f}ms {times['cython'] * 1e3:8.2f}ms "
              f"{times['python'] / times['cython']:7.1f}x{'' if same else '  OUTPUTS DIFFER'}")


def _equal(a, b):
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


if __name__ == "__main__":
    main()
