"""Time the compiled and numpy CART kernels on the same random problems.

Usage: python benchmarks/bench_cart.py [--n 4000] [--d 18] [--repeat 3]
"""
import argparse
import time

import numpy as np

from sabeam.learn import available_backends, get_kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4000)
    parser.add_argument("--d", type=int, default=18)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.n, args.d))
    y_reg = np.sin(X[:, 0]) + X[:, 1] ** 2 + rng.normal(0, 0.1, args.n)
    y_clf = rng.integers(0, 64, args.n).astype(np.float64)
    mtry = max(1, args.d // 3)
    cases = {"regression": (y_reg, 0), "classification (64 classes)": (y_clf, 64)}

    print(f"n={args.n} d={args.d} mtry={mtry}, best of {args.repeat}")
    for label, (y, n_classes) in cases.items():
        results = {}
        for name in available_backends():
            k = get_kernels(name)
            build, tree = best_of(lambda: k.build_tree(X, y - y.mean() if not n_classes else y,
                                                       -1, 2, mtry, 7, n_classes), args.repeat)
            pred, _ = best_of(lambda: k.predict_tree(X, *tree), args.repeat)
            results[name] = (build, pred, tree)
            print(f"  {label:28s} {name:7s} build {build * 1e3:9.1f} ms   "
                  f"predict {pred * 1e3:7.2f} ms   nodes {len(tree[0])}")
        if len(results) == 2:
            a, b = results["cython"][2], results["python"][2]
            same = all(np.array_equal(u, v) for u, v in zip(a, b))
            speedup = results["python"][0] / results["cython"][0]
            print(f"  {'':28s} build speedup {speedup:.1f}x, identical trees: {same}")


if __name__ == "__main__":
    main()
