"""Compare the compiled training kernels against the numpy fallback.

Times the two hot kernels in isolation and a full train() call with each
backend selected, then prints one row per backend plus the speedup. Both
backends return identical counts, so the trained models are checked for
byte equality as a side effect.

    python3 benchmarks/bench_kernels.py --points 50000 --methods 40
"""
import argparse
import statistics
import time

import numpy as np

from pamper import _kernels
from pamper._kernels import pure
from pamper.synth import PlantedModel, generate, zipf_imbalance
from pamper.trees import model_to_text, train


def _time(fn, repeats: int) -> float:
    best = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best.append(time.perf_counter() - started)
    return statistics.median(best)


def bench_kernels(args):
    rng = np.random.default_rng(args.seed)
    X = np.ascontiguousarray(
        (rng.random((args.points, args.features)) < 0.3), dtype=np.uint8
    )
    y = np.ascontiguousarray((rng.random(args.points) < 0.2), dtype=np.uint8)
    idx = np.arange(args.points, dtype=np.int64)
    feature = args.features // 2
    n_true = int(X[:, feature].sum())

    backends = {"pure": pure}
    if "compiled" in _kernels.available_backends():
        from pamper._kernels import _ct

        backends["compiled"] = _ct
    results = {}
    for name, impl in backends.items():
        counts = _time(lambda: impl.node_counts(X, y, idx), args.repeats)
        split = _time(lambda: impl.partition(X, idx, feature, n_true), args.repeats)
        results[name] = (counts, split)
    return results


def bench_train(args):
    names = [f"m{i:03d}" for i in range(args.methods)]
    planted = PlantedModel((), zipf_imbalance(names, 1.4), args.features, 0.3)
    corpus = generate(planted, args.points, seed=args.seed)

    original = _kernels.backend_name
    results = {}
    texts = {}
    try:
        for name in _kernels.available_backends():
            _kernels.select(name)
            started = time.perf_counter()
            model = train(corpus)
            results[name] = time.perf_counter() - started
            texts[name] = model_to_text(model)
    finally:
        _kernels.select(original)
    if len(texts) == 2 and texts["pure"] != texts["compiled"]:
        raise AssertionError("backends trained different models")
    return results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=50000)
    parser.add_argument("--features", type=int, default=108)
    parser.add_argument("--methods", type=int, default=40)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    kernel = bench_kernels(args)
    training = bench_train(args)

    print(f"points={args.points} features={args.features} methods={args.methods}")
    print(f"{'backend':<10} {'node_counts':>12} {'partition':>12} {'train':>10}")
    for name in ("pure", "compiled"):
        if name not in kernel:
            print(f"{name:<10} {'not built':>12}")
            continue
        counts, split = kernel[name]
        print(
            f"{name:<10} {counts * 1e3:>9.2f} ms {split * 1e3:>9.2f} ms"
            f" {training[name]:>8.2f} s"
        )
    if "compiled" in kernel:
        print(
            f"{'speedup':<10}"
            f" {kernel['pure'][0] / kernel['compiled'][0]:>10.1f}x"
            f" {kernel['pure'][1] / kernel['compiled'][1]:>11.1f}x"
            f" {training['pure'] / training['compiled']:>9.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
