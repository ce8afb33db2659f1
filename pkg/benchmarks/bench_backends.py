"""Compare the compiled kernel backend against the pure numpy fallback.

Usage: python benchmarks/bench_backends.py [--repeats N]

Covers the three workloads that dominate real runs: small-batch MLP
Jacobians (one solver iteration's curve points), large perturbation
batches (the finite-difference regularizer gradient), and a full
regularized solve end to end.
"""

import argparse
import time

import numpy as np

from geodint import density, generators, kernels, solver


def timeit(fn, repeats):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def build_cases():
    rng = np.random.default_rng(3)
    gan = generators.MlpGenerator([
        generators.MlpLayer(rng.normal(size=(20, 2)) * 0.6, rng.normal(size=20) * 0.1, "tanh"),
        generators.MlpLayer(rng.normal(size=(20, 20)) * 0.4, rng.normal(size=20) * 0.1, "tanh"),
        generators.MlpLayer(rng.normal(size=(2, 20)) * 0.6, rng.normal(size=2) * 0.1, "identity"),
    ])
    lam = generators.make_lambertian()
    prior2 = density.StandardNormalPrior(2)
    prior9 = density.StandardNormalPrior(9)

    Z35_2 = rng.normal(size=(35, 2))
    Z594_9 = rng.normal(size=(594, 9))
    Zg2 = rng.normal(size=(33, 2))
    Zg9 = rng.normal(size=(33, 9))

    def solve_gan():
        cfg = solver.SolverConfig(K=35, eta=0.02, mu=0.05, max_iters=150,
                                  tol=1e-12, init_bump=0.05)
        solver.solve(gan, prior2, np.array([0.0, -1.5]), np.array([0.0, 1.5]), cfg)

    return [
        ("mlp 2-20-20-2 jacobian, batch 35", 2000, lambda: gan.jacobian_many(Z35_2)),
        ("mlp 24<-9 jacobian, batch 594", 200, lambda: lam.jacobian_many(Z594_9)),
        ("fd reg gradient, 2-d gan, 33 pts", 500,
         lambda: density.regularizer_grad_many(gan, prior2, Zg2)),
        ("fd reg gradient, 9-d, 33 pts", 100,
         lambda: density.regularizer_grad_many(lam, prior9, Zg9)),
        ("geod_reg solve, 150 iters, toy gan", 5, solve_gan),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=1,
                    help="multiplier on the per-case repeat counts")
    args = ap.parse_args()

    backends = kernels.available_backends()
    cases = build_cases()
    width = max(len(name) for name, _, _ in cases)
    print(f"backends: {backends}")
    header = f"{'case':<{width}} " + " ".join(f"{b:>12}" for b in backends)
    print(header)
    print("-" * len(header))
    for name, repeats, fn in cases:
        times = {}
        for backend in backends:
            with kernels.forced_backend(backend):
                times[backend] = timeit(fn, repeats * args.repeats)
        row = f"{name:<{width}} " + " ".join(
            f"{times[b] * 1e3:>10.3f}ms" for b in backends
        )
        if "pure" in times and "compiled" in times:
            row += f"   x{times['pure'] / times['compiled']:.2f}"
        print(row)


if __name__ == "__main__":
    main()
