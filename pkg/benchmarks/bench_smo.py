"""Time the compiled and pure-Python SMO backends on the same problems.

Only the SMO solve is timed; the Gram matrix is built once per problem.
Overlapping classes and a tight tolerance keep the inner loop busy.

    python benchmarks/bench_smo.py --sizes 100 200 400 --repeat 3
"""

import argparse
import time

import numpy as np

from bsvm import solver
from bsvm.kernels import KernelSpec, gram_matrix


def problem(n, dim, seed):
    rng = np.random.default_rng(seed)
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    X = rng.standard_normal((n, dim)) + 0.3 * y[:, None]
    beliefs = rng.uniform(0.1, 1.0, n)
    G = gram_matrix(KernelSpec.for_dimension("rbf", dim), X, beliefs)
    return G * np.outer(y, y), y


def best_time(Q, y, backend, args):
    smo = solver._BACKENDS[backend]
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        alpha, _, n_iter, _ = smo(Q, y, args.c, args.tolerance, 1000 * len(y))
        times.append(time.perf_counter() - t0)
    return min(times), alpha, n_iter


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800])
    parser.add_argument("--dim", type=int, default=117)
    parser.add_argument("--c", type=float, default=10.0)
    parser.add_argument("--tolerance", type=float, default=1e-6)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = solver.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'n':>6} " + " ".join(f"{b + ' s':>12}" for b in backends) + f" {'speedup':>8} {'iters':>7}")
    for n in args.sizes:
        Q, y = problem(n, args.dim, args.seed)
        results = {b: best_time(Q, y, b, args) for b in backends}
        alphas = [r[1] for r in results.values()]
        assert all(np.array_equal(alphas[0], a) for a in alphas), "backends disagree"
        speed = ""
        if "cython" in results and "python" in results:
            speed = f"{results['python'][0] / results['cython'][0]:.1f}x"
        n_iter = next(iter(results.values()))[2]
        print(f"{n:>6} " + " ".join(f"{results[b][0]:>12.4f}" for b in backends) + f" {speed:>8} {n_iter:>7}")


if __name__ == "__main__":
    main()
