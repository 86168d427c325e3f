"""Compare the numba and pure-numpy Jacobi eigensolvers.

Two workloads: one large matrix, and a batch of small ones (the shape the
lower-bound grid search feeds the kernel).  The numba kernel is warmed up
once before timing so compilation is not counted.

    python benchmarks/bench_kernels.py --sizes 8,16,32,64 --batch 2000
"""

import argparse
import time

import numpy as np

from sqwalk import kernels


def random_hermitian(rng, batch, n):
    g = rng.normal(size=(batch, n, n)) + 1j * rng.normal(size=(batch, n, n))
    return g + np.conj(np.swapaxes(g, 1, 2))


def best_of(fn, a, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(a)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="8,16,32,64", help="matrix sizes for the single-matrix run")
    p.add_argument("--batch", type=int, default=2000, help="number of 8x8 matrices in the batched run")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    kernels.jacobi_eigh_numba(random_hermitian(rng, 1, 4))

    print(f"{'workload':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max |dw|':>12}")
    cases = [(f"1 x {n}x{n}", random_hermitian(rng, 1, int(n))) for n in args.sizes.split(",")]
    cases.append((f"{args.batch} x 8x8", random_hermitian(rng, args.batch, 8)))
    for name, a in cases:
        t_np = best_of(kernels.jacobi_eigh_numpy, a, args.repeat)
        t_nb = best_of(kernels.jacobi_eigh_numba, a, args.repeat)
        w_np = np.sort(kernels.jacobi_eigh_numpy(a)[0], axis=1)
        w_nb = np.sort(kernels.jacobi_eigh_numba(a)[0], axis=1)
        err = float(np.max(np.abs(w_np - w_nb)))
        print(f"{name:<18}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{err:>12.1e}")


if __name__ == "__main__":
    main()
