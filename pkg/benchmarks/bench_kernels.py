"""Compare the compiled and numpy kernels on continued-fraction workloads.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each row
reports the best wall time per backend over ``--repeat`` runs and the
normwise relative difference between the backends' outputs.
"""
import argparse
import timeit

import numpy as np

from specquant.kernels import available_backends, jacobi_cf, schur_cf, szego_values, three_term_values


def workloads(rng):
    for depth in (64, 512, 4096):
        alphas = 0.9 * rng.uniform(size=depth) * np.exp(2j * np.pi * rng.uniform(size=depth))
        z = 0.999 * np.exp(2j * np.pi * rng.uniform(size=256))
        yield f"schur_cf depth={depth}", lambda b, a=alphas, z=z: schur_cf(a, z, backend=b)
        diag = rng.uniform(-0.3, 0.3, depth)
        offsq = rng.uniform(0.05, 0.25, depth)
        x = rng.uniform(-1, 1, 256) + 1e-3j
        yield f"jacobi_cf depth={depth}", lambda b, d=diag, o=offsq, x=x: jacobi_cf(d, o, x, backend=b)
        # polynomial values grow geometrically with depth; keep them finite
        small = 0.3 * alphas / 0.9
        u = np.exp(2j * np.pi * rng.uniform(size=256))
        yield f"szego_values n={depth}", lambda b, a=small, z=u: szego_values(a, z, backend=b)[0]
        p = rng.uniform(0.3, 0.35, depth)
        q = rng.uniform(0.3, 0.35, depth)
        xr = rng.uniform(-0.2, 0.9, 256)
        yield (f"three_term n={depth}",
               lambda b, p=p, q=q, x=xr: three_term_values(p, q, 1 - p - q, x, backend=b))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = available_backends()
    rng = np.random.default_rng(0)
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}{'max rel diff':>14s}")
    for name, fn in workloads(rng):
        times, outs = [], []
        for b in backends:
            outs.append(np.asarray(fn(b)))
            times.append(min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)))
        diff = 0.0
        if len(outs) > 1:
            diff = float(np.max(np.abs(outs[0] - outs[-1])) / np.max(np.abs(outs[-1])))
        speed = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{name:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"{speed:9.1f}x{diff:14.1e}")


if __name__ == "__main__":
    main()
