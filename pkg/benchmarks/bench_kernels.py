"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from mcbound import kernels, qstate
from mcbound.pure import swap_family_masks


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    for n in (4, 16, 48):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (a + a.conj().T)
        yield f"jacobi_eigh n={n}", 1, lambda m, h=h: m.jacobi_eigh(h)
    stack = np.stack([qstate.random_density((2, 2), s).matrix for s in range(200)])
    yield "wootters_batch m=200", 200, lambda m: m.wootters_batch(stack)
    for dims in [(2,) * 5, (3, 3, 3), (2, 2, 2, 3)]:
        psi = qstate.random_pure(dims, 1).amplitudes
        masks = swap_family_masks(len(dims))
        label = "x".join(map(str, dims))
        yield f"swap_family_sums {label}", 1, lambda m, psi=psi, dims=dims, masks=masks: m.swap_family_sums(psi, dims, masks)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    found = kernels.backends()
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(sorted(found))}")
    names = [n for n in ("compiled", "python") if n in found]
    print(f"{'case':<28}" + "".join(f"{n:>14}" for n in names) + ("      speedup" if len(names) == 2 else ""))
    for label, per, fn in cases():
        t = {n: best_of(lambda: fn(found[n]), args.repeat) / per for n in names}
        row = f"{label:<28}" + "".join(f"{t[n] * 1e6:>11.1f} us" for n in names)
        if len(names) == 2:
            row += f"{t['python'] / t['compiled']:>12.1f}x"
        print(row)


if __name__ == "__main__":
    main()
