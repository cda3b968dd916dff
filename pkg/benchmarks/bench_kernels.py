"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernels.py [--repeat 5]``. Prints the
median time per call and the speedup of each backend over the fallback.
"""

import argparse
import timeit

import numpy as np

from toepcom import kernels
from toepcom.analysis import _lanczos_start


def _problem(n, m, k, rng):
    a = np.zeros(n)
    a[rng.choice(n, k, replace=False)] = rng.standard_normal(k)
    r = kernels.autocorrelation(a, m - 1)
    spec = np.abs(np.fft.fft(a, n + m - 1)) ** 2
    v0 = _lanczos_start(int(np.argmax(spec)), n + m - 1, m)
    return a, r, v0


def bench(repeat):
    rng = np.random.default_rng(0)
    backends = kernels.available_backends()
    cases = [(256, 64, 8), (256, 256, 32), (1024, 512, 64), (1024, 2048, 16)]
    print(f"{'kernel':<22}{'N':>6}{'M':>6}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for n, m, k in cases:
        a, r, v0 = _problem(n, m, k, rng)
        for name, call in (("autocorrelation", lambda impl: impl.autocorrelation(a, m - 1)),
                           ("toeplitz_lambda_max", lambda impl: impl.toeplitz_lambda_max(r, v0, 1e-12, 0))):
            times = {}
            for b, impl in backends.items():
                number = 5
                t = timeit.repeat(lambda: call(impl), number=number, repeat=repeat)
                times[b] = float(np.median(t)) / number
            row = f"{name:<22}{n:>6}{m:>6}" + "".join(f"{times[b] * 1e3:>12.3f}ms" for b in backends)
            if "cython" in times:
                row += f"{times['python'] / times['cython']:>9.1f}x"
            print(row)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    bench(p.parse_args().repeat)
