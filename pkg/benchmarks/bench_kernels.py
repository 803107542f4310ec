"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the individual hot kernels and one full candidate evaluation with
each backend.  Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from snnas import (CellConfig, HardwareConfig, LifParams, QuantSpec,
                   gen_synthetic_batch, kernels, score_candidate)
from snnas.kernels import fallback

try:
    from snnas.kernels import _native as native
except ImportError:
    native = None


def timeit(fn, repeats):
    fn()  # warmup
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_kernels():
    rng = np.random.default_rng(0)
    x = rng.random((16, 32, 32, 16))
    v = rng.normal(size=16 * 32 * 32 * 16)
    cur = rng.normal(size=v.shape)
    fired = np.zeros(v.shape, dtype=np.uint8)
    spk = np.empty_like(v)
    bits = (rng.random((16, 16384)) < 0.3).astype(np.uint8)

    cases = [
        ("im2col 3x3 (16,32,32,16)", 20,
         lambda impl: impl.im2col(x, 3, 1, 1)),
        ("lif_update 262k neurons", 50,
         lambda impl: impl.lif_update(v, cur, fired, spk, 1.0, 0.0, 0.75)),
        ("avgpool3x3 (16,32,32,16)", 20,
         lambda impl: impl.avgpool3x3(x)),
        ("hamming_counts (16,16384)", 20,
         lambda impl: impl.hamming_counts(bits)),
    ]
    print(f"{'kernel':<28} {'python':>10} {'native':>10} {'speedup':>8}")
    for name, reps, call in cases:
        t_py = timeit(lambda: call(fallback), reps)
        if native is None:
            print(f"{name:<28} {t_py * 1e3:9.2f}ms {'n/a':>10}")
            continue
        t_nat = timeit(lambda: call(native), reps)
        print(f"{name:<28} {t_py * 1e3:9.2f}ms {t_nat * 1e3:9.2f}ms "
              f"{t_py / t_nat:7.2f}x")


def bench_candidate():
    batch = gen_synthetic_batch(16, (3, 32, 32), seed=7)
    hw = HardwareConfig()
    spec = QuantSpec(bit_w=8, bit_d=1)
    lif = LifParams()
    cell = CellConfig.from_codes([1, 1, 2, 0, 1, 1])

    def run():
        score_candidate(cell, cell, hw, spec, batch, lif, 0, base_channels=16)

    print(f"\n{'full candidate evaluation':<28} {'python':>10} {'native':>10}")
    old = kernels.backend_name()
    try:
        kernels.set_backend("python")
        t_py = timeit(run, 3)
        line = f"{'(S=16, 32x32, C=16, T=4)':<28} {t_py:9.3f}s "
        if kernels.native_available():
            kernels.set_backend("native")
            t_nat = timeit(run, 3)
            line += f"{t_nat:9.3f}s {t_py / t_nat:7.2f}x"
        print(line)
    finally:
        kernels.set_backend(old)


if __name__ == "__main__":
    print(f"native kernels available: {kernels.native_available()}")
    bench_kernels()
    bench_candidate()
