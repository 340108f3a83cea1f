#!/usr/bin/env python3
"""Benchmark the compiled coincidence kernel against the NumPy fallback.

The kernel sits in the innermost loop of every squeezing-parameter
optimization, so per-call overhead matters more than asymptotics.  Run after
installing the package:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from entnet import _kernels_py, coincidence, detect, kernels, source
from entnet.fock import TruncatedSpace

try:
    from entnet import _kernels as _compiled
except ImportError:
    _compiled = None


def time_call(fn, *args, repeat: int = 2000) -> float:
    fn(*args)  # warm-up
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def bench_kernel() -> None:
    print(f"{'dim':>4} {'numpy (us)':>12} {'cython (us)':>12} {'speedup':>8}")
    rng = np.random.default_rng(7)
    for dim in (3, 4, 5, 6, 8, 10):
        prob4 = rng.random((dim, dim, dim, dim))
        prob4 /= prob4.sum()
        wa = rng.random((2, dim))
        wb = rng.random((2, dim))
        t_py = time_call(_kernels_py.coincidence_tensor, prob4, wa, wb)
        if _compiled is None:
            print(f"{dim:>4} {t_py * 1e6:>12.2f} {'n/a':>12} {'n/a':>8}")
            continue
        t_cy = time_call(_compiled.coincidence_tensor, prob4, wa, wb)
        assert np.allclose(
            _kernels_py.coincidence_tensor(prob4, wa, wb),
            _compiled.coincidence_tensor(prob4, wa, wb),
            rtol=1e-13,
            atol=1e-15,
        )
        print(f"{dim:>4} {t_py * 1e6:>12.2f} {t_cy * 1e6:>12.2f} {t_py / t_cy:>8.2f}")


def bench_pipeline() -> None:
    """End-to-end cost of one squeezing evaluation (state + POVMs + squash)."""
    spec_a = detect.DetectorSpec(dark_rate_cps=100.0)
    spec_b = detect.fold_loss(detect.DetectorSpec(dark_rate_cps=1000.0), 1e-4)
    print(f"\n{'dim':>4} {'evaluation (us)':>16}  [kernel: "
          f"{'compiled' if kernels.USING_COMPILED else 'numpy'}]")
    for dim in (3, 4, 6, 8):
        space = TruncatedSpace(dim, 1)
        povm_a = detect.binary_povm(spec_a, space)
        povm_b = detect.binary_povm(spec_b, space)

        def evaluate(chi=0.2, dim=dim, povm_a=povm_a, povm_b=povm_b):
            state = source.build_spdc_state(chi, dim)
            tensor = coincidence.raw_config_probs(state, povm_a, povm_b)
            return coincidence.squash(tensor)

        source._pair_state.cache_clear()

        def evaluate_uncached(dim=dim, povm_a=povm_a, povm_b=povm_b):
            source._pair_state.cache_clear()
            state = source.build_spdc_state(0.2, dim)
            tensor = coincidence.raw_config_probs(state, povm_a, povm_b)
            return coincidence.squash(tensor)

        t_cached = time_call(evaluate, repeat=500)
        t_full = time_call(evaluate_uncached, repeat=200)
        print(f"{dim:>4} {t_cached * 1e6:>16.2f}  (with state rebuild: {t_full * 1e6:.2f})")


if __name__ == "__main__":
    bench_kernel()
    bench_pipeline()
