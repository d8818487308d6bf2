"""Benchmark the no-SIC FD search kernel: pure Python vs compiled extension.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from d2dpa import _fast, fdnosic
from d2dpa.model import rate_floor_snr
from d2dpa.sim import SimConfig, sample_combo_gains


def collect_instances(n: int, seed: int = 2024):
    rng = np.random.default_rng(seed)
    cfg = SimConfig(k_users=1, d_pairs=1, trials=1)
    limits = cfg.power_limits()
    out = []
    for _ in range(n):
        params = SimConfig(
            k_users=1, d_pairs=1, trials=1, eta_db=rng.uniform(-130.0, -80.0)
        ).system_params()
        g = sample_combo_gains(rng, cfg)
        out.append(
            (
                g.h_d, g.h_b_d1, g.h_b_d2, g.h_d1_u, g.h_d2_u, g.h_b_u,
                params.eta1, params.eta2, params.noise_w, rate_floor_snr(params),
                params.bandwidth_hz, limits.p1_max_w, limits.p2_max_w, limits.pu_max_w,
            )
        )
    return out


def bench(fn, instances, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in instances:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    n = 300
    instances = collect_instances(n)
    t_py = bench(fdnosic.fd_nosic_search, instances)
    print(f"pure python : {t_py / n * 1e3:8.3f} ms/solve   ({n} solves in {t_py:.3f} s)")
    if _fast.BACKEND != "compiled":
        print("compiled    : not built (python setup.py build_ext --inplace)")
        return
    t_c = bench(_fast.fd_nosic_search, instances)
    print(f"compiled    : {t_c / n * 1e3:8.3f} ms/solve   ({n} solves in {t_c:.3f} s)")
    print(f"speedup     : {t_py / t_c:8.1f}x")
    mism = sum(
        1
        for args in instances
        if fdnosic.fd_nosic_search(*args) != _fast.fd_nosic_search(*args)
    )
    print(f"result mismatches: {mism}/{n}")


if __name__ == "__main__":
    main()
