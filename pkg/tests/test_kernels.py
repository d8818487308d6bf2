import pytest

from conftest import make_params, sample_instances
from d2dpa import _fast, fdnosic
from d2dpa.model import rate_floor_snr


def kernel_args(gains, params, limits):
    return (
        gains.h_d, gains.h_b_d1, gains.h_b_d2, gains.h_d1_u, gains.h_d2_u, gains.h_b_u,
        params.eta1, params.eta2, params.noise_w, rate_floor_snr(params),
        params.bandwidth_hz, limits.p1_max_w, limits.p2_max_w, limits.pu_max_w,
    )


def test_backend_is_reported():
    assert _fast.BACKEND in ("python", "compiled")


def test_pure_kernel_handles_infeasible(default_limits):
    params = make_params()
    res = fdnosic.fd_nosic_search(
        1e-6, 1e-8, 1e-8, 1e-9, 1e-9, 1e-15,
        params.eta1, params.eta2, params.noise_w, rate_floor_snr(params),
        params.bandwidth_hz, 0.25, 0.25, 1e-12,
    )
    assert res[3] == -1.0


@pytest.mark.skipif(_fast.BACKEND != "compiled", reason="extension not built")
def test_compiled_twin_matches_pure(default_limits):
    for gains, params in sample_instances(seed=401, count=200):
        args = kernel_args(gains, params, default_limits)
        pure = fdnosic.fd_nosic_search(*args)
        fast = _fast.fd_nosic_search(*args)
        if pure[3] < 0.0 or fast[3] < 0.0:
            assert pure[3] == fast[3] == -1.0
            continue
        assert fast[3] == pytest.approx(pure[3], rel=1e-12)
        assert fast[0] == pytest.approx(pure[0], rel=1e-9, abs=1e-15)
        assert fast[1] == pytest.approx(pure[1], rel=1e-9, abs=1e-15)
        assert fast[2] == pytest.approx(pure[2], rel=1e-9, abs=1e-15)


def test_pure_env_switch(monkeypatch):
    # the selection module honours D2DPA_PURE at import time
    import importlib
    import os

    monkeypatch.setenv("D2DPA_PURE", "1")
    import d2dpa._fast as fast_mod

    reloaded = importlib.reload(fast_mod)
    try:
        assert reloaded.BACKEND == "python"
        assert reloaded.fd_nosic_search is fdnosic.fd_nosic_search
    finally:
        monkeypatch.delenv("D2DPA_PURE")
        importlib.reload(fast_mod)
