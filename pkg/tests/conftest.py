import numpy as np
import pytest

from d2dpa.fdsic import sufficient_feasibility
from d2dpa.model import DecodingOrder, PowerLimits, SystemParams, dbm_to_watts, pu_min
from d2dpa.sim import SimConfig, sample_combo_gains

NOISE_W = dbm_to_watts(-119.0)
BW_HZ = 312.5e3
P_MAX_W = dbm_to_watts(24.0)


def make_params(eta_db: float = -110.0, r_u_min_bps: float = 1.5e6) -> SystemParams:
    eta = 10.0 ** (eta_db / 10.0)
    return SystemParams(
        bandwidth_hz=BW_HZ, noise_w=NOISE_W, eta1=eta, eta2=eta, r_u_min_bps=r_u_min_bps
    )


def make_limits(scale: float = 1.0) -> PowerLimits:
    return PowerLimits(P_MAX_W * scale, P_MAX_W * scale, P_MAX_W * scale)


def sample_instances(seed: int, count: int):
    """(gains, params) pairs drawn from the campaign deployment distribution."""
    rng = np.random.default_rng(seed)
    cfg = SimConfig(k_users=1, d_pairs=1, trials=1)
    out = []
    for _ in range(count):
        params = make_params(eta_db=rng.uniform(-130.0, -80.0))
        out.append((sample_combo_gains(rng, cfg), params))
    return out


def sample_fd_sic_feasible(seed: int, count: int, limits: PowerLimits | None = None):
    """(gains, params, order) triples passing the mutual-SIC feasibility test."""
    rng = np.random.default_rng(seed)
    cfg = SimConfig(k_users=1, d_pairs=1, trials=1)
    lim = limits if limits is not None else make_limits()
    out = []
    prefer_second = False
    while len(out) < count:
        params = make_params(eta_db=rng.uniform(-130.0, -80.0))
        gains = sample_combo_gains(rng, cfg)
        pu_m = pu_min(params, gains.h_b_u)
        orders = [
            o
            for o in (DecodingOrder.M2_FIRST, DecodingOrder.M1_FIRST)
            if sufficient_feasibility(gains, params, lim, pu_m, o)
        ]
        if not orders:
            continue
        if prefer_second and len(orders) == 2:
            orders = orders[::-1]
        prefer_second = not prefer_second
        out.append((gains, params, orders[0]))
    return out


@pytest.fixture
def default_limits() -> PowerLimits:
    return make_limits()
