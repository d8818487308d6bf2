"""Numeric boundary search for the no-SIC full-duplex power allocation.

The D2D rate falls as the CU power rises, so the CU rate floor binds with
equality and the problem collapses to two dimensions.  The objective then
improves along rays from the origin, pinning the optimum to the box edges
P1 = P1max or P2 = P2max, or to the line where the required CU power hits its
cap.  Each 1D piece is maximized by a coarse scan followed by golden-section
refinement around every local peak.

This module is the pure-Python reference implementation; a compiled twin of
``fd_nosic_search`` with the identical algorithm is preferred at import time
when available (see d2dpa._fast).
"""

from __future__ import annotations

import math

INFEASIBLE = (0.0, 0.0, 0.0, -1.0)

_N_COARSE = 96
_N_GOLDEN = 48
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def fd_nosic_search(
    h_d: float,
    h_b_d1: float,
    h_b_d2: float,
    h_d1_u: float,
    h_d2_u: float,
    h_b_u: float,
    eta1: float,
    eta2: float,
    noise_w: float,
    q: float,
    bandwidth_hz: float,
    p1_max: float,
    p2_max: float,
    pu_max: float,
) -> tuple[float, float, float, float]:
    """Best (p1, p2, pu, d2d_rate) without SIC; rate is -1 when infeasible.

    ``q`` is the CU SINR floor 2^(Rmin/B) - 1.  The CU power is always the
    exact value meeting the rate floor at the chosen device powers.
    """
    s = noise_w

    def pu_req(p1: float, p2: float) -> float:
        return q * (p1 * h_b_d1 + p2 * h_b_d2 + s) / h_b_u

    def rate(p1: float, p2: float, pu: float) -> float:
        den1 = pu * h_d1_u + eta1 * p1 + s
        den2 = pu * h_d2_u + eta2 * p2 + s
        return bandwidth_hz * math.log2(
            (1.0 + p1 * h_d / den2) * (1.0 + p2 * h_d / den1)
        )

    best = INFEASIBLE

    def consider(p1: float, p2: float, pu: float) -> None:
        nonlocal best
        r = rate(p1, p2, pu)
        if r > best[3]:
            best = (p1, p2, pu, r)

    def scan(lo: float, hi: float, point_of, n_coarse: int = _N_COARSE) -> None:
        """Maximize the rate over t in [lo, hi]; point_of maps t to (p1, p2, pu)."""
        if hi < lo:
            return
        if hi == lo:
            consider(*point_of(lo))
            return

        def f(t: float) -> float:
            return rate(*point_of(t))

        ts = [lo + (hi - lo) * i / n_coarse for i in range(n_coarse + 1)]
        fs = [f(t) for t in ts]
        for i in range(n_coarse + 1):
            left_ok = i == 0 or fs[i] >= fs[i - 1]
            right_ok = i == n_coarse or fs[i] >= fs[i + 1]
            if not (left_ok and right_ok):
                continue
            a = ts[max(i - 1, 0)]
            b = ts[min(i + 1, n_coarse)]
            # golden-section refinement, tracking the best evaluated point
            c = b - (b - a) * _INVPHI
            d = a + (b - a) * _INVPHI
            fc, fd = f(c), f(d)
            for _ in range(_N_GOLDEN):
                if fc > fd:
                    b, d, fd = d, c, fc
                    c = b - (b - a) * _INVPHI
                    fc = f(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + (b - a) * _INVPHI
                    fd = f(d)
            t_best = c if fc > fd else d
            if fs[i] > max(fc, fd):
                t_best = ts[i]
            consider(*point_of(t_best))

    if q == 0.0:
        scan(0.0, p2_max, lambda t: (p1_max, t, 0.0))
        scan(0.0, p1_max, lambda t: (t, p2_max, 0.0))
        return best

    ccut = pu_max * h_b_u / q - s  # p1*h_b_d1 + p2*h_b_d2 <= ccut keeps pu <= pu_max
    if ccut < 0.0:
        return INFEASIBLE

    if p1_max * h_b_d1 <= ccut:
        hi = min(p2_max, (ccut - p1_max * h_b_d1) / h_b_d2)
        scan(0.0, hi, lambda t: (p1_max, t, pu_req(p1_max, t)))
    if p2_max * h_b_d2 <= ccut:
        hi = min(p1_max, (ccut - p2_max * h_b_d2) / h_b_d1)
        scan(0.0, hi, lambda t: (t, p2_max, pu_req(t, p2_max)))
    lo = max(0.0, (ccut - p2_max * h_b_d2) / h_b_d1)
    hi = min(p1_max, ccut / h_b_d1)
    scan(lo, hi, lambda t: (t, max((ccut - t * h_b_d1) / h_b_d2, 0.0), pu_max))
    return best
