"""Closed-form solver for the full-duplex mutual-SIC power allocation.

The admissible region is the set of (P1, P2, Pu) points lying above two
"floor" planes (the CU signal must dominate what each device has to remove),
below two "ceiling" planes (each device message must dominate what the BS
decodes it against), and inside the transmit-power box.  All four planes pass
through the origin, and the D2D sum rate depends on (P1, P2) only and grows
along rays from the origin, so the optimum sits on one of the three outer box
sides.  On each side the admissible set is a line segment whose endpoints are
plane/edge intersections; the best point of a segment is an endpoint, or the
root of a known quadratic on the CU-cap side.  The whole solve is a constant
number of scalar operations.

Two decoding orders exist at the BS (strip the second device's message first,
or the first's); they share the floor planes and differ in the ceilings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import (
    ChannelGains,
    DecodingOrder,
    PaSolution,
    PowerLimits,
    PowerTriplet,
    Scenario,
    ScenarioKind,
    SystemParams,
    fd_sic_d2d_rate,
    pu_min,
    shannon_rate,
)

REL_TOL = 1e-9


class GeometryError(RuntimeError):
    """Computed intersections contradict the feasibility pre-tests."""


@dataclass(frozen=True)
class Plane:
    """Height field pu = ax*p1 + ay*p2 (every constraint plane contains the origin)."""

    ax: float
    ay: float

    def height(self, p1: float, p2: float) -> float:
        return self.ax * p1 + self.ay * p2


@dataclass(frozen=True)
class SicPlanes:
    """Ceiling planes (1, 3) and floor planes (2, 4) of one decoding order.

    Pu must stay strictly below both ceilings and strictly above both floors.
    """

    ceil1: Plane
    floor2: Plane
    ceil3: Plane
    floor4: Plane
    order: DecodingOrder


def planes_for_order(
    gains: ChannelGains, params: SystemParams, order: DecodingOrder
) -> SicPlanes:
    g = gains
    floor2 = Plane(params.eta1 / g.h_d1_u, g.h_d / g.h_d1_u)
    floor4 = Plane(g.h_d / g.h_d2_u, params.eta2 / g.h_d2_u)
    if order is DecodingOrder.M2_FIRST:
        ceil1 = Plane(-g.h_b_d1 / g.h_b_u, g.h_b_d2 / g.h_b_u)
        ceil3 = Plane(g.h_b_d1 / g.h_b_u, 0.0)
    else:
        ceil1 = Plane(g.h_b_d1 / g.h_b_u, -g.h_b_d2 / g.h_b_u)
        ceil3 = Plane(0.0, g.h_b_d2 / g.h_b_u)
    return SicPlanes(ceil1=ceil1, floor2=floor2, ceil3=ceil3, floor4=floor4, order=order)


def pmc_margins(
    planes: SicPlanes, p1: float, p2: float, pu: float
) -> tuple[float, float, float, float]:
    """Signed satisfaction margins of the four power-ordering conditions.

    All four are positive exactly when the point lies strictly between the
    floors and the ceilings.
    """
    return (
        planes.ceil1.height(p1, p2) - pu,
        pu - planes.floor2.height(p1, p2),
        planes.ceil3.height(p1, p2) - pu,
        pu - planes.floor4.height(p1, p2),
    )


def sic_rate_margins(
    gains: ChannelGains,
    params: SystemParams,
    order: DecodingOrder,
    p1: float,
    p2: float,
    pu: float,
) -> tuple[float, float, float, float]:
    """Signed margins of the noise-free SIC achievability conditions.

    These are implied by the power-ordering conditions but are evaluated
    independently wherever a solution is validated.
    """
    g, e1, e2 = gains, params.eta1, params.eta2
    if order is DecodingOrder.M2_FIRST:
        return (
            p1 * (g.h_b_d2 * e1 - g.h_d * g.h_b_d1)
            + pu * (g.h_d1_u * g.h_b_d2 - g.h_d * g.h_b_u),
            p1 * (g.h_d1_u * g.h_b_d1 - g.h_b_u * e1)
            + p2 * (g.h_d1_u * g.h_b_d2 - g.h_b_u * g.h_d),
            p2 * g.h_b_d1 * e2 - pu * (g.h_b_u * g.h_d - g.h_d2_u * g.h_b_d1),
            p1 * (g.h_b_d1 * g.h_d2_u - g.h_d * g.h_b_u) - p2 * e2 * g.h_b_u,
        )
    return (
        p2 * (g.h_b_d1 * e2 - g.h_d * g.h_b_d2)
        + pu * (g.h_d2_u * g.h_b_d1 - g.h_d * g.h_b_u),
        p2 * (g.h_d2_u * g.h_b_d2 - g.h_b_u * e2)
        + p1 * (g.h_d2_u * g.h_b_d1 - g.h_b_u * g.h_d),
        p1 * g.h_b_d2 * e1 - pu * (g.h_b_u * g.h_d - g.h_d1_u * g.h_b_d2),
        p2 * (g.h_b_d2 * g.h_d1_u - g.h_d * g.h_b_u) - p1 * e1 * g.h_b_u,
    )


def necessary_conditions(
    gains: ChannelGains, params: SystemParams
) -> tuple[bool, bool, bool, bool]:
    """Channel-only conditions any mutual-SIC solution requires (same for both orders)."""
    g = gains
    return (
        g.h_b_d1 * g.h_d2_u > g.h_d * g.h_b_u,
        g.h_d1_u * g.h_b_d2 > g.h_b_u * g.h_d,
        g.h_b_d1 * g.h_d1_u > params.eta1 * g.h_b_u,
        g.h_b_d2 * g.h_d2_u > params.eta2 * g.h_b_u,
    )


def sufficient_feasibility(
    gains: ChannelGains,
    params: SystemParams,
    limits: PowerLimits,
    pu_m: float,
    order: DecodingOrder,
) -> bool:
    """Exact emptiness test for the admissible region of one decoding order.

    Two channel conditions make the plane wedge open upward; the others place
    its lowest box crossing inside the device power limits.  An attainable CU
    floor power is required for the box itself to be non-empty.
    """
    g, e1, e2 = gains, params.eta1, params.eta2
    if pu_m > limits.pu_max_w:
        return False
    if order is DecodingOrder.M2_FIRST:
        return (
            g.h_b_d1 * g.h_d1_u - e1 * g.h_b_u > 2.0 * g.h_d * g.h_b_u * g.h_b_d1 / g.h_b_d2
            and g.h_b_d1 * g.h_d2_u - g.h_b_u * g.h_d
            > 2.0 * g.h_b_u * e2 * g.h_b_d1 / g.h_b_d2
            and pu_m * g.h_b_u / g.h_b_d1 < limits.p1_max_w
            and 2.0 * pu_m * g.h_b_u / g.h_b_d2 < limits.p2_max_w
        )
    return (
        g.h_d1_u * g.h_b_d2 - g.h_d * g.h_b_u > 2.0 * e1 * g.h_b_u * g.h_b_d2 / g.h_b_d1
        and g.h_d2_u * g.h_b_d2 - e2 * g.h_b_u > 2.0 * g.h_b_u * g.h_d * g.h_b_d2 / g.h_b_d1
        and 2.0 * pu_m * g.h_b_u / g.h_b_d1 < limits.p1_max_w
        and pu_m * g.h_b_u / g.h_b_d2 < limits.p2_max_w
    )


# ---------------------------------------------------------------------------
# Combined floor plane


class FloorPlane(Enum):
    PLANE2 = 2
    PLANE4 = 4


@dataclass(frozen=True)
class FloorSelector:
    """Pointwise-dominant floor: the higher of the two floor planes."""

    floor2: Plane
    floor4: Plane

    def active(self, p1: float, p2: float) -> FloorPlane:
        # Plane 2 is on top where P2*(a2y - a4y) > P1*(a4x - a2x); ties go to
        # plane 2.
        lhs = p2 * (self.floor2.ay - self.floor4.ay)
        rhs = p1 * (self.floor4.ax - self.floor2.ax)
        return FloorPlane.PLANE2 if lhs >= rhs else FloorPlane.PLANE4

    def plane(self, which: FloorPlane) -> Plane:
        return self.floor2 if which is FloorPlane.PLANE2 else self.floor4

    def height(self, p1: float, p2: float) -> float:
        return max(self.floor2.height(p1, p2), self.floor4.height(p1, p2))


def floor_selector(
    gains: ChannelGains, params: SystemParams
) -> FloorSelector:
    g = gains
    return FloorSelector(
        floor2=Plane(params.eta1 / g.h_d1_u, g.h_d / g.h_d1_u),
        floor4=Plane(g.h_d / g.h_d2_u, params.eta2 / g.h_d2_u),
    )


def pmc24_floor(
    selector: FloorSelector, p1: float, p2: float
) -> tuple[FloorPlane, float]:
    """Active floor plane and the minimum admissible Pu at (p1, p2)."""
    which = selector.active(p1, p2)
    return which, selector.plane(which).height(p1, p2)


class FloorMode(Enum):
    """How the two floor planes share the search space.

    The split modes name which plane dominates first along increasing P1;
    the BOX_ALL modes mark crossing geometries whose search space still sits
    entirely on one side of the crossing line.
    """

    PLANE2_EVERYWHERE = "plane2_everywhere"
    PLANE4_EVERYWHERE = "plane4_everywhere"
    PLANE2_THEN_PLANE4 = "plane2_then_plane4"
    PLANE4_THEN_PLANE2 = "plane4_then_plane2"
    BOX_ALL_PLANE2 = "box_all_plane2"
    BOX_ALL_PLANE4 = "box_all_plane4"


def region_inclusion(
    gains: ChannelGains, params: SystemParams, order: DecodingOrder
) -> FloorMode:
    """Classify the floor-plane interplay, including the two whole-box cases.

    When the floors genuinely cross inside the quadrant, the crossing line is
    compared against each ceiling: if it passes above one, the admissible
    region cannot reach the far side of the crossing and a single floor rules
    the whole search space.
    """
    planes = planes_for_order(gains, params, order)
    f2, f4 = planes.floor2, planes.floor4
    a = f2.ay - f4.ay
    b = f2.ax - f4.ax
    if a >= 0.0 and b >= 0.0:
        return FloorMode.PLANE2_EVERYWHERE
    if a <= 0.0 and b <= 0.0:
        return FloorMode.PLANE4_EVERYWHERE
    # The floors cross along the ray (a, -b)*m; m is chosen so the ray runs
    # into the positive quadrant.
    m = 1.0 if a > 0.0 else -1.0
    qx, qy = a * m, -b * m

    def deficit(x: float, y: float) -> float:
        return min(planes.ceil1.height(x, y), planes.ceil3.height(x, y)) - max(
            f2.height(x, y), f4.height(x, y)
        )

    if deficit(qx, qy) < 0.0:
        # The crossing ray is pinched between floor and ceilings, so the
        # admissible cone sits entirely on one of its sides.  Every plane is
        # homogeneous, making the deficit concave along any line: the side
        # where it recovers faster is the populated one.  (b, a) points from
        # the ray toward the floor-2-dominant side.
        delta = 1e-6 * math.hypot(qx, qy) / math.hypot(b, a)
        plus = deficit(qx + delta * b, qy + delta * a)
        minus = deficit(qx - delta * b, qy - delta * a)
        return FloorMode.BOX_ALL_PLANE2 if plus >= minus else FloorMode.BOX_ALL_PLANE4
    # a and b have opposite signs here; plane 2 dominates where
    # b*P1 + a*P2 > 0.
    return FloorMode.PLANE2_THEN_PLANE4 if b < 0.0 else FloorMode.PLANE4_THEN_PLANE2


# ---------------------------------------------------------------------------
# Box-side selection (which outer side each ceiling ridge exits through)


class Side(Enum):
    P1_MAX = "p1_max"
    P2_MAX = "p2_max"
    PU_MAX = "pu_max"


@dataclass(frozen=True)
class BoxHit:
    side: Side
    point: tuple[float, float, float]


def _combine_roots(increasing: list[bool], roots: list[float]) -> float:
    if all(increasing):
        return max(roots)
    if not any(increasing):
        return min(roots)
    raise GeometryError("ceiling/floor slope ordering violates the channel conditions")


def _ridge_on_p1_plane(
    ceil: Plane, selector: FloorSelector, p1_max: float
) -> tuple[float, float, float]:
    """Point where the ceiling meets the combined floor within the plane P1 = p1_max."""
    roots, incr = [], []
    for f in (selector.floor2, selector.floor4):
        dy = ceil.ay - f.ay
        if dy == 0.0:
            raise GeometryError("degenerate ceiling/floor pair on the P1 side")
        roots.append(p1_max * (f.ax - ceil.ax) / dy)
        incr.append(dy > 0.0)
    y = _combine_roots(incr, roots)
    return p1_max, y, ceil.height(p1_max, y)


def _ridge_on_p2_plane(
    ceil: Plane, selector: FloorSelector, p2_max: float
) -> tuple[float, float, float]:
    roots, incr = [], []
    for f in (selector.floor2, selector.floor4):
        dx = ceil.ax - f.ax
        if dx == 0.0:
            raise GeometryError("degenerate ceiling/floor pair on the P2 side")
        roots.append(p2_max * (f.ay - ceil.ay) / dx)
        incr.append(dx > 0.0)
    x = _combine_roots(incr, roots)
    return x, p2_max, ceil.height(x, p2_max)


def _ridge_on_cap(
    ceil: Plane, selector: FloorSelector, pu_max: float
) -> tuple[float, float, float]:
    """Point where a ceiling ridge pierces the plane Pu = pu_max.

    Solved per floor branch; the real branch is the one whose floor actually
    dominates at the solution.
    """
    for f in (selector.floor2, selector.floor4):
        det = ceil.ax * f.ay - ceil.ay * f.ax
        if det == 0.0:
            continue
        x = pu_max * (f.ay - ceil.ay) / det
        y = pu_max * (ceil.ax - f.ax) / det
        other = selector.floor4 if f is selector.floor2 else selector.floor2
        if other.height(x, y) <= pu_max * (1.0 + REL_TOL) and x > -pu_max and y > -pu_max:
            return x, y, pu_max
    raise GeometryError("ceiling ridge does not reach the CU power cap")


def line_box_intersection(
    planes: SicPlanes,
    selector: FloorSelector,
    limits: PowerLimits,
    pu_m: float,
    ceiling: int,
) -> BoxHit:
    """Which outer box side the ridge (ceiling meets combined floor) exits through.

    Two nested threshold tests decide among the device-power sides and the CU
    cap.  The primary device side is the one whose own power cap appears with
    a positive sign in the order's difference ceiling.  Points falling below
    the box bottom still classify to the device side; the segment endpoint
    formulas replace them with the bottom-edge crossing there.
    """
    if ceiling not in (1, 3):
        raise ValueError("ceiling must be 1 or 3")
    ceil = planes.ceil1 if ceiling == 1 else planes.ceil3
    if planes.order is DecodingOrder.M2_FIRST:
        primary = _ridge_on_p1_plane(ceil, selector, limits.p1_max_w)
        primary_side, in_plane, in_cap = Side.P1_MAX, primary[1], limits.p2_max_w
    else:
        primary = _ridge_on_p2_plane(ceil, selector, limits.p2_max_w)
        primary_side, in_plane, in_cap = Side.P2_MAX, primary[0], limits.p1_max_w

    if in_plane < in_cap:
        if primary[2] <= limits.pu_max_w:
            hit = BoxHit(primary_side, primary)
        else:
            hit = BoxHit(Side.PU_MAX, _ridge_on_cap(ceil, selector, limits.pu_max_w))
    else:
        if primary_side is Side.P1_MAX:
            secondary = _ridge_on_p2_plane(ceil, selector, limits.p2_max_w)
            secondary_side = Side.P2_MAX
        else:
            secondary = _ridge_on_p1_plane(ceil, selector, limits.p1_max_w)
            secondary_side = Side.P1_MAX
        if secondary[2] < limits.pu_max_w:
            hit = BoxHit(secondary_side, secondary)
        else:
            hit = BoxHit(Side.PU_MAX, _ridge_on_cap(ceil, selector, limits.pu_max_w))

    x, y, _ = hit.point
    scale = max(limits.p1_max_w, limits.p2_max_w, limits.pu_max_w)
    if x < -REL_TOL * scale or y < -REL_TOL * scale:
        raise GeometryError(f"ridge exit point has negative coordinates: {hit.point}")
    return hit


# Viable (ceiling-1 exit, ceiling-3 exit) pairs and the box sides they allow.
# None marks the conditional CU-cap segment, present only when the combined
# floor tops the cap at the (P1max, P2max) corner.
_SIDE_TABLE: dict[DecodingOrder, dict[tuple[Side, Side], list[Side | None]]] = {
    DecodingOrder.M2_FIRST: {
        (Side.PU_MAX, Side.PU_MAX): [Side.PU_MAX],
        (Side.P1_MAX, Side.PU_MAX): [Side.P1_MAX, Side.PU_MAX],
        (Side.PU_MAX, Side.P2_MAX): [Side.P2_MAX, Side.PU_MAX],
        (Side.P1_MAX, Side.P1_MAX): [Side.P1_MAX],
        (Side.P2_MAX, Side.P2_MAX): [Side.P2_MAX],
        (Side.P1_MAX, Side.P2_MAX): [Side.P1_MAX, Side.P2_MAX, None],
    },
    DecodingOrder.M1_FIRST: {
        (Side.PU_MAX, Side.PU_MAX): [Side.PU_MAX],
        (Side.P2_MAX, Side.PU_MAX): [Side.P2_MAX, Side.PU_MAX],
        (Side.PU_MAX, Side.P1_MAX): [Side.P1_MAX, Side.PU_MAX],
        (Side.P2_MAX, Side.P2_MAX): [Side.P2_MAX],
        (Side.P1_MAX, Side.P1_MAX): [Side.P1_MAX],
        (Side.P2_MAX, Side.P1_MAX): [Side.P1_MAX, Side.P2_MAX, None],
    },
}


@dataclass(frozen=True)
class SideSegment:
    """One admissible segment on an outer box side.

    ``lo``/``hi`` bound the free power coordinate (P2 on the P1 side, P1
    elsewhere).  ``branch`` names the floor plane that supplies Pu along a
    CU-cap segment.
    """

    side: Side
    lo: float
    hi: float
    branch: FloorPlane | None
    endpoint_lo: PowerTriplet
    endpoint_hi: PowerTriplet


def _device_side_interval(
    side: Side,
    planes: SicPlanes,
    selector: FloorSelector,
    limits: PowerLimits,
    pu_m: float,
) -> tuple[float, float]:
    """Free-coordinate range of the admissible segment on a device-power side.

    Each ceiling contributes a lower or an upper bound depending on whether
    its trace rises or falls along the side; the bound is its crossing with
    the combined floor or, lower down, with the box bottom Pu = pu_m.  The
    floor itself caps the range where it exceeds the CU power limit.
    """
    if side is Side.P1_MAX:
        fixed, free_cap = limits.p1_max_w, limits.p2_max_w

        def coef(pl: Plane) -> tuple[float, float]:
            return pl.ay, pl.ax * fixed  # slope along the free coord, offset

    else:
        fixed, free_cap = limits.p2_max_w, limits.p1_max_w

        def coef(pl: Plane) -> tuple[float, float]:
            return pl.ax, pl.ay * fixed

    lo, hi = 0.0, free_cap
    for ceil in (planes.ceil1, planes.ceil3):
        c_slope, c_off = coef(ceil)
        roots, incr = [], []
        for f in (selector.floor2, selector.floor4):
            f_slope, f_off = coef(f)
            d = c_slope - f_slope
            if d == 0.0:
                raise GeometryError("parallel ceiling and floor traces on a box side")
            roots.append((f_off - c_off) / d)
            incr.append(d > 0.0)
        t_floor = _combine_roots(incr, roots)
        if all(incr):
            lo = max(lo, t_floor)
        else:
            hi = min(hi, t_floor)
        if c_slope > 0.0:
            lo = max(lo, (pu_m - c_off) / c_slope)
        elif c_slope < 0.0:
            hi = min(hi, (pu_m - c_off) / c_slope)
        elif c_off < pu_m:
            return 1.0, 0.0  # constant ceiling below the box bottom: empty side
    for f in (selector.floor2, selector.floor4):
        f_slope, f_off = coef(f)
        if f_slope <= 0.0:
            raise GeometryError("floor plane does not rise along a device side")
        hi = min(hi, (limits.pu_max_w - f_off) / f_slope)
    return lo, hi


def _cap_interval(
    planes: SicPlanes, selector: FloorSelector, limits: PowerLimits
) -> tuple[float, float]:
    """P1 range of the admissible curve (combined floor == CU cap) on the cap side."""
    pu_max = limits.pu_max_w
    lo, hi = 0.0, limits.p1_max_w
    entries = []
    for f in (selector.floor2, selector.floor4):
        if f.ax <= 0.0:
            raise GeometryError("floor plane does not rise along P1")
        entries.append((pu_max - f.ay * limits.p2_max_w) / f.ax)
    lo = max(lo, min(entries))
    for ceil in (planes.ceil1, planes.ceil3):
        x, _, _ = _ridge_on_cap(ceil, selector, pu_max)
        # A ceiling rising along the cap curve bounds it from below, a falling
        # one from above; the channel conditions fix the sign per ceiling.
        along = [
            ceil.ax * f.ay - ceil.ay * f.ax
            for f in (selector.floor2, selector.floor4)
        ]
        if all(a > 0.0 for a in along):
            lo = max(lo, x)
        elif all(a < 0.0 for a in along):
            hi = min(hi, x)
        else:
            raise GeometryError("ceiling slope along the cap curve is not uniform")
    return lo, hi


def _cap_curve_p2(
    selector: FloorSelector, branch: FloorPlane, p1: float, pu_max: float
) -> float:
    f = selector.plane(branch)
    return (pu_max - f.ax * p1) / f.ay


def _cap_branch_at(selector: FloorSelector, p1: float, pu_max: float) -> FloorPlane:
    """Floor branch supplying the cap curve at abscissa p1 (the lower P2 wins)."""
    y2 = _cap_curve_p2(selector, FloorPlane.PLANE2, p1, pu_max)
    y4 = _cap_curve_p2(selector, FloorPlane.PLANE4, p1, pu_max)
    return FloorPlane.PLANE2 if y2 <= y4 else FloorPlane.PLANE4


def _floor_crossing_on_cap(
    selector: FloorSelector, pu_max: float
) -> tuple[float, float] | None:
    """Point where both floors equal the CU cap: the kink of the cap curve."""
    f2, f4 = selector.floor2, selector.floor4
    det = f2.ax * f4.ay - f2.ay * f4.ax
    if det == 0.0:
        return None
    x = pu_max * (f4.ay - f2.ay) / det
    y = pu_max * (f2.ax - f4.ax) / det
    if x <= 0.0 or y <= 0.0:
        return None
    return x, y


def _nonempty(lo: float, hi: float, scale: float) -> bool:
    return hi - lo > -REL_TOL * scale


def _build_device_segment(
    side: Side,
    planes: SicPlanes,
    selector: FloorSelector,
    limits: PowerLimits,
    pu_m: float,
) -> list[SideSegment]:
    lo, hi = _device_side_interval(side, planes, selector, limits, pu_m)
    if not _nonempty(lo, hi, max(limits.p1_max_w, limits.p2_max_w)):
        return []
    hi = max(hi, lo)

    def endpoint(t: float) -> PowerTriplet:
        if side is Side.P1_MAX:
            p1, p2 = limits.p1_max_w, t
        else:
            p1, p2 = t, limits.p2_max_w
        pu = max(selector.height(p1, p2), pu_m)
        return PowerTriplet(p1, max(p2, 0.0), pu)

    return [
        SideSegment(side, lo, hi, None, endpoint(lo), endpoint(hi))
    ]


def _build_cap_segments(
    planes: SicPlanes, selector: FloorSelector, limits: PowerLimits
) -> list[SideSegment]:
    pu_max = limits.pu_max_w
    try:
        lo, hi = _cap_interval(planes, selector, limits)
    except GeometryError:
        return []
    scale = max(limits.p1_max_w, limits.p2_max_w)
    if not _nonempty(lo, hi, scale):
        return []
    lo, hi = max(lo, 0.0), max(hi, max(lo, 0.0))

    pieces = [(lo, hi)]
    kink = _floor_crossing_on_cap(selector, pu_max)
    if kink is not None and lo + REL_TOL * scale < kink[0] < hi - REL_TOL * scale:
        pieces = [(lo, kink[0]), (kink[0], hi)]

    segments = []
    for a, b in pieces:
        branch = _cap_branch_at(selector, 0.5 * (a + b), pu_max)
        pt_a = PowerTriplet(max(a, 0.0), max(_cap_curve_p2(selector, branch, a, pu_max), 0.0), pu_max)
        pt_b = PowerTriplet(max(b, 0.0), max(_cap_curve_p2(selector, branch, b, pu_max), 0.0), pu_max)
        segments.append(SideSegment(Side.PU_MAX, a, b, branch, pt_a, pt_b))
    return segments


def segment_set(
    gains: ChannelGains,
    params: SystemParams,
    limits: PowerLimits,
    pu_m: float,
    order: DecodingOrder,
    exhaustive: bool = False,
) -> list[SideSegment]:
    """Admissible segments on the outer box sides for one decoding order.

    The two ridge exits select which sides can host a segment; the CU-cap
    side in the mixed case is included only when the combined floor tops
    the cap at the (P1max, P2max) corner.  With ``exhaustive`` True every
    side is examined and empty ones drop out; the result must be identical.
    """
    planes = planes_for_order(gains, params, order)
    selector = FloorSelector(planes.floor2, planes.floor4)

    if exhaustive:
        sides: list[Side] = [Side.P1_MAX, Side.P2_MAX, Side.PU_MAX]
    else:
        hit1 = line_box_intersection(planes, selector, limits, pu_m, ceiling=1)
        hit3 = line_box_intersection(planes, selector, limits, pu_m, ceiling=3)
        pair = (hit1.side, hit3.side)
        table = _SIDE_TABLE[order]
        if pair not in table:
            raise GeometryError(f"ridge side pair {pair} should be unreachable")
        listed = table[pair]
        sides = [s for s in listed if s is not None]
        if None in listed:
            if selector.height(limits.p1_max_w, limits.p2_max_w) > limits.pu_max_w:
                sides.append(Side.PU_MAX)

    segments: list[SideSegment] = []
    for side in sides:
        if side is Side.PU_MAX:
            segments.extend(_build_cap_segments(planes, selector, limits))
        else:
            segments.extend(_build_device_segment(side, planes, selector, limits, pu_m))
    return segments


# ---------------------------------------------------------------------------
# Per-segment optimization


def optimize_box_side(
    segment: SideSegment, gains: ChannelGains, params: SystemParams
) -> tuple[float, float, float]:
    """Best (p1, p2, rate) on a device-power side: an endpoint always wins.

    Along such a side the rate derivative carries the sign of a quadratic
    whose negative lobe is a single interval, so no interior point can beat
    both endpoints.
    """
    if segment.side not in (Side.P1_MAX, Side.P2_MAX):
        raise ValueError("optimize_box_side handles the device-power sides only")
    best = None
    for pt in (segment.endpoint_lo, segment.endpoint_hi):
        rate = fd_sic_d2d_rate(pt.p1_w, pt.p2_w, gains, params)
        if best is None or rate > best[2]:
            best = (pt.p1_w, pt.p2_w, rate)
    return best


def _cap_poly(
    branch: FloorPlane, gains: ChannelGains, params: SystemParams, pu_max: float
) -> tuple[float, float, float]:
    """Quadratic whose sign equals the rate derivative in P1 along a cap branch."""
    hd, e1, e2, s = gains.h_d, params.eta1, params.eta2, params.noise_w
    if branch is FloorPlane.PLANE2:
        h = gains.h_d1_u
        a = -(e1 * e2 - hd * hd) * e1 * e1 * e2
        b = 2.0 * e1 * e1 * e2 * (pu_max * h * e2 + s * hd)
        c = (
            -pu_max * pu_max * h * h * e2 * e2 * e1
            + pu_max * s * hd * h * e2 * (hd - 2.0 * e1)
            + s * s * hd * hd * (hd - e1)
        )
    else:
        h = gains.h_d2_u
        a = (e1 * e2 - hd * hd) * e1
        b = 2.0 * e1 * (pu_max * h * hd + s * e2)
        c = -pu_max * pu_max * h * h * e1 - s * e1 * h * pu_max + s * s * (e2 - hd)
    return a, b, c


def optimize_su_side(
    segment: SideSegment,
    gains: ChannelGains,
    params: SystemParams,
    pu_max: float,
) -> tuple[float, float, float]:
    """Best (p1, p2, rate) on a CU-cap segment.

    Candidates are the two endpoints plus the quadratic root that can host a
    local maximum of the rate (the other root is always a local minimum and
    is never tested).
    """
    if segment.side is not Side.PU_MAX or segment.branch is None:
        raise ValueError("optimize_su_side handles CU-cap segments only")
    candidates = [segment.lo, segment.hi]
    a, b, c = _cap_poly(segment.branch, gains, params, pu_max)
    if a != 0.0:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            root = (-b - math.sqrt(disc)) / (2.0 * a)
            if segment.lo < root < segment.hi:
                candidates.append(root)
    elif b != 0.0:
        root = -c / b
        if segment.lo < root < segment.hi:
            candidates.append(root)

    sel = FloorSelector(
        Plane(params.eta1 / gains.h_d1_u, gains.h_d / gains.h_d1_u),
        Plane(gains.h_d / gains.h_d2_u, params.eta2 / gains.h_d2_u),
    )
    best = None
    for p1 in candidates:
        p2 = max(_cap_curve_p2(sel, segment.branch, p1, pu_max), 0.0)
        rate = fd_sic_d2d_rate(max(p1, 0.0), p2, gains, params)
        if best is None or rate > best[2]:
            best = (max(p1, 0.0), p2, rate)
    return best


# ---------------------------------------------------------------------------
# Full solve for one decoding order


def validate_sic_point(
    gains: ChannelGains,
    params: SystemParams,
    limits: PowerLimits,
    order: DecodingOrder,
    point: PowerTriplet,
    rel_tol: float = REL_TOL,
) -> None:
    """Raise GeometryError unless the point meets every mutual-SIC constraint
    within a relative margin."""
    planes = planes_for_order(gains, params, order)
    pu_m = pu_min(params, gains.h_b_u)
    p1, p2, pu = point.p1_w, point.p2_w, point.pu_w
    scale = max(pu, planes.ceil3.height(p1, p2), planes.floor2.height(p1, p2), 1e-300)
    if any(m < -rel_tol * scale for m in pmc_margins(planes, p1, p2, pu)):
        raise GeometryError(f"solution violates a power-ordering condition: {point}")
    margins = sic_rate_margins(gains, params, order, p1, p2, pu)
    sic_scale = max(abs(m) for m in margins) + scale * max(
        gains.h_b_d1, gains.h_b_d2, gains.h_b_u
    ) * max(p1, p2, pu, 1e-300)
    if any(m < -rel_tol * sic_scale for m in margins):
        raise GeometryError(f"solution violates a SIC rate condition: {point}")
    if not point.within(limits, rel_tol):
        raise GeometryError(f"solution violates a power limit: {point}")
    if pu < pu_m * (1.0 - rel_tol):
        raise GeometryError(f"solution violates the CU rate floor: {point}")


def solve_fd_sic_order(
    gains: ChannelGains,
    params: SystemParams,
    limits: PowerLimits,
    order: DecodingOrder,
    exhaustive: bool = False,
) -> PaSolution | None:
    """Optimal FD mutual-SIC allocation for one decoding order, or None.

    Returns None when the admissible region is empty.  The CU transmits at
    the smallest admissible power for the chosen device powers.
    """
    pu_m = pu_min(params, gains.h_b_u)
    if not sufficient_feasibility(gains, params, limits, pu_m, order):
        return None
    segments = segment_set(gains, params, limits, pu_m, order, exhaustive=exhaustive)
    if not segments:
        raise GeometryError("feasibility tests passed but no segment was found")

    selector = floor_selector(gains, params)

    def point_at(seg: SideSegment, t: float) -> PowerTriplet:
        if seg.side is Side.PU_MAX:
            p1 = max(t, 0.0)
            p2 = max(_cap_curve_p2(selector, seg.branch, t, limits.pu_max_w), 0.0)
            pu = limits.pu_max_w
        elif seg.side is Side.P1_MAX:
            p1, p2 = limits.p1_max_w, max(t, 0.0)
            pu = max(selector.height(p1, p2), pu_m)
        else:
            p1, p2 = max(t, 0.0), limits.p2_max_w
            pu = max(selector.height(p1, p2), pu_m)
        return PowerTriplet(
            min(p1, limits.p1_max_w), min(p2, limits.p2_max_w), min(pu, limits.pu_max_w)
        )

    candidates: list[tuple[float, SideSegment, float]] = []
    seen: list[tuple[float, float]] = []
    scale = max(limits.p1_max_w, limits.p2_max_w)
    for seg in segments:
        if seg.side is Side.PU_MAX:
            cand = optimize_su_side(seg, gains, params, limits.pu_max_w)
            t = cand[0]
        else:
            cand = optimize_box_side(seg, gains, params)
            t = cand[1] if seg.side is Side.P1_MAX else cand[0]
        key = (cand[0], cand[1])
        if any(
            abs(key[0] - k[0]) <= REL_TOL * scale and abs(key[1] - k[1]) <= REL_TOL * scale
            for k in seen
        ):
            continue
        seen.append(key)
        candidates.append((cand[2], seg, t))

    # The highest-rate candidate that survives the exact validation wins.
    # On sliver segments the optimal endpoint may sit closer to a constraint
    # plane than double precision can certify, in which case the point is
    # pulled toward the segment interior where the margins are genuinely
    # positive; the rate sacrifice is bounded by the sliver width.
    failure: GeometryError | None = None
    for _, seg, t in sorted(candidates, key=lambda c: -c[0]):
        mid = 0.5 * (seg.lo + seg.hi)
        for frac in (0.0, 1e-6, 1e-3, 0.1, 1.0):
            t_try = t + (mid - t) * frac
            point = point_at(seg, t_try)
            try:
                validate_sic_point(gains, params, limits, order, point)
            except GeometryError as exc:
                failure = exc
                continue
            rate = fd_sic_d2d_rate(point.p1_w, point.p2_w, gains, params)
            r_u = shannon_rate(
                params.bandwidth_hz, point.pu_w * gains.h_b_u / params.noise_w
            )
            return PaSolution(
                scenario=Scenario(ScenarioKind.FD_SIC, order=order),
                powers=point,
                r_d2d_bps=rate,
                r_u_bps=r_u,
                sic_applied=True,
            )
    raise failure if failure is not None else GeometryError("no candidate point found")
