"""Certified rectangle nets over rotated grids, plus exact largest empty
axis-parallel rectangle computation.

The net is a family of rectangles of area (2+eps)log(n)/n arranged on
rotated lattices, with the property that every rectangle of area
(2+4eps)log(n)/n inside the body contains a member.  Non-emptiness of every
member therefore certifies an upper bound on the largest empty rectangle;
an empty member is a constructive counterexample.  The family size is
astronomically large at practical n, so membership questions are answered
level by level without materializing it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels
from .geometry import (
    AffineMap,
    ConvexBody,
    OrientedRect,
    body_contains_rect,
    diameter,
    halfplane_polygon,
    lassak_rectangles,
    rect_contains_rect,
)
from .sampling import PointSample


class EpsilonTooLarge(ValueError):
    """epsilon outside the range where the inclination-rounding bound holds."""


class PreconditionViolation(ValueError):
    """Input rectangle fails the stated area/containment precondition."""


class NetTooLarge(RuntimeError):
    """Materialization or exact scan would exceed the configured budget."""


class WitnessNotFound(RuntimeError):
    """No net member inside a valid query rectangle; indicates a bug."""


class TooManyPoints(ValueError):
    """Oracle input exceeds its enumeration limit."""


@dataclass(frozen=True)
class NetParams:
    """Derived constants of the net for a given (n, epsilon, body)."""

    n: int
    epsilon: float
    rho: float
    theta0: float
    gamma: float
    w0: float
    M: int
    t_count: int
    area_lo: float
    area_mid: float
    area_hi: float

    @property
    def levels(self) -> int:
        return self.M * self.t_count

    def level_dims(self, m: int):
        """(width, height) of the member rectangles at level m."""
        return self.gamma ** m * self.w0, self.rho / self.gamma ** (m + 3)

    def level_deltas(self, m: int):
        """Grid spacings (dx, dy) at level m."""
        dx = self.gamma ** m * (self.gamma - 1.0) * self.w0 / 2.0
        dy = self.rho * (self.gamma - 1.0) / (2.0 * self.gamma ** (m + 3))
        return dx, dy


def make_net_params(n: int, epsilon: float, body: ConvexBody) -> NetParams:
    """Net constants: inclination quantum, width ladder and level count.

    theta0 = eps(2+4eps)log(n)/(4 rho^2 n); gamma = ((2+2eps)/(2+eps))^(1/3);
    w0 = (2+2eps)log(n)/(rho n); M is the smallest m with
    gamma^m w0 >= sqrt((2+2eps)log(n)/n).
    """
    if n < 16:
        raise ValueError("n must be >= 16")
    if not (0.0 < epsilon <= 0.1):
        raise EpsilonTooLarge("epsilon must lie in (0, 0.1]")
    # rounding a rectangle's inclination keeps enough area only while
    # (2+4eps)(1-eps/2) > 2+2eps
    if not (2.0 + 4.0 * epsilon) * (1.0 - epsilon / 2.0) > 2.0 + 2.0 * epsilon:
        raise EpsilonTooLarge("area margin of the inclination rounding fails")
    logn = math.log(n)
    rho = diameter(body)
    theta0 = epsilon * (2.0 + 4.0 * epsilon) * logn / (4.0 * rho * rho * n)
    gamma = ((2.0 + 2.0 * epsilon) / (2.0 + epsilon)) ** (1.0 / 3.0)
    w0 = (2.0 + 2.0 * epsilon) * logn / (rho * n)
    w_max = math.sqrt((2.0 + 2.0 * epsilon) * logn / n)
    M = max(1, math.ceil(math.log(w_max / w0) / math.log(gamma) - 1e-12))
    while gamma ** M * w0 < w_max:
        M += 1
    while M > 1 and gamma ** (M - 1) * w0 >= w_max:
        M -= 1
    t_count = max(1, math.ceil(math.pi / theta0))
    return NetParams(
        n=n,
        epsilon=epsilon,
        rho=rho,
        theta0=theta0,
        gamma=gamma,
        w0=w0,
        M=M,
        t_count=t_count,
        area_lo=(2.0 + epsilon) * logn / n,
        area_mid=(2.0 + 2.0 * epsilon) * logn / n,
        area_hi=(2.0 + 4.0 * epsilon) * logn / n,
    )


# ---------------------------------------------------------------------------
# inclination quantization (four-line rotation)
# ---------------------------------------------------------------------------


def quantize_rectangle(rect: OrientedRect, params: NetParams, body: ConvexBody,
                       area_rtol: float = 1e-6) -> OrientedRect:
    """Rectangle inside ``rect`` whose inclination is an exact integer
    multiple of theta0, built by rotating each side line clockwise about a
    corner and intersecting the four chords.  Keeps area at least
    (1 - eps/2) of the input, hence above (2+2eps)log(n)/n.
    """
    rect = rect.canonical()
    if abs(rect.area - params.area_hi) > area_rtol * params.area_hi:
        raise PreconditionViolation(
            f"rectangle area {rect.area} != (2+4eps)log(n)/n = {params.area_hi}"
        )
    if not body_contains_rect(body, rect, tol=1e-12 * params.rho):
        raise PreconditionViolation("rectangle escapes the body")
    theta = rect.inclination
    t = int(math.floor(theta / params.theta0))
    t = min(t, params.t_count - 1)
    phi = theta - t * params.theta0
    if phi <= 1e-15:
        return OrientedRect(rect.center, rect.width, rect.height, t * params.theta0)

    w, h = rect.width, rect.height
    u, v = rect.axes
    c = np.array(rect.center)
    # clockwise corners a, b, c, d with ab and cd the long sides
    a = c - (w / 2) * u - (h / 2) * v
    b = c - (w / 2) * u + (h / 2) * v
    cc = c + (w / 2) * u + (h / 2) * v
    d = c + (w / 2) * u - (h / 2) * v
    tanphi = math.tan(phi)
    # chord targets on the next side (local frame offsets mapped back)
    a2 = np.array([-w / 2 + h * tanphi, h / 2])
    b2 = np.array([w / 2, h / 2 - w * tanphi])
    c2 = np.array([w / 2 - h * tanphi, -h / 2])
    d2 = np.array([-w / 2, -h / 2 + w * tanphi])

    def to_global(p_local):
        return c + p_local[0] * u + p_local[1] * v

    a_p, b_p, c_p, d_p = map(to_global, (a2, b2, c2, d2))

    def line_inter(p1, d1, p2, d2v):
        mat = np.array([[d1[0], -d2v[0]], [d1[1], -d2v[1]]])
        rhs = p2 - p1
        s = np.linalg.solve(mat, rhs)
        return p1 + s[0] * d1

    da = a_p - a
    db = b_p - b
    dc = c_p - cc
    dd = d_p - d
    p1 = line_inter(a, da, d, dd)
    p2 = line_inter(a, da, b, db)
    p3 = line_inter(cc, dc, b, db)
    p4 = line_inter(cc, dc, d, dd)
    corners = np.array([p1, p2, p3, p4])
    center = corners.mean(axis=0)
    h_new = float(np.linalg.norm(p2 - p1))
    w_new = float(np.linalg.norm(p3 - p2))
    out = OrientedRect(tuple(center), w_new, h_new, t * params.theta0)
    if not rect_contains_rect(rect, out, tol=1e-9 * params.rho):
        raise WitnessNotFound("quantized rectangle escaped its parent")
    return out


# ---------------------------------------------------------------------------
# levels, grids, witnesses
# ---------------------------------------------------------------------------


def _valid_center_polygon(body: ConvexBody, params: NetParams, m: int, t: int):
    """Region of centers whose level-(m, t) rectangle fits in the body,
    expressed in the level frame (rotated by -t*theta0).  None when empty.
    """
    w, h = params.level_dims(m)
    theta = t * params.theta0
    rot = body.transformed(AffineMap.rotation(-theta))
    sup = 0.5 * (w * np.abs(rot._inward[:, 0]) + h * np.abs(rot._inward[:, 1]))
    return halfplane_polygon(rot.vertices, rot._inward, rot._offsets + sup)


def level_centers(body: ConvexBody, params: NetParams, m: int, t: int) -> np.ndarray:
    """Grid centers of level (m, t) whose rectangle fits in the body,
    in body coordinates."""
    poly = _valid_center_polygon(body, params, m, t)
    if poly is None:
        return np.empty((0, 2))
    dx, dy = params.level_deltas(m)
    ys = poly[:, 1]
    j0 = math.ceil(ys.min() / dy)
    j1 = math.floor(ys.max() / dy)
    rows = []
    npoly = len(poly)
    for j in range(j0, j1 + 1):
        yc = j * dy
        xl, xr = math.inf, -math.inf
        for e in range(npoly):
            x1, y1 = poly[e]
            x2, y2 = poly[(e + 1) % npoly]
            if y1 == yc:
                xl = min(xl, x1)
                xr = max(xr, x1)
            lo, hi = (y1, y2) if y1 < y2 else (y2, y1)
            if lo < yc < hi:
                xx = x1 + (yc - y1) / (y2 - y1) * (x2 - x1)
                xl = min(xl, xx)
                xr = max(xr, xx)
        if xl > xr:
            continue
        i0 = math.ceil(xl / dx - 1e-12)
        i1 = math.floor(xr / dx + 1e-12)
        if i1 < i0:
            continue
        xscol = np.arange(i0, i1 + 1, dtype=float) * dx
        rows.append(np.stack([xscol, np.full(len(xscol), yc)], axis=1))
    if not rows:
        return np.empty((0, 2))
    local = np.concatenate(rows, axis=0)
    return AffineMap.rotation(t * params.theta0).apply(local)


def count_level_rects(body: ConvexBody, params: NetParams, m: int, t: int) -> int:
    return len(level_centers(body, params, m, t))


@dataclass
class RectNet:
    """Materialized net (small parameter sets only)."""

    params: NetParams
    rects: list
    level_index: dict


def build_rect_net(body: ConvexBody, params: NetParams, max_rects: int = 2_000_000,
                   t_limit: int | None = None) -> RectNet:
    """Materialize the net, level by level; NetTooLarge when the member
    count exceeds the budget.

    The full family is astronomically large at practical n (the O(n^2)
    bound carries an enormous constant), so ``t_limit`` materializes only
    the inclinations t < t_limit; emptiness questions against the full net
    go through ``level_centers`` / the streaming scan instead.
    """
    per_level_bound = packing_bound_per_level(params)
    t_count = params.t_count if t_limit is None else min(t_limit, params.t_count)
    rects = []
    level_index = {}
    for m in range(-1, params.M - 1):
        w, h = params.level_dims(m)
        for t in range(t_count):
            centers = level_centers(body, params, m, t)
            if len(centers) > per_level_bound + 1:
                raise NetTooLarge(
                    f"level ({m},{t}) holds {len(centers)} rects, bound {per_level_bound}"
                )
            start = len(rects)
            theta = t * params.theta0
            for cx, cy in centers:
                rects.append(OrientedRect((cx, cy), w, h, theta))
            level_index[(m, t)] = slice(start, len(rects))
            if len(rects) > max_rects:
                raise NetTooLarge(f"net exceeds {max_rects} members")
    return RectNet(params, rects, level_index)


def packing_bound_per_level(params: NetParams) -> float:
    """Packing bound a(K)/(dx*dy) = 4 gamma^3 n / ((2+2eps)(gamma-1)^2 log n)."""
    g = params.gamma
    return 4.0 * g ** 3 * params.n / (
        (2.0 + 2.0 * params.epsilon) * (g - 1.0) ** 2 * math.log(params.n)
    )


def net_size_bound(params: NetParams) -> float:
    """Explicit bound on |net|: levels x per-level packing bound."""
    return params.levels * packing_bound_per_level(params)


def net_contains_witness(q: OrientedRect, params: NetParams, body: ConvexBody,
                         area_rtol: float = 1e-6) -> OrientedRect:
    """Net member inside a quantized query rectangle.

    The query must have area (2+2eps)log(n)/n, inclination t*theta0 and lie
    in the body; the member is found at the level whose width bracket holds
    the query's width (ties resolved to the lower level) and at the grid
    point nearest to the query center.
    """
    if abs(q.area - params.area_mid) > area_rtol * params.area_mid:
        raise PreconditionViolation(
            f"query area {q.area} != (2+2eps)log(n)/n = {params.area_mid}"
        )
    t = int(round(q.inclination / params.theta0))
    if not (0 <= t < params.t_count) or abs(q.inclination - t * params.theta0) > 1e-9:
        raise PreconditionViolation("query inclination is not a multiple of theta0")
    if not body_contains_rect(body, q, tol=1e-9 * params.rho):
        raise PreconditionViolation("query rectangle escapes the body")
    wq = min(q.width, q.height)
    lr = math.log(wq / params.w0) / math.log(params.gamma)
    # widths exactly on a bracket endpoint snap to the level whose bracket
    # starts there; either adjacent level is valid and gets retried anyway
    m = int(math.floor(lr + 1e-9)) - 1
    m = max(-1, min(params.M - 2, m))
    for m_try in (m, m - 1, m + 1):
        if not (-1 <= m_try <= params.M - 2):
            continue
        member = _witness_at_level(q, params, m_try, t)
        if member is not None:
            return member
    raise WitnessNotFound("no net member inside a valid query rectangle")


def _witness_at_level(q: OrientedRect, params: NetParams, m: int, t: int):
    dx, dy = params.level_deltas(m)
    w, h = params.level_dims(m)
    theta = t * params.theta0
    back = AffineMap.rotation(theta)
    fwd = AffineMap.rotation(-theta)
    c_local = fwd.apply(np.array(q.center))
    g_local = np.array([round(c_local[0] / dx) * dx, round(c_local[1] / dy) * dy])
    member = OrientedRect(tuple(back.apply(g_local)), w, h, theta)
    if rect_contains_rect(q.canonical(), member, tol=1e-12 * max(1.0, params.rho)):
        return member
    return None


# ---------------------------------------------------------------------------
# exact largest empty axis-parallel rectangle
# ---------------------------------------------------------------------------


def max_empty_axis_rect(container: OrientedRect, points):
    """Maximum-area axis-parallel empty rectangle inside an axis-aligned
    container; exact stair sweep over maximal windows.
    Returns (rect, area).
    """
    if container.inclination not in (0.0,):
        raise ValueError("container must be axis-aligned")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    cx, cy = container.center
    x0, x1 = cx - container.width / 2.0, cx + container.width / 2.0
    y0, y1 = cy - container.height / 2.0, cy + container.height / 2.0
    if len(pts) and (
        (pts[:, 0] < x0).any() or (pts[:, 0] > x1).any()
        or (pts[:, 1] < y0).any() or (pts[:, 1] > y1).any()
    ):
        raise ValueError("points must lie in the closed container")
    area, rx0, rx1, ry0, ry1, side, sx, sy = _kernels.max_empty_rect_sweep(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]), x0, x1, y0, y1
    )
    rect = OrientedRect.axis_aligned(rx0, ry0, rx1, ry1)
    return rect, float(area)


def max_empty_axis_square(container: OrientedRect, points):
    """Largest empty axis-aligned square in the container: (rect, side)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    cx, cy = container.center
    x0, x1 = cx - container.width / 2.0, cx + container.width / 2.0
    y0, y1 = cy - container.height / 2.0, cy + container.height / 2.0
    area, rx0, rx1, ry0, ry1, side, sx, sy = _kernels.max_empty_rect_sweep(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]), x0, x1, y0, y1
    )
    rect = OrientedRect.axis_aligned(sx, sy, sx + side, sy + side)
    return rect, float(side)


def max_empty_axis_rect_oracle(container: OrientedRect, points) -> float:
    """Independent check: enumerate every candidate rectangle whose sides
    come from point coordinates or container walls, counting interior points
    with prefix sums.  Limited to 60 points.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) > 60:
        raise TooManyPoints("oracle accepts at most 60 points")
    cx, cy = container.center
    x0, x1 = cx - container.width / 2.0, cx + container.width / 2.0
    y0, y1 = cy - container.height / 2.0, cy + container.height / 2.0
    X = np.unique(np.concatenate([[x0, x1], pts[:, 0]]))
    Y = np.unique(np.concatenate([[y0, y1], pts[:, 1]]))
    ix = np.searchsorted(X, pts[:, 0])
    iy = np.searchsorted(Y, pts[:, 1])
    occ = np.zeros((len(X), len(Y)), dtype=np.int64)
    np.add.at(occ, (ix, iy), 1)
    pref = occ.cumsum(axis=0).cumsum(axis=1)
    padded = np.zeros((len(X) + 1, len(Y) + 1), dtype=np.int64)
    padded[1:, 1:] = pref

    best = 0.0
    ny = len(Y)
    j0s = np.arange(ny - 1)
    for i0 in range(len(X)):
        for i1 in range(i0 + 1, len(X)):
            w = X[i1] - X[i0]
            if w * (y1 - y0) <= best:
                continue
            # strict interior count of (j0, j1) is col[j1] - col[j0 + 1]
            col = padded[i1] - padded[i0 + 1]
            # per j0, the largest j1 with zero interior points (col monotone)
            j1max = np.searchsorted(col, col[j0s + 1], side="right") - 1
            j1max = np.minimum(j1max, ny - 1)
            ok = j1max > j0s
            if ok.any():
                a = float(np.max(w * (Y[j1max[ok]] - Y[j0s[ok]])))
                if a > best:
                    best = a
    return float(best)


# ---------------------------------------------------------------------------
# net-based certification
# ---------------------------------------------------------------------------

CERTIFIED = "certified"
EMPTY_MEMBER = "empty_member_found"
UNDECIDED = "undecided"


@dataclass
class MaxRectReport:
    """Outcome of the rectangle-hole estimation and certification."""

    lower: float
    lower_rect: OrientedRect | None
    status: str
    upper_certified: float
    empty_member: OrientedRect | None = None
    levels_scanned: int = 0

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def _inscribed_container(body: ConvexBody):
    """Axis frame to run the exact sweep in: the body itself when it is an
    axis-aligned rectangle (detected from its vertices), else the Lassak
    inscribed rectangle."""
    v = body.vertices
    if len(v) == 4:
        xs = np.unique(v[:, 0])
        ys = np.unique(v[:, 1])
        if len(xs) == 2 and len(ys) == 2:
            return OrientedRect.axis_aligned(xs[0], ys[0], xs[1], ys[1]), True
    ins, _ = lassak_rectangles(body)
    return ins, False


def net_max_empty_rect(body: ConvexBody, sample: PointSample, params: NetParams,
                       level_budget: int = 150_000, presweep=None) -> MaxRectReport:
    """Lower bound from the exact axis sweep inside an inscribed rectangle,
    and the emptiness status of the net.

    Certification semantics: CERTIFIED when an exhaustive level scan proves
    no member is empty (then no rectangle of area (2+4eps)log(n)/n can be
    empty, so that value is a certified upper bound); EMPTY_MEMBER_FOUND
    when a verified empty member is exhibited; UNDECIDED when no witness was
    found and the net is too large for the exhaustive scan at the given
    budget.
    """
    container, is_axis_body = _inscribed_container(body)
    if is_axis_body or container.inclination == 0.0:
        pts_frame = sample.points
        frame = AffineMap.identity()
    else:
        frame = AffineMap.rotation(-container.inclination)
        pts_frame = frame.apply(sample.points)
    c_local = frame.apply(np.array(container.center))
    x0 = c_local[0] - container.width / 2.0
    x1 = c_local[0] + container.width / 2.0
    y0 = c_local[1] - container.height / 2.0
    y1 = c_local[1] + container.height / 2.0
    if presweep is not None and is_axis_body:
        a, rx0, rx1, ry0, ry1, side, sx, sy = presweep
    else:
        inside = (
            (pts_frame[:, 0] >= x0) & (pts_frame[:, 0] <= x1)
            & (pts_frame[:, 1] >= y0) & (pts_frame[:, 1] <= y1)
        )
        pin = pts_frame[inside]
        a, rx0, rx1, ry0, ry1, side, sx, sy = _kernels.max_empty_rect_sweep(
            np.ascontiguousarray(pin[:, 0]), np.ascontiguousarray(pin[:, 1]),
            x0, x1, y0, y1,
        )
    back = frame.inverse()
    lower_rect_local = OrientedRect.axis_aligned(rx0, ry0, rx1, ry1)
    lr_center = back.apply(np.array(lower_rect_local.center))
    lower_rect = OrientedRect(
        tuple(lr_center), lower_rect_local.width, lower_rect_local.height,
        (lower_rect_local.inclination + container.inclination) % math.pi,
    )
    lower = float(a)

    # hunt: snap the empty axis rectangle onto every level grid compatible
    # with inclination 0; a member inside an empty rectangle is empty
    empty_member = None
    if a >= params.area_lo and lower_rect.inclination in (0.0,) and is_axis_body:
        empty_member = _member_inside_axis_rect(body, params, rx0, rx1, ry0, ry1)
        if empty_member is not None and empty_member.contains_points(
            sample.points, "open"
        ).any():
            empty_member = None
    if empty_member is not None:
        return MaxRectReport(lower, lower_rect, EMPTY_MEMBER, math.inf,
                             empty_member=empty_member)

    if params.levels > level_budget:
        return MaxRectReport(lower, lower_rect, UNDECIDED, math.inf)

    member = _scan_all_levels(body, params, sample.points)
    if member is not None:
        if not member.contains_points(sample.points, "open").any():
            lower = max(lower, member.area)
            return MaxRectReport(lower, lower_rect, EMPTY_MEMBER, math.inf,
                                 empty_member=member, levels_scanned=params.levels)
    if member is None:
        return MaxRectReport(lower, lower_rect, CERTIFIED, params.area_hi,
                             levels_scanned=params.levels)
    return MaxRectReport(lower, lower_rect, UNDECIDED, math.inf,
                         levels_scanned=params.levels)


def _member_inside_axis_rect(body: ConvexBody, params: NetParams,
                             rx0: float, rx1: float, ry0: float, ry1: float):
    """Net member of some inclination-0 level inside the given axis
    rectangle, found by snapping the rectangle center to each level grid."""
    w_r = rx1 - rx0
    h_r = ry1 - ry0
    cx = 0.5 * (rx0 + rx1)
    cy = 0.5 * (ry0 + ry1)
    for m in range(params.M - 2, -2, -1):
        w, h = params.level_dims(m)
        if w > w_r or h > h_r:
            continue
        dx, dy = params.level_deltas(m)
        gx = round(cx / dx) * dx
        gy = round(cy / dy) * dy
        if (gx - w / 2.0 >= rx0 - 1e-15 and gx + w / 2.0 <= rx1 + 1e-15
                and gy - h / 2.0 >= ry0 - 1e-15 and gy + h / 2.0 <= ry1 + 1e-15):
            member = OrientedRect((gx, gy), w, h, 0.0)
            if body_contains_rect(body, member, tol=1e-12):
                return member
    return None


def _scan_all_levels(body: ConvexBody, params: NetParams, points: np.ndarray):
    """Exhaustive emptiness scan; returns the first empty member or None."""
    pts = np.asarray(points, dtype=float)
    for t in range(params.t_count):
        theta = t * params.theta0
        rotated = AffineMap.rotation(-theta).apply(pts) if len(pts) else pts
        if len(rotated):
            order = np.argsort(rotated[:, 1], kind="stable")
            px = np.ascontiguousarray(rotated[order, 0])
            py = np.ascontiguousarray(rotated[order, 1])
        else:
            px = np.empty(0)
            py = np.empty(0)
        for m in range(-1, params.M - 1):
            poly = _valid_center_polygon(body, params, m, t)
            if poly is None:
                continue
            w, h = params.level_dims(m)
            dx, dy = params.level_deltas(m)
            gx, gy = _kernels.level_first_uncovered(
                px, py, w, h, dx, dy,
                np.ascontiguousarray(poly[:, 0]), np.ascontiguousarray(poly[:, 1]),
            )
            if not math.isnan(gx):
                center = AffineMap.rotation(theta).apply(np.array([gx, gy]))
                return OrientedRect(tuple(center), w, h, theta)
    return None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def net_to_jsonl(net: RectNet) -> str:
    lines = []
    for (m, t), sl in net.level_index.items():
        for r in net.rects[sl]:
            lines.append(json.dumps(
                {"m": m, "t": t, "center": list(r.center), "w": r.width,
                 "h": r.height, "theta": r.inclination}
            ))
    return "\n".join(lines) + ("\n" if lines else "")


def net_from_jsonl(text: str, params: NetParams) -> RectNet:
    rects = []
    level_index = {}
    for line in text.strip().splitlines():
        d = json.loads(line)
        key = (d["m"], d["t"])
        if key not in level_index:
            level_index[key] = [len(rects), len(rects)]
        rects.append(OrientedRect(tuple(d["center"]), d["w"], d["h"], d["theta"]))
        level_index[key][1] = len(rects)
    return RectNet(params, rects, {k: slice(v[0], v[1]) for k, v in level_index.items()})
