"""Largest empty homothet of a convex shape: lattice witness nets, scale
search for verified empty placements, the partition-based lower bound, and
an exact disk oracle.

The witness net lives in an affine frame where the circumscribed rectangle
of the inner reference shape is a square: translates of the inner-offset
shape sit on a lattice of spacing omega, and every translate of the
reference shape inside the body contains one of them.  Non-emptiness of all
members certifies the upper bound (1+3eps)log(n)/n for holes homothetic to
the shape; an empty member is a verified counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .geometry import (
    AffineMap,
    ConvexBody,
    OrientedRect,
    halfplane_polygon,
    largest_inscribed_axis_rect,
    lassak_rectangles,
    solve_inner_offset,
)
from .sampling import PointSample, SeedSpec, sample_uniform


class ShapeTooEccentric(RuntimeError):
    """Constructed lattice spacing violates its guaranteed lower bound."""


class CoverageViolation(AssertionError):
    """A translate of the reference shape failed to contain a net member."""


class TooManyPoints(ValueError):
    """Oracle input exceeds its enumeration limit."""


NOT_CERTIFIED = float("inf")


@dataclass(frozen=True)
class HomothetPlacement:
    """Placed copy: scale * shape + offset (no rotation)."""

    scale: float
    offset: tuple
    shape_id: str = "L"


@dataclass
class HomothetNet:
    """Witness family for empty homothets of a reference shape.

    ``frame`` maps body coordinates into the square frame; lattice points,
    member and parent shapes are stored there.  ``member_offsets`` are the
    member vertices relative to the parent centroid, so member i is
    ``lattice_points[i] + member_offsets``.
    """

    n: int
    epsilon: float
    omega: float
    frame: AffineMap
    body_frame: ConvexBody
    lattice_points: np.ndarray
    member_offsets: np.ndarray
    parent_offsets: np.ndarray
    shrunken_shape: ConvexBody
    area_member: float
    area_target: float

    @property
    def placement_count(self) -> int:
        return len(self.lattice_points)

    @property
    def placements(self) -> list:
        inv = self.frame.inverse()
        base = self.shrunken_shape.centroid
        return [
            HomothetPlacement(1.0, tuple(np.asarray(p) - base), "shrunken")
            for p in inv.apply(self.lattice_points)
        ]

    def member_vertices(self, idx: int) -> np.ndarray:
        """Vertices of member ``idx`` in body coordinates."""
        return self.frame.inverse().apply(self.lattice_points[idx] + self.member_offsets)


def _scaled_copy(shape: ConvexBody, target_area: float) -> ConvexBody:
    s = math.sqrt(target_area / shape.area)
    return ConvexBody(shape.vertices * s)


def build_homothet_net(body: ConvexBody, shape: ConvexBody, n: int,
                       epsilon: float) -> HomothetNet:
    """Witness net for holes homothetic to ``shape`` of area
    (1+3eps)log(n)/n inside a unit-area body.

    Chain: scale the shape to the target area; inner-offset to area
    (1+2eps)log(n)/n (the parent shape); map its circumscribed Lassak
    rectangle to an axis square by a unimodular affine map; inner-offset
    again to (1+eps)log(n)/n, which fixes omega; keep every lattice
    translate whose member lies in the body.
    """
    if n < 16:
        raise ValueError("n must be >= 16")
    if not (0.0 < epsilon <= 0.1):
        raise ValueError("epsilon must lie in (0, 0.1]")
    if abs(body.area - 1.0) > 1e-9:
        raise ValueError("body must have unit area")
    logn = math.log(n)
    a_target = (1.0 + 3.0 * epsilon) * logn / n
    a_mid = (1.0 + 2.0 * epsilon) * logn / n
    a_member = (1.0 + epsilon) * logn / n
    if a_target >= 1.0:
        raise ValueError("target hole area exceeds the body area")

    scaled = _scaled_copy(shape, a_target)
    _, parent = solve_inner_offset(scaled, a_mid)
    _, circ = lassak_rectangles(parent)
    circ = circ.scaled_to_area(2.0 * a_mid)
    theta = circ.inclination
    sx = math.sqrt(circ.height / circ.width)
    frame = AffineMap(np.diag([sx, 1.0 / sx]), np.zeros(2)).compose(
        AffineMap.rotation(-theta)
    )
    parent_f = parent.transformed(frame)
    omega, member_f = solve_inner_offset(parent_f, a_member)
    bound = (epsilon / 8.0) * math.sqrt(logn / n)
    if omega <= bound:
        raise ShapeTooEccentric(f"omega {omega} at or below its bound {bound}")
    body_f = body.transformed(frame)
    centroid = parent_f.centroid
    member_offsets = member_f.vertices - centroid
    parent_offsets = parent_f.vertices - centroid
    lattice = _contained_lattice(body_f, member_offsets, omega)
    cap = (64.0 / epsilon ** 2) * (n / logn)
    if len(lattice) > cap:
        raise AssertionError(f"|net| {len(lattice)} exceeds packing bound {cap:.3g}")
    return HomothetNet(
        n=n,
        epsilon=epsilon,
        omega=omega,
        frame=frame,
        body_frame=body_f,
        lattice_points=lattice,
        member_offsets=member_offsets,
        parent_offsets=parent_offsets,
        shrunken_shape=member_f.transformed(frame.inverse()),
        area_member=a_member,
        area_target=a_target,
    )


def _contained_lattice(body_f: ConvexBody, member_offsets: np.ndarray, omega: float):
    """Lattice points p of omega*Z^2 (inside the body) whose member fits."""
    lo, hi = body_f.bounding_box()
    ii = np.arange(math.ceil(lo[0] / omega), math.floor(hi[0] / omega) + 1) * omega
    jj = np.arange(math.ceil(lo[1] / omega), math.floor(hi[1] / omega) + 1) * omega
    if len(ii) == 0 or len(jj) == 0:
        return np.empty((0, 2))
    inward = body_f._inward
    offs = body_f._offsets
    keep_rows = []
    for j in jj:
        pts = np.stack([ii, np.full(len(ii), j)], axis=1)
        ok = np.all(pts @ inward.T - offs >= 0.0, axis=1)
        for off in member_offsets:
            ok &= np.all((pts + off) @ inward.T - offs >= -1e-12, axis=1)
        if ok.any():
            keep_rows.append(pts[ok])
    if not keep_rows:
        return np.empty((0, 2))
    return np.concatenate(keep_rows, axis=0)


# ---------------------------------------------------------------------------
# exact emptiness decision over the net
# ---------------------------------------------------------------------------


@dataclass
class NetEmptinessReport:
    all_non_empty: bool
    empty_index: int | None
    empty_vertices: np.ndarray | None
    exact_checks: int


def net_emptiness(net: HomothetNet, sample: PointSample) -> NetEmptinessReport:
    """Exact decision whether every member contains a sample point.

    Members are screened against an integral image of the points: a count
    over a grid-aligned box inside the member proves non-emptiness; the
    survivors get exact polygon tests.
    """
    lat = net.lattice_points
    if len(lat) == 0:
        return NetEmptinessReport(True, None, None, 0)
    if sample.n == 0:
        return NetEmptinessReport(False, 0, net.member_vertices(0), 0)
    pts = net.frame.apply(sample.points)
    offs = net.member_offsets
    member = ConvexBody(offs)
    _, bx0, bx1, by0, by1 = largest_inscribed_axis_rect(offs)

    # integral image at a resolution fine enough for the inner box
    delta = min(bx1 - bx0, by1 - by0) / 4.0
    lo = np.minimum(pts.min(axis=0), lat.min(axis=0) + np.array([bx0, by0])) - delta
    hi = np.maximum(pts.max(axis=0), lat.max(axis=0) + np.array([bx1, by1])) + delta
    nx = int((hi[0] - lo[0]) / delta) + 2
    ny = int((hi[1] - lo[1]) / delta) + 2
    occ = np.zeros((nx + 1, ny + 1), dtype=np.int64)
    gi = ((pts[:, 0] - lo[0]) / delta).astype(np.int64)
    gj = ((pts[:, 1] - lo[1]) / delta).astype(np.int64)
    np.add.at(occ, (gi + 1, gj + 1), 1)
    integ = occ.cumsum(axis=0).cumsum(axis=1)

    # grid-aligned box fully inside [p+bx0, p+bx1] x [p+by0, p+by1]
    i0 = np.ceil((lat[:, 0] + bx0 - lo[0]) / delta).astype(np.int64)
    i1 = np.floor((lat[:, 0] + bx1 - lo[0]) / delta).astype(np.int64)
    j0 = np.ceil((lat[:, 1] + by0 - lo[1]) / delta).astype(np.int64)
    j1 = np.floor((lat[:, 1] + by1 - lo[1]) / delta).astype(np.int64)
    i0 = np.clip(i0, 0, nx)
    i1 = np.clip(i1, 0, nx)
    j0 = np.clip(j0, 0, ny)
    j1 = np.clip(j1, 0, ny)
    cnt = integ[i1, j1] - integ[i0, j1] - integ[i1, j0] + integ[i0, j0]
    undecided = np.nonzero(cnt <= 0)[0]

    order = np.argsort(pts[:, 0], kind="stable")
    sx = pts[order, 0]
    mlo = offs.min(axis=0)
    mhi = offs.max(axis=0)
    inward = member._inward
    moffs = member._offsets
    for k in undecided:
        p = lat[k]
        a0 = np.searchsorted(sx, p[0] + mlo[0], side="left")
        a1 = np.searchsorted(sx, p[0] + mhi[0], side="right")
        local = pts[order[a0:a1]]
        local = local[(local[:, 1] >= p[1] + mlo[1]) & (local[:, 1] <= p[1] + mhi[1])]
        if len(local) == 0 or not np.any(
            np.all((local - p) @ inward.T - moffs >= 0.0, axis=1)
        ):
            return NetEmptinessReport(False, int(k), net.member_vertices(int(k)),
                                      len(undecided))
    return NetEmptinessReport(True, None, None, len(undecided))


# ---------------------------------------------------------------------------
# translate-cover verification
# ---------------------------------------------------------------------------


@dataclass
class CoverReport:
    trials: int
    failures: int
    max_center_gap: float


def verify_translate_cover(net: HomothetNet, trials: int, seed: SeedSpec,
                           include_corners: bool = True) -> CoverReport:
    """Translates of the parent shape inside the body must contain the
    member at the nearest lattice point; raises CoverageViolation on any
    failure.  Corner placements of the admissible region are always
    included.
    """
    body_f = net.body_frame
    sup = np.max(net.parent_offsets @ body_f._inward.T, axis=0)
    admissible = halfplane_polygon(body_f.vertices, body_f._inward,
                                   body_f._offsets + sup)
    if admissible is None:
        raise CoverageViolation("no translate of the parent shape fits the body")
    adm = ConvexBody(admissible)
    centers = sample_uniform(adm, trials, seed).points
    if include_corners:
        centers = np.concatenate([centers, adm.vertices], axis=0)
    om = net.omega
    failures = 0
    max_gap = 0.0
    for c in centers:
        p = np.array([round(c[0] / om) * om, round(c[1] / om) * om])
        max_gap = max(max_gap, float(np.linalg.norm(p - c)))
        translate = ConvexBody(c + net.parent_offsets)
        member = p + net.member_offsets
        if not np.all(translate.contains_many(member, "closed")):
            failures += 1
    if failures:
        raise CoverageViolation(
            f"{failures}/{len(centers)} translates missed their member"
        )
    return CoverReport(len(centers), failures, max_gap)


# ---------------------------------------------------------------------------
# empty-placement search over scales
# ---------------------------------------------------------------------------


def _max_inscribed_scale(body: ConvexBody, shape0: ConvexBody):
    """Largest centroid-anchored homothet of shape0 inside the body (LP)."""
    N = body._inward
    d = body._offsets
    sup = np.max(shape0.vertices @ N.T, axis=0)
    A_ub = np.column_stack([-N, sup])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=A_ub, b_ub=-d,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if not res.success:
        raise RuntimeError("inscribed-scale LP failed")
    cx, cy, s = res.x
    return float(s), np.array([cx, cy])


def _inradius(shape0: ConvexBody) -> float:
    c = shape0.centroid
    return float(np.min(c @ shape0._inward.T - shape0._offsets))


def find_empty_placement(body: ConvexBody, shape0: ConvexBody, scale: float,
                         points: np.ndarray, spacing: float,
                         window=None):
    """Center of a verified empty, contained placement of scale*shape0 on a
    lattice of the given spacing, or None.

    Non-empty centers are exactly those covered by a reflected copy of the
    placement around some sample point; the exclusion regions are rasterized
    onto the lattice, and the returned candidate is re-verified exactly.
    """
    verts_s = scale * shape0.vertices
    sup = np.max(verts_s @ body._inward.T, axis=0)
    admissible = halfplane_polygon(body.vertices, body._inward, body._offsets + sup)
    if admissible is None:
        return None
    adm = ConvexBody(admissible)
    lo, hi = adm.bounding_box()
    if window is not None:
        c0, rad = window
        lo = np.maximum(lo, np.asarray(c0) - rad)
        hi = np.minimum(hi, np.asarray(c0) + rad)
        if (lo > hi).any():
            return None
    i0 = math.ceil(lo[0] / spacing)
    i1 = math.floor(hi[0] / spacing)
    j0 = math.ceil(lo[1] / spacing)
    j1 = math.floor(hi[1] / spacing)
    if i1 < i0 or j1 < j0:
        return None
    nx = i1 - i0 + 1
    ny = j1 - j0 + 1
    covered = np.zeros((nx, ny), dtype=np.bool_)
    refl = np.ascontiguousarray(-verts_s[::-1])  # reflected placement, ccw
    if len(points):
        _kernels.mark_covered_centers(
            covered, np.ascontiguousarray(points), refl, float(spacing), i0, j0
        )
    gx = (np.arange(i0, i1 + 1) * spacing)[:, None]
    gy = (np.arange(j0, j1 + 1) * spacing)[None, :]
    ok = ~covered
    # admissibility of the remaining candidates
    flat = np.nonzero(ok)
    if len(flat[0]) == 0:
        return None
    cand = np.stack([gx[flat[0], 0], gy[0, flat[1]]], axis=1)
    inside = np.all(cand @ adm._inward.T - adm._offsets >= 0.0, axis=1)
    cand = cand[inside]
    for c in cand[:64]:
        placed = ConvexBody(c + verts_s)
        if len(points) and placed.contains_many(points, "open").any():
            continue
        if not np.all(body.contains_many(c + verts_s, "closed")):
            continue
        return c
    return None


@dataclass
class HomothetSearchResult:
    best: HomothetPlacement
    area: float
    certified_upper: float
    vertices: np.ndarray | None = None

    @property
    def certified(self) -> bool:
        return math.isfinite(self.certified_upper)


def largest_empty_homothet(body: ConvexBody, shape: ConvexBody, sample: PointSample,
                           epsilon: float, rounds: int = 3,
                           spacing: float | None = None,
                           certify: bool = True) -> HomothetSearchResult:
    """Verified empty homothet of near-maximal area plus the certificate
    state of the witness net.

    Scale bisection over lattice placements (12 iterations), followed by
    local refinement rounds on lattices shrunk by 4x each round; every
    returned placement is exactly verified.  ``certified_upper`` equals
    (1+3eps)log(n)/n iff no net member is empty, +inf otherwise.
    """
    n = sample.n
    shape0 = ConvexBody(shape.vertices - shape.centroid)
    a_shape = shape0.area
    pts = sample.points
    s_hi, c_hi = _max_inscribed_scale(body, shape0)

    best_scale = 0.0
    best_center = None
    r_in = _inradius(shape0)
    # the inscribed optimum short-circuits the search for sparse samples
    top = s_hi * (1.0 - 1e-12)
    placed = ConvexBody(c_hi + top * shape0.vertices)
    if (n == 0 or not placed.contains_many(pts, "open").any()) and np.all(
        body.contains_many(placed.vertices, "closed")
    ):
        best_scale, best_center = top, c_hi
    else:
        logn = math.log(max(n, 3))
        if spacing is None:
            spacing = r_in * math.sqrt(logn / max(n, 3) / a_shape) * epsilon / 2.0
        lo, hi = 0.0, s_hi
        probe = min(math.sqrt((1.0 - epsilon) * logn / max(n, 3) / a_shape), 0.5 * s_hi)
        got = None
        for _ in range(60):
            got = find_empty_placement(body, shape0, probe, pts, spacing)
            if got is not None:
                lo, best_scale, best_center = probe, probe, got
                break
            probe *= 0.7
            if probe * r_in < spacing:
                spacing = probe * r_in / 2.0
            if probe <= 1e-12:
                break
        if got is not None:
            for _ in range(12):
                mid = 0.5 * (lo + hi)
                g = find_empty_placement(body, shape0, mid, pts, spacing)
                if g is not None:
                    lo, best_scale, best_center = mid, mid, g
                else:
                    hi = mid
            # a lattice of spacing s misses the optimum by at most
            # 0.7072*s/r_in in scale, which brackets each refinement round
            for r in range(rounds):
                hi_r = min(s_hi, best_scale + 0.7072 * spacing / r_in)
                win = (best_center, 16.0 * spacing)
                spacing /= 4.0
                lo_r = best_scale
                for _ in range(6):
                    mid = 0.5 * (lo_r + hi_r)
                    g = find_empty_placement(body, shape0, mid, pts, spacing,
                                             window=win)
                    if g is not None:
                        lo_r, best_scale, best_center = mid, mid, g
                        win = (best_center, 16.0 * spacing)
                    else:
                        hi_r = mid

    upper = _certified_upper(body, shape, sample, epsilon) if certify else NOT_CERTIFIED
    if best_center is None:
        return HomothetSearchResult(HomothetPlacement(0.0, (0.0, 0.0)), 0.0, upper)
    verts = best_center + best_scale * shape0.vertices
    area = best_scale * best_scale * a_shape
    return HomothetSearchResult(
        HomothetPlacement(best_scale, tuple(best_center)), area, upper, verts
    )


def _certified_upper(body, shape, sample, epsilon):
    if sample.n < 16:
        return NOT_CERTIFIED
    try:
        net = build_homothet_net(body, shape, sample.n, epsilon)
    except ValueError:
        return NOT_CERTIFIED
    rep = net_emptiness(net, sample)
    return net.area_target if rep.all_non_empty else NOT_CERTIFIED


# ---------------------------------------------------------------------------
# partition-based lower-bound construction
# ---------------------------------------------------------------------------


@dataclass
class PartitionLowerReport:
    regions: list
    homothet_flags: np.ndarray
    empty_flags: np.ndarray
    empty_homothet_found: bool
    region_count: int
    sample: PointSample


def lower_bound_partition(body: ConvexBody, shape: ConvexBody, n: int,
                          epsilon: float, seed: SeedSpec) -> PartitionLowerReport:
    """Equal-area partition with at least a third of the regions homothetic
    to the shape, tested for emptiness against a fresh sample.

    The body splits into C cells homothetic to the shape's circumscribed
    Lassak rectangle (C about half the final region count); each such cell
    yields one shape-homothet region of half its area plus a remainder, and
    everything else is re-sliced to the common area.
    """
    from .geometry import equal_area_partition

    logn = math.log(n)
    t_regions = max(2, round(n / ((1.0 - epsilon) * logn)))
    C = max(1, t_regions // 2)
    _, circ = lassak_rectangles(shape)
    cells = equal_area_partition(body, C, circ)
    target = 1.0 / (2.0 * C)
    regions = []
    for reg in cells:
        if reg.is_homothet:
            regions.extend(_split_cell(reg.rect, shape, circ, target))
        else:
            regions.extend(_slice_region(reg, target))
    flags = np.array([getattr(r, "is_homothet", False) for r in regions])
    sample = sample_uniform(body, n, seed)
    empty = np.array([not r.contains_open(sample.points).any() for r in regions])
    return PartitionLowerReport(
        regions, flags, empty, bool((flags & empty).any()), len(regions), sample
    )


class ShapeCellRegion:
    """Homothet of the reference shape carved out of a rectangle cell."""

    __slots__ = ("body", "is_homothet", "area", "placement")

    def __init__(self, verts, placement, area):
        self.body = ConvexBody(verts)
        self.is_homothet = True
        self.area = area
        self.placement = placement

    def contains_open(self, pts):
        return self.body.contains_many(pts, "open")

    def contains_closed(self, pts):
        return self.body.contains_many(pts, "closed")


class CellRemainderRegion:
    """Rectangle cell minus its carved homothet."""

    __slots__ = ("rect", "inner", "is_homothet", "area")

    def __init__(self, rect: OrientedRect, inner: ConvexBody, area: float):
        self.rect = rect
        self.inner = inner
        self.is_homothet = False
        self.area = area

    def contains_open(self, pts):
        return self.rect.contains_points(pts, "open") & ~self.inner.contains_many(
            pts, "closed"
        )

    def contains_closed(self, pts):
        return self.rect.contains_points(pts, "closed") & ~self.inner.contains_many(
            pts, "open"
        )


def _split_cell(rect: OrientedRect, shape: ConvexBody, circ: OrientedRect, target):
    """Cell (area 2*target, homothet of circ) -> shape homothet of area
    target plus the remainder."""
    # map circ -> rect: uniform scale + rotation is trivial since the cell
    # grid uses circ's own inclination; anchor via centers
    s = math.sqrt(rect.area / circ.area)
    shape_scaled = ConvexBody(
        (shape.vertices - np.array(circ.center)) * s + np.array(rect.center)
    )
    # shrink about its centroid to the exact half-cell area
    c = shape_scaled.centroid
    lam = math.sqrt(target / shape_scaled.area)
    verts = c + (shape_scaled.vertices - c) * lam
    inner = ConvexBody(verts)
    placement = HomothetPlacement(s * lam, tuple(c - (np.array(circ.center)) * 0.0))
    return [
        ShapeCellRegion(verts, placement, target),
        CellRemainderRegion(rect, inner, target),
    ]


def _slice_region(region, target):
    """Split a slab region into equal-area sub-slabs of the target area."""
    k = max(1, round(region.area / target))
    if k == 1:
        return [region]
    from .geometry import SlabRegion, cells_band_profile, rest_area_below

    body = region.body
    theta = region.theta
    cells = region.cells
    profile = cells_band_profile(cells, theta)

    base = rest_area_below(body, theta, region.x_lo, profile)
    cuts = [region.x_lo]
    for t in range(1, k):
        want = base + t * target
        lo, hi = cuts[-1], region.x_hi
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if rest_area_below(body, theta, mid, profile) < want:
                lo = mid
            else:
                hi = mid
        cuts.append(0.5 * (lo + hi))
    cuts.append(region.x_hi)
    return [
        SlabRegion(body, theta, cuts[t], cuts[t + 1], cells, target)
        for t in range(k)
    ]


# ---------------------------------------------------------------------------
# exact disk oracle
# ---------------------------------------------------------------------------


def largest_empty_disk_oracle(container: OrientedRect, points) -> float:
    """Radius of the largest open disk with no point inside it, fitting in
    an axis-aligned rectangular container.

    The radius function r(c) = min(nearest-point distance, wall distances)
    is piecewise smooth; its maximum is attained where three constraints
    meet.  Candidates: circumcenters of point triples, two-point/one-wall
    and one-point/two-wall equidistant solutions, point/wall midpoints,
    wall-pair midlines meeting point bisectors, and container corners.
    Limited to 500 points.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) > 500:
        raise TooManyPoints("disk oracle accepts at most 500 points")
    cx, cy = container.center
    x0, x1 = cx - container.width / 2.0, cx + container.width / 2.0
    y0, y1 = cy - container.height / 2.0, cy + container.height / 2.0
    if len(pts) == 0:
        return 0.5 * min(x1 - x0, y1 - y0)
    n = len(pts)
    cands = [np.array([[0.5 * (x0 + x1), 0.5 * (y0 + y1)]]),
             np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])]

    if n >= 3:
        idx = np.array([(i, j, k) for i in range(n) for j in range(i + 1, n)
                        for k in range(j + 1, n)])
        a, b, c = pts[idx[:, 0]], pts[idx[:, 1]], pts[idx[:, 2]]
        d = 2.0 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1])
                   + c[:, 0] * (a[:, 1] - b[:, 1]))
        ok = np.abs(d) > 1e-30
        a2, b2, c2 = (a ** 2).sum(1), (b ** 2).sum(1), (c ** 2).sum(1)
        ux = a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1]) + c2 * (a[:, 1] - b[:, 1])
        uy = a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0]) + c2 * (b[:, 0] - a[:, 0])
        cands.append(np.stack([ux[ok] / d[ok], uy[ok] / d[ok]], axis=1))

    # two points + one wall: center on the bisector with |c-a| = wall dist
    if n >= 2:
        pair = np.array([(i, j) for i in range(n) for j in range(i + 1, n)])
        a, b = pts[pair[:, 0]], pts[pair[:, 1]]
        for wall, axis, sgn in ((x0, 0, 1.0), (x1, 0, -1.0), (y0, 1, 1.0), (y1, 1, -1.0)):
            out = _bisector_wall_candidates(a, b, wall, axis, sgn)
            if len(out):
                cands.append(out)

    # one point + two walls, one point + one wall (midpoint locus extremes)
    for p in pts:
        cands.append(np.array([
            [p[0], 0.5 * (p[1] + y0)], [p[0], 0.5 * (p[1] + y1)],
            [0.5 * (p[0] + x0), p[1]], [0.5 * (p[0] + x1), p[1]],
        ]))
        for wx, sx in ((x0, 1.0), (x1, -1.0)):
            for wy, sy in ((y0, 1.0), (y1, -1.0)):
                dx0, dy0 = p[0] - wx, p[1] - wy
                B = -2.0 * (sx * dx0 + sy * dy0)
                C = dx0 * dx0 + dy0 * dy0
                disc = B * B - 4.0 * C
                if disc >= 0.0:
                    rt = math.sqrt(disc)
                    for rr in ((-B + rt) / 2.0, (-B - rt) / 2.0):
                        if rr > 0.0:
                            cands.append(np.array([[wx + sx * rr, wy + sy * rr]]))
    # wall-pair midlines: the two-wall equidistant locus meeting a bisector
    midx, midy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    if n >= 2:
        pair = np.array([(i, j) for i in range(n) for j in range(i + 1, n)])
        a, b = pts[pair[:, 0]], pts[pair[:, 1]]
        mid = 0.5 * (a + b)
        d = b - a
        with np.errstate(divide="ignore", invalid="ignore"):
            # bisector hits x = midx / y = midy
            t1 = (midx - mid[:, 0]) / (-d[:, 1])
            t2 = (midy - mid[:, 1]) / (d[:, 0])
        for t in (t1, t2):
            ok = np.isfinite(t)
            if ok.any():
                c = mid[ok] + t[ok, None] * np.stack([-d[ok, 1], d[ok, 0]], axis=1)
                cands.append(c)

    centers = np.concatenate(cands, axis=0)
    inside = (
        (centers[:, 0] >= x0) & (centers[:, 0] <= x1)
        & (centers[:, 1] >= y0) & (centers[:, 1] <= y1)
    )
    centers = centers[inside]
    best = 0.0
    chunk = 100_000
    for s in range(0, len(centers), chunk):
        cc = centers[s:s + chunk]
        dwall = np.minimum.reduce([
            cc[:, 0] - x0, x1 - cc[:, 0], cc[:, 1] - y0, y1 - cc[:, 1]
        ])
        d2 = ((cc[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        dpt = np.sqrt(d2.min(axis=1))
        best = max(best, float(np.max(np.minimum(dwall, dpt))))
    return best


def _bisector_wall_candidates(a, b, wall, axis, sgn):
    """Centers on each pair bisector with |c-a| equal to the wall distance."""
    mid = 0.5 * (a + b)
    d = b - a
    dirv = np.stack([-d[:, 1], d[:, 0]], axis=1)
    nrm = np.linalg.norm(dirv, axis=1)
    ok0 = nrm > 0
    out = []
    mid, d, dirv, nrm, a = mid[ok0], d[ok0], dirv[ok0] / nrm[ok0, None], nrm[ok0], a[ok0]
    # c = mid + t*dir; |c-a|^2 = (sgn*(c[axis]-wall))^2 -> quadratic in t
    am = mid - a
    e = dirv[:, axis]
    f = sgn * (mid[:, axis] - wall)
    A = 1.0 - e * e
    B = 2.0 * (am * dirv).sum(axis=1) - 2.0 * f * e * sgn * 1.0
    C = (am * am).sum(axis=1) - f * f
    for root in range(2):
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = B * B - 4.0 * A * C
            good = disc >= 0
            t = np.where(
                np.abs(A) > 1e-30,
                (-B + (1 if root == 0 else -1) * np.sqrt(np.abs(disc))) / (2.0 * A),
                np.where(np.abs(B) > 1e-30, -C / np.where(B == 0, 1.0, B), np.nan),
            )
        sel = good & np.isfinite(t)
        if sel.any():
            out.append(mid[sel] + t[sel, None] * dirv[sel])
    if not out:
        return np.empty((0, 2))
    return np.concatenate(out, axis=0)
