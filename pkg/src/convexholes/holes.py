"""Empty convex polygons with vertices in the sample, the empty-strip
quadrilateral construction, and two-sided bounds for the largest convex hole.

Emptiness is always taken on open interiors: sample points may lie on the
boundary of a hole.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .geometry import ConvexBody, OrientedRect, orient_sign, shoelace_area
from .rect_nets import NetParams, net_max_empty_rect, make_net_params
from .sampling import PointSample


class TooManyPoints(ValueError):
    """Oracle input exceeds its enumeration limit."""


@dataclass
class ConvexChain:
    """Convex polygon with vertices drawn from the sample."""

    vertices: np.ndarray
    area: float
    empty_verified: bool = False

    @staticmethod
    def from_indices(points: np.ndarray, idx) -> "ConvexChain":
        verts = points[np.asarray(idx, dtype=int)]
        return ConvexChain(verts, abs(shoelace_area(verts)))


def verify_chain(chain: ConvexChain, points: np.ndarray) -> bool:
    """Convex position plus open-interior emptiness against the full sample."""
    v = chain.vertices
    k = len(v)
    if k < 3:
        return True
    sgn = 0
    for i in range(k):
        a, b, c = v[i], v[(i + 1) % k], v[(i + 2) % k]
        s = orient_sign(a[0], a[1], b[0], b[1], c[0], c[1])
        if s == 0:
            continue
        if sgn == 0:
            sgn = s
        elif s != sgn:
            return False
    if sgn == 0:
        return chain.area == 0.0
    body_v = v if sgn > 0 else v[::-1]
    keep = []
    m = len(body_v)
    for i in range(m):
        a, b, c = body_v[(i - 1) % m], body_v[i], body_v[(i + 1) % m]
        if orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]) != 0:
            keep.append(i)
    if len(keep) < 3:
        return chain.area == 0.0
    hull = ConvexBody(body_v[keep])
    return not hull.contains_many(points, "open").any()


# ---------------------------------------------------------------------------
# maximum-area empty convex polygon (exact DP)
# ---------------------------------------------------------------------------


def polymax(sample: PointSample, body: ConvexBody | None = None,
            max_exact_n: int = 300):
    """Maximum-area convex polygon with vertices in the sample and no sample
    point strictly inside, by a fan DP over each bottom anchor.

    Exact up to ``max_exact_n`` points; beyond that the DP runs on the
    anchors adjacent to the largest empty axis-aligned rectangles only and
    the result is flagged as a lower bound.
    Returns (chain, area, exact_flag).
    """
    pts = sample.points if isinstance(sample, PointSample) else np.asarray(sample, float)
    n = len(pts)
    if n < 3:
        return ConvexChain(pts.copy(), 0.0, True), 0.0, True
    exact = n <= max_exact_n
    if exact:
        anchors = range(n)
    else:
        anchors = _pruned_anchors(pts, max_exact_n)
    best_area = 0.0
    best_chain = None
    order_key = np.lexsort((pts[:, 0], pts[:, 1]))
    rank = np.empty(n, dtype=int)
    rank[order_key] = np.arange(n)
    for a_idx in anchors:
        area, chain_idx = _anchor_best(pts, a_idx, rank)
        if area > best_area:
            best_area = area
            best_chain = chain_idx
    if best_chain is None:
        # all collinear: degenerate two-point chain of area zero
        chain = ConvexChain(pts[:2].copy(), 0.0, True)
        return chain, 0.0, exact
    chain = ConvexChain.from_indices(pts, best_chain)
    chain.empty_verified = verify_chain(chain, pts)
    assert chain.empty_verified
    return chain, best_area, exact


def _pruned_anchors(pts: np.ndarray, budget: int):
    """Anchor subset for lower-bound mode: points bordering the emptiest
    axis-aligned cells of a coarse occupancy grid."""
    n = len(pts)
    g = max(2, int(math.sqrt(n / 4)))
    ij = np.clip((pts * g).astype(int), 0, g - 1)
    counts = np.zeros((g, g), dtype=int)
    np.add.at(counts, (ij[:, 0], ij[:, 1]), 1)
    score = counts[ij[:, 0], ij[:, 1]]
    return list(np.argsort(score, kind="stable")[:budget])


def _anchor_best(pts: np.ndarray, a_idx: int, rank: np.ndarray):
    """Best empty convex fan anchored at pts[a_idx] over candidates that are
    lexicographically above the anchor (by (y, x))."""
    n = len(pts)
    a = pts[a_idx]
    cand = [i for i in range(n) if rank[i] > rank[a_idx]]
    if len(cand) < 2:
        return 0.0, None
    rel = pts[cand] - a
    ang = np.arctan2(rel[:, 1], rel[:, 0])
    r2 = (rel ** 2).sum(axis=1)
    order = np.lexsort((r2, ang))
    cand = np.asarray(cand, dtype=np.int64)[order]
    k = len(cand)
    tri_block, seg_block = _blocks(pts, a_idx, cand)
    dp, choice = _dp_tables(pts, a_idx, cand, tri_block, seg_block)
    best = float(dp.max()) if dp.size else 0.0
    if best <= 0.0:
        return 0.0, None
    best_ij = np.unravel_index(int(np.argmax(dp)), dp.shape)
    # reconstruct the chain
    i, j = best_ij
    chain = [int(cand[j]), int(cand[i])]
    while choice[i, j] >= 0:
        w = int(choice[i, j])
        chain.append(int(cand[w]))
        i, j = w, i
    chain.append(a_idx)
    chain.reverse()
    return best, chain


def _blocks(pts, a_idx, cand):
    """tri_block[i, j]: some sample point strictly inside (a, cand_i,
    cand_j); seg_block[i]: some sample point on the open segment (a, cand_i).
    """
    a = pts[a_idx]
    k = len(cand)
    tri_block = np.zeros((k, k), dtype=np.bool_)
    seg_block = np.zeros(k, dtype=np.bool_)
    others = np.ascontiguousarray(pts)
    _kernels.polymax_blocks(others, a_idx, np.ascontiguousarray(cand),
                            np.ascontiguousarray(pts[cand]), float(a[0]), float(a[1]),
                            tri_block, seg_block)
    return tri_block, seg_block


def _dp_tables(pts, a_idx, cand, tri_block, seg_block):
    a = pts[a_idx]
    k = len(cand)
    dp = np.full((k, k), -1.0)
    choice = np.full((k, k), -2, dtype=np.int64)
    _kernels.polymax_dp(np.ascontiguousarray(pts[cand]), float(a[0]), float(a[1]),
                        tri_block, seg_block, dp, choice)
    return dp, choice


def polymax_oracle(points, blockers=None) -> float:
    """Subset enumeration: max hull area over vertex subsets in convex
    position whose open hull interior avoids every point.  Limited to 12
    vertex candidates.

    ``blockers`` defaults to the vertex set itself; passing a superset
    checks emptiness against extra points that are not vertex candidates
    (adding blockers can only shrink the result).
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n > 12:
        raise TooManyPoints("oracle accepts at most 12 points")
    if n < 3:
        return 0.0
    blk = pts if blockers is None else np.asarray(blockers, dtype=float).reshape(-1, 2)
    best = 0.0
    idx = list(range(n))
    for r in range(3, n + 1):
        for sub in itertools.combinations(idx, r):
            verts = pts[list(sub)]
            hull = _hull_or_none(verts)
            if hull is None or len(hull) != r:
                continue
            area = abs(shoelace_area(hull))
            if area <= best:
                continue
            hb = ConvexBody(hull)
            if len(blk) == 0 or not hb.contains_many(blk, "open").any():
                best = area
    return best


def _hull_or_none(verts):
    from .geometry import _convex_hull

    try:
        return _convex_hull(verts)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# empty-strip quadrilateral construction
# ---------------------------------------------------------------------------


@dataclass
class StripDecomposition:
    t: int
    width: float
    empty_indices: np.ndarray


@dataclass
class StripQuadReport:
    quad: ConvexChain | None
    area: float
    strip_index: int | None
    band_event: bool
    decomposition: StripDecomposition
    q: int
    per_j: list
    consecutive_empty: bool
    disjoint_point_sets: bool

    @property
    def found(self) -> bool:
        return self.quad is not None


def strip_quadrilateral(sample: PointSample, epsilon: float, delta: float,
                        body: ConvexBody | None = None) -> StripQuadReport:
    """Empty convex quadrilateral from the two nearest points on each side
    of every fourth empty strip of the unit square.

    Per eligible strip the four y-coordinates are checked against the
    delta-bands (the band event guarantees area (1-2delta) times the strip
    width); the returned quadrilateral is whichever candidate first passes
    direct verification of convexity, open-interior emptiness, and the area
    floor (1-2delta)(1-eps)log(n)/n, with the band outcome reported per
    strip.
    """
    if body is not None:
        v = body.vertices
        if not (len(v) == 4 and v.min() == 0.0 and v.max() == 1.0):
            raise ValueError("strip construction is defined on the unit square")
    pts = sample.points
    n = sample.n
    logn = math.log(max(n, 3))
    t = max(1, round(n / ((1.0 - epsilon) * logn)))
    width = 1.0 / t
    strip_of = np.clip((pts[:, 0] * t).astype(int), 0, t - 1)
    counts = np.bincount(strip_of, minlength=t)
    empty_idx = np.nonzero(counts == 0)[0]
    p = len(empty_idx)
    decomp = StripDecomposition(t, width, empty_idx)
    q = max(0, (p - 2) // 4)
    consecutive = bool(np.any(np.diff(empty_idx) == 1)) if p >= 2 else False

    order_x = np.argsort(pts[:, 0], kind="stable")
    xs = pts[order_x, 0]
    floor_area = (1.0 - 2.0 * delta) * (1.0 - epsilon) * logn / n
    per_j = []
    used_sets = []
    quad = None
    area = 0.0
    hit_strip = None
    hit_band = False
    if q >= 1:
        strip_plan = [(j, int(empty_idx[4 * j - 1])) for j in range(1, q + 1)]
    else:
        # too few empty strips for the every-fourth schedule: degenerate
        # fallback scans each empty strip directly
        strip_plan = [(j + 1, int(sidx)) for j, sidx in enumerate(empty_idx)]
    for j, sidx in strip_plan:
        lo = sidx * width
        hi = (sidx + 1) * width
        il = np.searchsorted(xs, lo, side="left")
        ir = np.searchsorted(xs, hi, side="right")
        if il < 2 or ir > n - 2:
            per_j.append((j, sidx, False, False, 0.0))
            continue
        left_pair = order_x[il - 2:il]
        right_pair = order_x[ir:ir + 2]
        lpts = pts[left_pair]
        rpts = pts[right_pair]
        band = bool(
            (max(lpts[0, 1], lpts[1, 1]) > 1.0 - delta)
            and (min(lpts[0, 1], lpts[1, 1]) < delta)
            and (max(rpts[0, 1], rpts[1, 1]) > 1.0 - delta)
            and (min(rpts[0, 1], rpts[1, 1]) < delta)
        )
        l_top, l_bot = (lpts[0], lpts[1]) if lpts[0, 1] >= lpts[1, 1] else (lpts[1], lpts[0])
        r_top, r_bot = (rpts[0], rpts[1]) if rpts[0, 1] >= rpts[1, 1] else (rpts[1], rpts[0])
        verts = np.array([l_bot, r_bot, r_top, l_top])
        cand = ConvexChain(verts, abs(shoelace_area(verts)))
        ok = bool(cand.area >= floor_area and verify_chain(cand, pts))
        per_j.append((j, sidx, band, ok, float(cand.area)))
        used_sets.append(set(map(int, np.concatenate([left_pair, right_pair]))))
        if ok and quad is None:
            cand.empty_verified = True
            quad = cand
            area = cand.area
            hit_strip = sidx
            hit_band = band
    disjoint = all(
        not (s1 & s2) for a_i, s1 in enumerate(used_sets) for s2 in used_sets[a_i + 1:]
    )
    return StripQuadReport(quad, area, hit_strip, hit_band, decomp, q, per_j,
                           consecutive, disjoint)


# ---------------------------------------------------------------------------
# convex hole bounds (two-sided)
# ---------------------------------------------------------------------------


@dataclass
class HoleBoundsReport:
    lower: float
    upper: float
    lower_source: str
    rect_status: str
    components: dict


def convex_hole_bounds(sample: PointSample, body: ConvexBody, epsilon: float,
                       shapes: dict | None = None,
                       polymax_mode: str = "auto",
                       rect_params: NetParams | None = None,
                       homothet_rounds: int = 2) -> HoleBoundsReport:
    """Bracket for the largest-area convex hole.

    Lower bound: best verified empty homothet over a shape dictionary
    (square, 64-gon disk, 2:1 rectangle) and, when enabled, the exact empty
    convex polygon.  Upper bound: twice the rectangle-net certified bound
    (every convex set contains a rectangle of half its area), +inf when the
    net certificate does not hold.
    """
    from .homothet import largest_empty_homothet

    n = sample.n
    if shapes is None:
        shapes = default_shape_dictionary()
    components = {}
    lower = 0.0
    source = "none"
    for name, shape in shapes.items():
        res = largest_empty_homothet(body, shape, sample, epsilon,
                                     rounds=homothet_rounds, certify=False)
        components[f"homothet_{name}"] = res.area
        if res.area > lower:
            lower = res.area
            source = f"homothet_{name}"
    run_polymax = polymax_mode == "always" or (polymax_mode == "auto" and n <= 300)
    if run_polymax and n >= 3:
        _, pa, exact = polymax(sample)
        components["polymax"] = pa
        if pa > lower:
            lower = pa
            source = "polymax"
    if rect_params is None:
        try:
            rect_params = make_net_params(max(n, 16), epsilon, body)
        except ValueError:
            rect_params = None
    if rect_params is not None:
        rect_report = net_max_empty_rect(body, sample, rect_params)
        components["maxrect_lower"] = rect_report.lower
        status = rect_report.status
        upper = 2.0 * rect_report.upper_certified
    else:
        status = "unavailable"
        upper = math.inf
    if lower > upper:
        raise AssertionError(f"lower bound {lower} exceeds certified upper {upper}")
    return HoleBoundsReport(lower, upper, source, status, components)


def default_shape_dictionary() -> dict:
    return {
        "square": ConvexBody([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        "disk64": ConvexBody.regular_polygon(64, 1.0),
        "rect2": ConvexBody([(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]),
    }
