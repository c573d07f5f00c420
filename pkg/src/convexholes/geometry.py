"""Planar convex geometry: bodies, oriented rectangles, rectangle sandwiches,
inner-parallel bodies and equal-area partitions.

Conventions used throughout the package:

* polygons are counter-clockwise, strictly convex vertex chains;
* an ``OrientedRect`` stores the extent ``width`` along its inclination axis
  and ``height`` along the perpendicular axis.  In canonical form
  ``width <= height``, so the inclination is the angle of the minor axis
  (the line through the midpoints of the two long sides);
* emptiness / containment decisions go through sign-exact orientation tests
  (floating-point filter with a rational fallback), everything metric is
  double precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog


class ConvergenceFailure(RuntimeError):
    """A direction sweep failed to produce the guaranteed rectangle sandwich."""


class InvalidTarget(ValueError):
    """Requested offset area outside (0, area(body))."""


class TooFewCells(ValueError):
    """Cell count below the constructive threshold of the partition."""


# ---------------------------------------------------------------------------
# sign-exact predicates
# ---------------------------------------------------------------------------

# Shewchuk's filter constant for the 2D orientation determinant.
_ORIENT_EPS = (3.0 + 16.0 * 2.0 ** -53) * 2.0 ** -53


def orient_sign(ax, ay, bx, by, cx, cy) -> int:
    """Sign of the ccw orientation of (a, b, c): +1 left turn, -1 right, 0 collinear.

    Evaluates the determinant in doubles and falls back to exact rational
    arithmetic when the result is below the rounding-error bound, so the
    sign is always correct.
    """
    detl = (ax - cx) * (by - cy)
    detr = (ay - cy) * (bx - cx)
    det = detl - detr
    err = _ORIENT_EPS * (abs(detl) + abs(detr))
    if det > err:
        return 1
    if det < -err:
        return -1
    d = (Fraction(ax) - Fraction(cx)) * (Fraction(by) - Fraction(cy)) - (
        Fraction(ay) - Fraction(cy)
    ) * (Fraction(bx) - Fraction(cx))
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# affine maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine map x -> linear @ x + offset."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        linear = np.asarray(self.linear, dtype=float).reshape(2, 2)
        offset = np.asarray(self.offset, dtype=float).reshape(2)
        if abs(np.linalg.det(linear)) < 1e-300:
            raise ValueError("affine map must have nonzero determinant")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "offset", offset)

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(np.eye(2), np.zeros(2))

    @staticmethod
    def scaling(s: float) -> "AffineMap":
        return AffineMap(np.eye(2) * s, np.zeros(2))

    @staticmethod
    def rotation(theta: float) -> "AffineMap":
        return AffineMap(_rotation(theta), np.zeros(2))

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.offset

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.offset)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """Map equal to applying `other` first, then self."""
        return AffineMap(self.linear @ other.linear, self.linear @ other.offset + self.offset)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    @property
    def is_identity(self) -> bool:
        return np.array_equal(self.linear, np.eye(2)) and np.array_equal(self.offset, np.zeros(2))


# ---------------------------------------------------------------------------
# convex bodies
# ---------------------------------------------------------------------------


class ConvexBody:
    """Strictly convex ccw polygon with at least 3 vertices."""

    __slots__ = ("vertices", "_edges", "_inward", "_offsets")

    def __init__(self, vertices):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
            raise ValueError("ConvexBody needs an (n, 2) array with n >= 3")
        if not np.all(np.isfinite(verts)):
            raise ValueError("vertices must be finite")
        n = verts.shape[0]
        for i in range(n):
            a = verts[i]
            b = verts[(i + 1) % n]
            c = verts[(i + 2) % n]
            if orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]) <= 0:
                raise ValueError(
                    "vertices must form a strictly convex counter-clockwise chain"
                )
        self.vertices = verts
        self.vertices.setflags(write=False)
        d = np.roll(verts, -1, axis=0) - verts
        inward = np.stack([-d[:, 1], d[:, 0]], axis=1)
        inward /= np.linalg.norm(inward, axis=1, keepdims=True)
        self._edges = d
        self._inward = inward
        # interior satisfies inward . x >= offset on every edge
        self._offsets = np.einsum("ij,ij->i", inward, verts)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def from_hull(points) -> "ConvexBody":
        """Convex hull of a point cloud, collinear points dropped."""
        pts = np.asarray(points, dtype=float)
        hull = _convex_hull(pts)
        return ConvexBody(hull)

    @staticmethod
    def unit_square() -> "ConvexBody":
        return ConvexBody([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])

    @staticmethod
    def regular_polygon(k: int, circumradius: float = 1.0, center=(0.0, 0.0)) -> "ConvexBody":
        ang = 2.0 * math.pi * np.arange(k) / k
        cx, cy = center
        return ConvexBody(
            np.stack([cx + circumradius * np.cos(ang), cy + circumradius * np.sin(ang)], axis=1)
        )

    # -- basic metrics --------------------------------------------------------

    @property
    def area(self) -> float:
        return shoelace_area(self.vertices)

    @property
    def perimeter(self) -> float:
        return float(np.linalg.norm(self._edges, axis=1).sum())

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        a = cross.sum() / 2.0
        cx = ((v[:, 0] + w[:, 0]) * cross).sum() / (6.0 * a)
        cy = ((v[:, 1] + w[:, 1]) * cross).sum() / (6.0 * a)
        return np.array([cx, cy])

    def bounding_box(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return lo, hi

    def transformed(self, amap: AffineMap) -> "ConvexBody":
        verts = amap.apply(self.vertices)
        if amap.det < 0:
            verts = verts[::-1]
        return ConvexBody(verts)

    # -- membership -----------------------------------------------------------

    def contains(self, point, mode: str = "closed") -> bool:
        """Half-plane test against every edge; sign-exact at the boundary."""
        px, py = float(point[0]), float(point[1])
        v = self.vertices
        n = len(v)
        strict = mode == "open"
        for i in range(n):
            a = v[i]
            b = v[(i + 1) % n]
            s = orient_sign(a[0], a[1], b[0], b[1], px, py)
            if s < 0 or (strict and s == 0):
                return False
        return True

    def contains_many(self, points, mode: str = "closed") -> np.ndarray:
        """Vectorized membership with an exact re-check in the uncertainty band."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        signed = pts @ self._inward.T - self._offsets  # (m, edges)
        scale = np.abs(pts).max(initial=1.0) + np.abs(self.vertices).max()
        band = 64.0 * np.finfo(float).eps * scale
        if mode == "open":
            inside = np.all(signed > band, axis=1)
            boundary_ish = ~inside & np.all(signed > -band, axis=1)
        else:
            inside = np.all(signed > band, axis=1)
            boundary_ish = ~inside & np.all(signed > -band, axis=1)
        for idx in np.nonzero(boundary_ish)[0]:
            inside[idx] = self.contains(pts[idx], mode)
        return inside

    # -- io --------------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"vertices": self.vertices.tolist()})

    @staticmethod
    def from_json(text: str) -> "ConvexBody":
        return ConvexBody(json.loads(text)["vertices"])

    def __repr__(self):
        return f"ConvexBody({len(self.vertices)} vertices, area={self.area:.6g})"


def shoelace_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    return float(0.5 * np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull with exact orientation; collinear points removed."""
    pts = np.unique(points, axis=0)
    if len(pts) < 3:
        raise ValueError("hull needs at least 3 distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def build(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and orient_sign(
                chain[-2][0], chain[-2][1], chain[-1][0], chain[-1][1], p[0], p[1]
            ) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise ValueError("points are collinear")
    return hull


# ---------------------------------------------------------------------------
# module-level ops mirroring the geometry contracts
# ---------------------------------------------------------------------------


def area(body: ConvexBody) -> float:
    return body.area


def diameter(body: ConvexBody) -> float:
    """Max pairwise vertex distance; equals the body diameter for polygons."""
    v = body.vertices
    d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
    return math.sqrt(float(d2.max()))


def diameter_direction(body: ConvexBody) -> float:
    """Angle in [0, pi) of a diametral vertex pair."""
    v = body.vertices
    d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
    i, j = np.unravel_index(int(d2.argmax()), d2.shape)
    dx, dy = v[j] - v[i]
    return math.atan2(dy, dx) % math.pi


def normalize_to_unit_area(body: ConvexBody):
    """Uniformly scale the body to area 1; returns (scaled body, applied map)."""
    a = body.area
    s = 1.0 / math.sqrt(a)
    if s == 1.0:
        return body, AffineMap.identity()
    amap = AffineMap.scaling(s)
    return body.transformed(amap), amap


def contains_point(body: ConvexBody, point, mode: str = "closed") -> bool:
    if mode not in ("open", "closed"):
        raise ValueError("mode must be 'open' or 'closed'")
    return body.contains(point, mode)


# ---------------------------------------------------------------------------
# oriented rectangles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrientedRect:
    """Rectangle given by center, extent along the inclination axis (width),
    extent along the perpendicular axis (height), and inclination in [0, pi).

    Canonically ``width <= height`` and the inclination is the minor-axis
    angle.  The rotated-grid net construction keeps its own axis bookkeeping,
    where the top level can make ``width`` marginally exceed ``height``;
    ``canonical()`` restores the minor-axis convention.
    """

    center: tuple
    width: float
    height: float
    inclination: float

    def __post_init__(self):
        cx, cy = float(self.center[0]), float(self.center[1])
        object.__setattr__(self, "center", (cx, cy))
        if not (self.width > 0 and self.height > 0):
            raise ValueError("rectangle sides must be positive")
        if not (0.0 <= self.inclination < math.pi):
            raise ValueError("inclination must lie in [0, pi)")
        if not all(map(math.isfinite, (cx, cy, self.width, self.height, self.inclination))):
            raise ValueError("rectangle parameters must be finite")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def axes(self):
        c, s = math.cos(self.inclination), math.sin(self.inclination)
        return np.array([c, s]), np.array([-s, c])

    def corners(self) -> np.ndarray:
        """Corners in ccw order."""
        u, v = self.axes
        c = np.array(self.center)
        hw, hh = self.width / 2.0, self.height / 2.0
        return np.array([c + hw * u - hh * v, c + hw * u + hh * v,
                         c - hw * u + hh * v, c - hw * u - hh * v])

    def canonical(self) -> "OrientedRect":
        if self.width <= self.height:
            return self
        return OrientedRect(
            self.center, self.height, self.width, (self.inclination + math.pi / 2.0) % math.pi
        )

    def scaled_to_area(self, target: float) -> "OrientedRect":
        s = math.sqrt(target / self.area)
        return OrientedRect(self.center, self.width * s, self.height * s, self.inclination)

    def body(self) -> ConvexBody:
        return ConvexBody(self.corners())

    def local_coords(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.array(self.center)
        u, v = self.axes
        return np.stack([pts @ u, pts @ v], axis=1)

    def contains_points(self, points, mode: str = "closed", tol: float = 0.0) -> np.ndarray:
        loc = np.abs(self.local_coords(points))
        hw, hh = self.width / 2.0 + tol, self.height / 2.0 + tol
        if mode == "open":
            return (loc[:, 0] < hw) & (loc[:, 1] < hh)
        return (loc[:, 0] <= hw) & (loc[:, 1] <= hh)

    @staticmethod
    def axis_aligned(x0: float, y0: float, x1: float, y1: float) -> "OrientedRect":
        w, h = x1 - x0, y1 - y0
        rect = OrientedRect(((x0 + x1) / 2.0, (y0 + y1) / 2.0), w, h, 0.0)
        return rect.canonical()

    @staticmethod
    def from_corner_points(p: np.ndarray) -> "OrientedRect":
        """Rectangle through 4 corner points in the order of ``corners()``:
        the first edge runs along the height axis, the second along width."""
        p = np.asarray(p, dtype=float)
        center = p.mean(axis=0)
        e_h = p[1] - p[0]
        e_w = p[2] - p[1]
        h = float(np.linalg.norm(e_h))
        w = float(np.linalg.norm(e_w))
        theta = math.atan2(e_w[1], e_w[0]) % math.pi
        return OrientedRect(tuple(center), w, h, theta)

    def to_json(self) -> str:
        return json.dumps(
            {"center": list(self.center), "w": self.width, "h": self.height,
             "theta": self.inclination}
        )

    @staticmethod
    def from_json(text: str) -> "OrientedRect":
        d = json.loads(text)
        return OrientedRect(tuple(d["center"]), d["w"], d["h"], d["theta"])


def rect_contains_rect(outer: OrientedRect, inner: OrientedRect, tol: float = 1e-9) -> bool:
    """Closed containment; for convex outers corner containment suffices."""
    return bool(np.all(outer.contains_points(inner.corners(), "closed", tol=tol)))


def body_contains_rect(body: ConvexBody, rect: OrientedRect, tol: float = 0.0) -> bool:
    corners = rect.corners()
    if tol == 0.0:
        return bool(np.all(body.contains_many(corners, "closed")))
    signed = corners @ body._inward.T - body._offsets
    return bool(np.all(signed >= -tol))


# ---------------------------------------------------------------------------
# half-plane clipping and inner-parallel bodies
# ---------------------------------------------------------------------------


def clip_halfplane(vertices: np.ndarray, n: np.ndarray, c: float) -> np.ndarray:
    """Clip a convex polygon to {x : n.x >= c} (Sutherland-Hodgman step)."""
    out = []
    m = len(vertices)
    vals = vertices @ n - c
    for i in range(m):
        a, va = vertices[i], vals[i]
        b, vb = vertices[(i + 1) % m], vals[(i + 1) % m]
        if va >= 0:
            out.append(a)
            if vb < 0:
                t = va / (va - vb)
                out.append(a + t * (b - a))
        elif vb >= 0:
            t = va / (va - vb)
            out.append(a + t * (b - a))
    return np.array(out) if out else np.empty((0, 2))


def _dedupe_polygon(verts: np.ndarray, scale: float) -> np.ndarray:
    if len(verts) == 0:
        return verts
    keep = [verts[0]]
    eps = 1e-12 * max(scale, 1.0)
    for p in verts[1:]:
        if np.linalg.norm(p - keep[-1]) > eps:
            keep.append(p)
    if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= eps:
        keep.pop()
    v = np.array(keep)
    # drop collinear chain vertices left over from clipping
    if len(v) >= 3:
        keep_idx = []
        m = len(v)
        for i in range(m):
            a, b, c = v[(i - 1) % m], v[i], v[(i + 1) % m]
            cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cr) > (1e-14 * max(scale, 1.0)) ** 1:
                keep_idx.append(i)
        v = v[keep_idx]
    return v


def halfplane_polygon(seed: np.ndarray, normals: np.ndarray, offsets: np.ndarray):
    """Intersection of {n_i . x >= c_i} starting from a seed polygon, or None."""
    verts = np.asarray(seed, dtype=float)
    scale = np.abs(verts).max(initial=1.0)
    for n, c in zip(normals, offsets):
        verts = clip_halfplane(verts, n, c)
        if len(verts) < 3:
            return None
    verts = _dedupe_polygon(verts, scale)
    if len(verts) < 3 or shoelace_area(verts) <= 0.0:
        return None
    return verts


def inner_offset(body: ConvexBody, omega: float):
    """Inner-parallel body at distance omega, or None when it vanishes."""
    if omega < 0:
        raise ValueError("omega must be >= 0")
    if omega == 0.0:
        return body
    verts = halfplane_polygon(body.vertices, body._inward, body._offsets + omega)
    if verts is None:
        return None
    return ConvexBody(verts)


def solve_inner_offset(body: ConvexBody, target_area: float, rel_tol: float = 1e-12):
    """Bisect omega so that area(inner_offset(body, omega)) == target_area.

    The area is continuous and strictly decreasing in omega until the body
    vanishes, so the root is unique.
    """
    a0 = body.area
    if not (0.0 < target_area < a0):
        raise InvalidTarget(f"target area {target_area} outside (0, {a0})")
    lo, hi = 0.0, math.sqrt(a0)
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        shr = inner_offset(body, mid)
        a = shr.area if shr is not None else 0.0
        if shr is not None and abs(a - target_area) <= rel_tol * a0:
            return mid, shr
        if a > target_area:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-18 * max(1.0, math.sqrt(a0)):
            break
    # lo always keeps a nonempty offset body with area >= target
    shr = inner_offset(body, lo)
    return lo, shr


# ---------------------------------------------------------------------------
# largest inscribed axis-aligned rectangle in a convex polygon
# ---------------------------------------------------------------------------


def _side_chains(verts: np.ndarray):
    """Breakpoint table (ys, left x, right x) of a convex polygon."""
    ys = np.unique(verts[:, 1])
    # cross-section [l(y), r(y)] obtained by clipping at each breakpoint
    left = np.empty(len(ys))
    right = np.empty(len(ys))
    n = len(verts)
    for k, y in enumerate(ys):
        xs = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            if a[1] == y:
                xs.append(a[0])
            lo, hi = (a[1], b[1]) if a[1] < b[1] else (b[1], a[1])
            if lo < y < hi:
                t = (y - a[1]) / (b[1] - a[1])
                xs.append(a[0] + t * (b[0] - a[0]))
        left[k] = min(xs)
        right[k] = max(xs)
    return ys, left, right


def largest_inscribed_axis_rect(verts: np.ndarray):
    """Exact max-area axis-aligned rectangle inside a convex polygon.

    The objective (y2-y1)*(min(r(y1),r(y2)) - max(l(y1),l(y2))) is a product
    of affine functions on every (piece, piece, regime) patch, so the maximum
    is attained at a breakpoint pair, at the vertex of a 1-d quadratic with
    one endpoint on a breakpoint, or on a regime-boundary curve.  All such
    candidates are enumerated and evaluated exactly.
    Returns (area, x0, x1, y0, y1).
    """
    ys, L, R = _side_chains(verts)
    B = len(ys)
    dy = ys[1:] - ys[:-1]
    Ls = (L[1:] - L[:-1]) / dy
    Rs = (R[1:] - R[:-1]) / dy
    Lc = L[:-1] - Ls * ys[:-1]
    Rc = R[:-1] - Rs * ys[:-1]

    def cross_section(y):
        k = int(np.searchsorted(ys, y))
        if k < B and ys[k] == y:
            return L[k], R[k]
        k -= 1
        t = (y - ys[k]) / (ys[k + 1] - ys[k])
        return L[k] + t * (L[k + 1] - L[k]), R[k] + t * (R[k + 1] - R[k])

    best = (0.0, 0.0, 0.0, 0.0, 0.0)

    def consider(y1, y2):
        nonlocal best
        if not (ys[0] <= y1 < y2 <= ys[-1]):
            return
        l1, r1 = cross_section(y1)
        l2, r2 = cross_section(y2)
        lo, hi = max(l1, l2), min(r1, r2)
        if hi <= lo:
            return
        a = (y2 - y1) * (hi - lo)
        if a > best[0]:
            best = (a, lo, hi, y1, y2)

    for i in range(B):
        for j in range(i + 1, B):
            consider(ys[i], ys[j])

    selections = ((0, 0), (0, 1), (1, 0), (1, 1))

    # one endpoint at a breakpoint, the other at a 1-d quadratic vertex
    # or at a regime kink of the slice
    for i in range(B):
        y_f = ys[i]
        l_f, r_f = L[i], R[i]
        for j in range(B - 1):
            for sl, sr in selections:
                c0 = (r_f if sr == 0 else Rc[j]) - (l_f if sl == 0 else Lc[j])
                c1 = (0.0 if sr == 0 else Rs[j]) - (0.0 if sl == 0 else Ls[j])
                if c1 == 0.0:
                    continue
                # vertex of (y - y_f)(c0 + c1 y)
                yv = (c1 * y_f - c0) / (2.0 * c1)
                if ys[j] < yv < ys[j + 1]:
                    consider(y_f, yv)
                    consider(yv, y_f)
            for Wc, Ws, w_f in ((Lc, Ls, l_f), (Rc, Rs, r_f)):
                if Ws[j] != 0.0:
                    yk = (w_f - Wc[j]) / Ws[j]
                    if ys[j] < yk < ys[j + 1]:
                        consider(y_f, yk)
                        consider(yk, y_f)

    # both endpoints interior, on a regime-boundary curve V(y1) == V(y2)
    for j1 in range(B - 1):
        for j2 in range(j1, B - 1):
            for Vc, Vs in ((Lc, Ls), (Rc, Rs)):
                d1, d2 = Vs[j1], Vs[j2]
                if d2 == 0.0:
                    continue
                # curve: y2 = k0 + k1*y1
                k1 = d1 / d2
                k0 = (Vc[j1] - Vc[j2]) / d2
                beta = k1 - 1.0
                for sl, sr in selections:
                    # substitute y2(y1) into the selected affine width
                    if sr == 0:
                        rc, rs = Rc[j1], Rs[j1]
                    else:
                        rc, rs = Rc[j2] + Rs[j2] * k0, Rs[j2] * k1
                    if sl == 0:
                        lc, lsl = Lc[j1], Ls[j1]
                    else:
                        lc, lsl = Lc[j2] + Ls[j2] * k0, Ls[j2] * k1
                    c0, c1 = rc - lc, rs - lsl
                    # vertex of (k0 + beta*y1)(c0 + c1*y1)
                    if beta != 0.0 and c1 != 0.0:
                        y1v = -(beta * c0 + c1 * k0) / (2.0 * beta * c1)
                        if ys[j1] <= y1v <= ys[j1 + 1]:
                            y2v = k0 + k1 * y1v
                            if ys[j2] <= y2v <= ys[j2 + 1]:
                                consider(y1v, y2v)
                # regime-switch points along the curve: l1(y1) == l2(y2(y1))
                for Wc, Ws in ((Lc, Ls), (Rc, Rs)):
                    den = Ws[j1] - Ws[j2] * k1
                    if den != 0.0:
                        y1v = (Wc[j2] + Ws[j2] * k0 - Wc[j1]) / den
                        if ys[j1] <= y1v <= ys[j1 + 1]:
                            consider(y1v, k0 + k1 * y1v)

    return best


def max_scale_inscribed_box(verts: np.ndarray, w0: float, h0: float):
    """Largest sigma with a translate of the (sigma*w0, sigma*h0) axis box
    inside the polygon; solved as a 3-variable LP.  Returns (sigma, center).
    """
    poly = ConvexBody(verts)
    N = poly._inward
    d = poly._offsets
    sup = 0.5 * (w0 * np.abs(N[:, 0]) + h0 * np.abs(N[:, 1]))
    # maximize sigma s.t. N.c - sigma*sup >= d
    A_ub = np.column_stack([-N, sup])
    b_ub = -d
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * 2 + [(0, None)],
                  method="highs")
    if not res.success:
        return 0.0, None
    cx, cy, sigma = res.x
    return float(sigma), np.array([cx, cy])


# ---------------------------------------------------------------------------
# Lassak rectangle sandwich
# ---------------------------------------------------------------------------


def _sandwich_for_direction(body: ConvexBody, theta: float, ratio_tol: float, area_tol: float):
    """Try to build the inscribed/circumscribed pair at one inclination."""
    rot = body.transformed(AffineMap.rotation(-theta))
    lo, hi = rot.bounding_box()
    W, H = hi - lo
    aL = body.area
    box_center = 0.5 * (lo + hi)

    candidates = []
    sigma, c = max_scale_inscribed_box(rot.vertices, W, H)
    if c is not None and sigma > 0:
        candidates.append((sigma * W, sigma * H, c))
    a, x0, x1, y0, y1 = largest_inscribed_axis_rect(rot.vertices)
    if a > 0:
        candidates.append((x1 - x0, y1 - y0, np.array([(x0 + x1) / 2.0, (y0 + y1) / 2.0])))

    for w, h, c in candidates:
        lam = max(W / w, H / h)
        aS = w * h
        if lam > 2.0 + ratio_tol:
            continue
        if aL > 2.0 * aS * (1.0 + area_tol):
            continue
        if 0.5 * lam * lam * aS > aL * (1.0 + area_tol):
            continue
        back = AffineMap.rotation(theta)
        inscribed = OrientedRect(tuple(back.apply(c)), w, h, theta % math.pi).canonical()
        circumscribed = OrientedRect(
            tuple(back.apply(box_center)), lam * w, lam * h, theta % math.pi
        ).canonical()
        return inscribed, circumscribed, lam
    return None


def lassak_rectangles(body: ConvexBody, ratio_tol: float = 1e-6, area_tol: float = 1e-9):
    """Inscribed rectangle S and circumscribed homothet R with ratio <= 2,
    a(R)/2 <= a(body) <= 2 a(S).

    Sweeps candidate inclinations (diametral pair, edge directions, then a
    uniform grid with refinement) and returns the first pair meeting all the
    guarantees.  Raises ConvergenceFailure when the sweep fails, which
    signals a bug since such a pair always exists.
    """
    edges = body._edges
    cands = list(np.arctan2(edges[:, 1], edges[:, 0]) % math.pi)
    cands.append(diameter_direction(body))
    seen = set()
    ordered = []
    for t in cands:
        key = round(t, 12)
        if key not in seen:
            seen.add(key)
            ordered.append(t)
    for theta in ordered:
        got = _sandwich_for_direction(body, theta, ratio_tol, area_tol)
        if got is not None:
            return got[0], got[1]
    # fall back to a sweep with local refinement
    grid = np.linspace(0.0, math.pi, 721)[:-1]
    for theta in grid:
        got = _sandwich_for_direction(body, float(theta), ratio_tol, area_tol)
        if got is not None:
            return got[0], got[1]
    step = math.pi / 720.0
    for theta0 in grid:
        for theta in np.linspace(theta0 - step, theta0 + step, 41):
            got = _sandwich_for_direction(body, float(theta) % math.pi, ratio_tol, area_tol)
            if got is not None:
                return got[0], got[1]
    raise ConvergenceFailure("no direction produced the ratio-2 rectangle sandwich")


# ---------------------------------------------------------------------------
# equal-area partitions
# ---------------------------------------------------------------------------


class HomothetCell:
    """Partition cell that is a homothet of the reference rectangle."""

    __slots__ = ("rect", "is_homothet", "area")

    def __init__(self, rect: OrientedRect):
        self.rect = rect
        self.is_homothet = True
        self.area = rect.area

    def contains_open(self, points):
        return self.rect.contains_points(points, "open")

    def contains_closed(self, points):
        return self.rect.contains_points(points, "closed")


class SlabRegion:
    """Leftover slice of the body between two sweep abscissae, cells excluded."""

    __slots__ = ("body", "theta", "x_lo", "x_hi", "cells", "is_homothet", "area")

    def __init__(self, body: ConvexBody, theta: float, x_lo: float, x_hi: float,
                 cells: Sequence[OrientedRect], target_area: float):
        self.body = body
        self.theta = theta
        self.x_lo = x_lo
        self.x_hi = x_hi
        # only cells whose sweep projection meets the band can exclude points
        u = np.array([math.cos(theta), math.sin(theta)])
        keep = []
        for cell in cells:
            proj = cell.corners() @ u
            if proj.max() > x_lo and proj.min() < x_hi:
                keep.append(cell)
        self.cells = keep
        self.is_homothet = False
        self.area = target_area

    def _in_band(self, points, mode):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        c, s = math.cos(self.theta), math.sin(self.theta)
        x = pts @ np.array([c, s])
        if mode == "open":
            return (x > self.x_lo) & (x < self.x_hi)
        return (x >= self.x_lo) & (x <= self.x_hi)

    def contains_open(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        mask = self.body.contains_many(pts, "open") & self._in_band(pts, "open")
        for cell in self.cells:
            mask &= ~cell.contains_points(pts, "closed")
        return mask

    def contains_closed(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        mask = self.body.contains_many(pts, "closed") & self._in_band(pts, "closed")
        for cell in self.cells:
            mask &= ~cell.contains_points(pts, "open")
        return mask


def _halfplane_area(body: ConvexBody, theta: float, x: float) -> float:
    """Area of body cut to {p . u <= x} with u = (cos theta, sin theta)."""
    c, s = math.cos(theta), math.sin(theta)
    n = np.array([-c, -s])
    verts = halfplane_polygon(body.vertices, np.array([n]), np.array([-x]))
    if verts is None:
        proj = body.vertices @ np.array([c, s])
        return body.area if x >= proj.max() else 0.0
    return shoelace_area(verts)


def _rect_band_area(rect: OrientedRect, theta: float, x: float) -> float:
    """Area of rect cut to {p . u <= x}; rect axes are aligned with theta grid."""
    # cells produced by the partition are axis-aligned in the theta frame
    c, s = math.cos(theta), math.sin(theta)
    proj = rect.corners() @ np.array([c, s])
    lo, hi = proj.min(), proj.max()
    if x <= lo:
        return 0.0
    if x >= hi:
        return rect.area
    return rect.area * (x - lo) / (hi - lo)


def equal_area_partition(body: ConvexBody, m: int, cell_shape: OrientedRect,
                         theta_override: float | None = None):
    """Partition an area-1 body into m interior-disjoint regions of area 1/m,
    at least ceil(2m/3) of which are homothets of cell_shape.

    Overlay: a grid of area-1/m homothets of the cell over the body, fully
    interior cells kept; the remainder is cut into equal-area slabs by a
    sweep line.  Raises TooFewCells when m is below the constructive
    threshold of this overlay.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if abs(body.area - 1.0) > 1e-9:
        raise ValueError("equal_area_partition expects a unit-area body")
    theta = cell_shape.inclination if theta_override is None else theta_override
    cells = _interior_cell_grid(body, m, cell_shape, theta)
    need = math.ceil(2 * m / 3)
    if len(cells) < need:
        raise TooFewCells(
            f"m={m} keeps {len(cells)} interior cells; need {need} (raise m)"
        )
    return _slabbed_partition(body, m, cells, theta)


def _interior_cell_grid(body: ConvexBody, m: int, cell_shape: OrientedRect, theta: float):
    scale = math.sqrt((1.0 / m) / cell_shape.area)
    w = cell_shape.width * scale
    h = cell_shape.height * scale
    rot = body.transformed(AffineMap.rotation(-theta))
    lo, hi = rot.bounding_box()
    nx = int(math.floor((hi[0] - lo[0]) / w))
    ny = int(math.floor((hi[1] - lo[1]) / h))
    back = AffineMap.rotation(theta)
    cells = []
    for i in range(nx):
        for j in range(ny):
            cx = lo[0] + (i + 0.5) * w
            cy = lo[1] + (j + 0.5) * h
            corners_local = np.array(
                [[cx - w / 2, cy - h / 2], [cx + w / 2, cy - h / 2],
                 [cx + w / 2, cy + h / 2], [cx - w / 2, cy + h / 2]]
            )
            if np.all(rot.contains_many(corners_local, "closed")):
                rect = OrientedRect(tuple(back.apply(np.array([cx, cy]))), w, h,
                                    theta % math.pi)
                cells.append(rect)
    return cells


def partition_min_cells(body: ConvexBody, cell_shape: OrientedRect, m_max: int = 100000) -> int:
    """Constructive threshold M0: smallest m whose overlay keeps >= ceil(2m/3) cells."""
    m = 1
    while m <= m_max:
        cells = _interior_cell_grid(body, m, cell_shape, cell_shape.inclination)
        if len(cells) >= math.ceil(2 * m / 3):
            return m
        m = m + 1 if m < 16 else int(m * 1.3) + 1
    raise TooFewCells(f"no m <= {m_max} keeps enough interior cells")


def cells_band_profile(cells, theta: float):
    """Per-cell sweep projections (lo, hi, area) for fast band-area queries."""
    u = np.array([math.cos(theta), math.sin(theta)])
    lo = np.empty(len(cells))
    hi = np.empty(len(cells))
    areas = np.empty(len(cells))
    for i, r in enumerate(cells):
        proj = r.corners() @ u
        lo[i] = proj.min()
        hi[i] = proj.max()
        areas[i] = r.area
    return lo, hi, areas


def rest_area_below(body: ConvexBody, theta: float, x: float, profile) -> float:
    """Area of the body cut at sweep abscissa x, cells excluded."""
    lo, hi, areas = profile
    a = _halfplane_area(body, theta, x)
    if len(lo):
        frac = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        a -= float((frac * areas).sum())
    return a


def _slabbed_partition(body: ConvexBody, m: int, cells: list, theta: float):
    """Keep the given cells, slice the remaining area into 1/m slabs."""
    target = 1.0 / m
    k_rest = m - len(cells)
    regions: list = [HomothetCell(r) for r in cells]
    if k_rest == 0:
        return regions
    c, s = math.cos(theta), math.sin(theta)
    proj = body.vertices @ np.array([c, s])
    x_min, x_max = float(proj.min()), float(proj.max())
    profile = cells_band_profile(cells, theta)

    cuts = [x_min]
    for k in range(1, k_rest):
        want = k * target
        lo, hi = cuts[-1], x_max
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if rest_area_below(body, theta, mid, profile) < want:
                lo = mid
            else:
                hi = mid
        cuts.append(0.5 * (lo + hi))
    cuts.append(x_max)
    for k in range(k_rest):
        regions.append(SlabRegion(body, theta, cuts[k], cuts[k + 1], cells, target))
    return regions
