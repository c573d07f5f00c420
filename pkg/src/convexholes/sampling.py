"""Reproducible uniform sampling of point sets from convex polygons.

Streams are keyed by (master_seed, stream_index) through a counter-based
Philox generator, so any (body, n, seed) triple regenerates bit-identical
points and distinct stream indices can run concurrently.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ConvexBody

_MASK64 = (1 << 64) - 1


def mix64(*values: int) -> int:
    """Stable splitmix64 chain over a tuple of integers."""
    x = 0x9E3779B97F4A7C15
    for v in values:
        x = (x ^ (int(v) & _MASK64)) & _MASK64
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        x = z ^ (z >> 31)
    return x


@dataclass(frozen=True)
class SeedSpec:
    """(master_seed, stream_index) fully determines a generated sequence."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "master_seed", int(self.master_seed) & _MASK64)
        object.__setattr__(self, "stream_index", int(self.stream_index) & _MASK64)

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, *salt: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, mix64(self.stream_index, *salt))


@dataclass
class PointSample:
    """Seeded point set drawn from a convex body."""

    seed: SeedSpec
    n: int
    points: np.ndarray
    body_id: str = "body"

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(self.n, 2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# master_seed=%d stream_index=%d n=%d body_id=%s\n"
                  % (self.seed.master_seed, self.seed.stream_index, self.n, self.body_id))
        buf.write("x,y\n")
        for x, y in self.points:
            buf.write(f"{float(x)!r},{float(y)!r}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "PointSample":
        lines = text.strip().splitlines()
        meta = dict(kv.split("=") for kv in lines[0].lstrip("# ").split())
        pts = [tuple(map(float, ln.split(","))) for ln in lines[2:]]
        return PointSample(
            SeedSpec(int(meta["master_seed"]), int(meta["stream_index"])),
            int(meta["n"]),
            np.array(pts).reshape(int(meta["n"]), 2),
            meta.get("body_id", "body"),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "master_seed": self.seed.master_seed,
                "stream_index": self.seed.stream_index,
                "n": self.n,
                "body_id": self.body_id,
                "points": self.points.tolist(),
            }
        )


def _fan_triangles(body: ConvexBody):
    v = body.vertices
    a = v[0]
    b = v[1:-1]
    c = v[2:]
    areas = 0.5 * np.abs(
        (b[:, 0] - a[0]) * (c[:, 1] - a[1]) - (b[:, 1] - a[1]) * (c[:, 0] - a[0])
    )
    return a, b, c, areas


def sample_uniform(body: ConvexBody, n: int, seed: SeedSpec, body_id: str = "body") -> PointSample:
    """n i.i.d. uniform points: pick a fan triangle with probability
    proportional to area, then the standard two-uniform map inside it."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return PointSample(seed, 0, np.empty((0, 2)), body_id)
    rng = seed.generator()
    a, b, c, areas = _fan_triangles(body)
    cum = np.cumsum(areas)
    cum /= cum[-1]
    t = np.searchsorted(cum, rng.random(n), side="right")
    t = np.minimum(t, len(areas) - 1)
    u = rng.random(n)
    v = rng.random(n)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    pts = a + u[:, None] * (b[t] - a) + v[:, None] * (c[t] - a)
    return PointSample(seed, n, pts, body_id)


def triangle_of(body: ConvexBody, points) -> np.ndarray:
    """Index of the fan triangle containing each point (boundary ties take
    the lowest index); used to audit triangle-selection frequencies."""
    a, b, c, _ = _fan_triangles(body)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.full(len(pts), -1, dtype=int)
    for i in range(len(b)):
        m = out < 0
        if not m.any():
            break
        d0 = b[i] - a
        d1 = c[i] - a
        det = d0[0] * d1[1] - d0[1] * d1[0]
        rel = pts[m] - a
        uu = (rel[:, 0] * d1[1] - rel[:, 1] * d1[0]) / det
        vv = (rel[:, 1] * d0[0] - rel[:, 0] * d0[1]) / det
        hit = (uu >= -1e-12) & (vv >= -1e-12) & (uu + vv <= 1 + 1e-12)
        idx = np.nonzero(m)[0][hit]
        out[idx] = i
    return out
