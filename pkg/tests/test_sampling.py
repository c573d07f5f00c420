import numpy as np
import pytest
from scipy import stats

from convexholes.geometry import ConvexBody
from convexholes.sampling import PointSample, SeedSpec, sample_uniform, triangle_of

SQ = ConvexBody.unit_square()


def test_empty_sample():
    s = sample_uniform(SQ, 0, SeedSpec(1, 2))
    assert s.n == 0 and s.points.shape == (0, 2)


def test_determinism():
    a = sample_uniform(SQ, 1000, SeedSpec(123, 7))
    b = sample_uniform(SQ, 1000, SeedSpec(123, 7))
    assert np.array_equal(a.points, b.points)


def test_distinct_streams_differ():
    a = sample_uniform(SQ, 5000, SeedSpec(123, 0))
    b = sample_uniform(SQ, 5000, SeedSpec(123, 1))
    assert not np.any(np.all(a.points == b.points, axis=1))
    r = np.corrcoef(a.points[:, 0], b.points[:, 0])[0, 1]
    assert abs(r) < 0.05
    overlap = set(map(tuple, a.points)) & set(map(tuple, b.points))
    assert not overlap


def test_points_inside_body():
    body = ConvexBody([(0, 0), (3, 1), (2, 4), (-1, 2)])
    s = sample_uniform(body, 20000, SeedSpec(5, 5))
    assert np.all(body.contains_many(s.points, "closed"))


def test_uniformity_mean_and_chi2():
    n = 1_000_000
    s = sample_uniform(SQ, n, SeedSpec(42, 0))
    mean = s.points.mean(axis=0)
    sigma = np.sqrt(1.0 / 12.0 / n)
    assert np.all(np.abs(mean - 0.5) < 3.5 * sigma)
    ij = np.clip((s.points * 10).astype(int), 0, 9)
    counts = np.bincount(ij[:, 0] * 10 + ij[:, 1], minlength=100)
    chi2 = float(((counts - n / 100.0) ** 2 / (n / 100.0)).sum())
    assert chi2 < stats.chi2.ppf(1 - 1e-3, df=99)


def test_triangle_selection_frequencies():
    body = ConvexBody([(0, 0), (4, 0), (4, 1), (2, 3), (0, 2)])
    n = 100_000
    s = sample_uniform(body, n, SeedSpec(9, 3))
    idx = triangle_of(body, s.points)
    assert np.all(idx >= 0)
    from convexholes.sampling import _fan_triangles

    _, _, _, areas = _fan_triangles(body)
    probs = areas / areas.sum()
    counts = np.bincount(idx, minlength=len(areas))
    for k, p in enumerate(probs):
        sd = np.sqrt(n * p * (1 - p))
        assert abs(counts[k] - n * p) < 4 * sd


def test_csv_round_trip():
    s = sample_uniform(SQ, 50, SeedSpec(77, 8), body_id="sq")
    t = PointSample.from_csv(s.to_csv())
    assert t.seed == s.seed and t.n == s.n and t.body_id == "sq"
    assert np.array_equal(t.points, s.points)


def test_json_emit():
    import json

    s = sample_uniform(SQ, 3, SeedSpec(1, 1))
    d = json.loads(s.to_json())
    assert d["n"] == 3 and len(d["points"]) == 3
