import math

import numpy as np
import pytest

from convexholes import rect_nets as rn
from convexholes.geometry import (
    ConvexBody,
    OrientedRect,
    body_contains_rect,
    rect_contains_rect,
)
from convexholes.sampling import PointSample, SeedSpec, sample_uniform

SQ = ConvexBody.unit_square()
CONT = OrientedRect((0.5, 0.5), 1.0, 1.0, 0.0)


def random_hi_rect(rng, params, body=SQ):
    """Uniformish random rectangle of area (2+4eps)log(n)/n inside the body."""
    a = params.area_hi
    lo, hi = body.bounding_box()
    while True:
        theta = rng.random() * math.pi
        wlo = max(a / params.rho, math.sqrt(a) / 50.0)
        w = math.exp(rng.uniform(math.log(wlo), math.log(math.sqrt(a))))
        h = a / w
        ct, st = abs(math.cos(theta)), abs(math.sin(theta))
        hw = (w * ct + h * st) / 2.0
        hh = (w * st + h * ct) / 2.0
        if 2 * hw >= hi[0] - lo[0] or 2 * hh >= hi[1] - lo[1]:
            continue
        cx = rng.uniform(lo[0] + hw, hi[0] - hw)
        cy = rng.uniform(lo[1] + hh, hi[1] - hh)
        return OrientedRect((cx, cy), w, h, theta).canonical()


class TestParams:
    def test_formula_values_n1e4(self):
        p = rn.make_net_params(10_000, 0.1, SQ)
        logn = math.log(1e4)
        assert p.rho == pytest.approx(math.sqrt(2), rel=1e-15)
        assert p.theta0 == pytest.approx(0.1 * 2.4 * logn / (4 * 2 * 1e4), rel=1e-12)
        assert p.theta0 == pytest.approx(2.7631e-5, rel=1e-4)
        assert p.gamma == pytest.approx((2.2 / 2.1) ** (1 / 3), rel=1e-15)
        assert p.w0 == pytest.approx(2.2 * logn / (math.sqrt(2) * 1e4), rel=1e-12)

    def test_M_is_smallest(self):
        p = rn.make_net_params(4096, 0.1, SQ)
        w_max = math.sqrt(p.area_mid)
        assert p.gamma ** p.M * p.w0 >= w_max
        assert p.gamma ** (p.M - 1) * p.w0 < w_max

    def test_level_area_constant(self):
        p = rn.make_net_params(4096, 0.05, SQ)
        for m in (-1, 0, 10, p.M - 2):
            w, h = p.level_dims(m)
            assert w * h == pytest.approx(p.area_lo, rel=1e-12)

    def test_epsilon_validation(self):
        with pytest.raises(rn.EpsilonTooLarge):
            rn.make_net_params(1000, 0.2, SQ)
        with pytest.raises(ValueError):
            rn.make_net_params(8, 0.1, SQ)


class TestQuantize:
    def test_identity_at_multiple(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        w = math.sqrt(params.area_hi) * 0.5
        r = OrientedRect((0.5, 0.5), w, params.area_hi / w, 17 * params.theta0)
        q = rn.quantize_rectangle(r, params, SQ)
        assert q.inclination == r.inclination
        assert q.width == r.width and q.height == r.height

    def test_area_retention_bound(self):
        # rounding loses at most an eps/2 fraction of area
        params = rn.make_net_params(4096, 0.05, SQ)
        floor = (2 + 4 * 0.05) * (1 - 0.05 / 2) * math.log(4096) / 4096
        rng = np.random.default_rng(3)
        for _ in range(200):
            r = random_hi_rect(rng, params)
            q = rn.quantize_rectangle(r, params, SQ)
            assert q.area >= floor - 1e-15
            assert q.area >= params.area_mid

    def test_random_properties(self):
        params = rn.make_net_params(10_000, 0.05, SQ)
        rng = np.random.default_rng(4)
        for _ in range(300):
            r = random_hi_rect(rng, params)
            q = rn.quantize_rectangle(r, params, SQ)
            assert rect_contains_rect(r, q, tol=1e-12)
            t = q.inclination / params.theta0
            assert abs(t - round(t)) < 1e-9

    def test_precondition_violation(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        bad = OrientedRect((0.5, 0.5), 0.3, 0.4, 0.2)
        with pytest.raises(rn.PreconditionViolation):
            rn.quantize_rectangle(bad, params, SQ)


class TestWitness:
    def test_exactly_on_grid(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        m, t = 40, 11
        dx, dy = params.level_deltas(m)
        w, h = params.level_dims(m)
        from convexholes.geometry import AffineMap

        g_local = np.array([round(0.5 / dx) * dx, round(0.5 / dy) * dy])
        center = AffineMap.rotation(t * params.theta0).apply(g_local)
        q = OrientedRect(tuple(center), params.gamma ** (m + 1) * params.w0,
                         params.area_mid / (params.gamma ** (m + 1) * params.w0),
                         t * params.theta0)
        member = rn.net_contains_witness(q, params, SQ)
        assert np.allclose(member.center, q.center, atol=1e-12)

    def test_completeness_1000(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        rng = np.random.default_rng(42)
        for _ in range(1000):
            r = random_hi_rect(rng, params)
            q = rn.quantize_rectangle(r, params, SQ)
            member = rn.net_contains_witness(q.scaled_to_area(params.area_mid),
                                             params, SQ)
            assert rect_contains_rect(r, member, tol=1e-12)
            assert member.area == pytest.approx(params.area_lo, rel=1e-12)

    def test_level_boundary_tie(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        m = 30
        w = params.gamma ** (m + 2) * params.w0
        q = OrientedRect((0.5, 0.5), w, params.area_mid / w, 0.0)
        member = rn.net_contains_witness(q, params, SQ)
        assert rect_contains_rect(q, member, tol=1e-12)
        # the member width identifies the level; ties resolve to the lower m
        got_m = round(math.log(min(member.width, member.height) / params.w0)
                      / math.log(params.gamma))
        assert got_m in (m, m + 1)


class TestMaterializedNet:
    def test_small_net_sound(self):
        params = rn.make_net_params(16, 0.1, SQ)
        # restrict to a slice of inclinations to keep the build quick
        per_level = rn.packing_bound_per_level(params)
        count = 0
        for t in range(0, params.t_count, 101):
            for m in range(-1, params.M - 1):
                centers = rn.level_centers(SQ, params, m, t)
                assert len(centers) <= per_level + 1
                w, h = params.level_dims(m)
                for c in centers[:: max(1, len(centers) // 20)]:
                    rect = OrientedRect(tuple(c), w, h, t * params.theta0)
                    assert body_contains_rect(SQ, rect, tol=1e-9)
                    assert rect.area == pytest.approx(params.area_lo, rel=1e-12)
                count += len(centers)
        assert count > 0

    def test_size_bound(self):
        params = rn.make_net_params(16, 0.1, SQ)
        measured = sum(
            rn.count_level_rects(SQ, params, m, 0) for m in range(-1, params.M - 1)
        )
        assert measured <= rn.packing_bound_per_level(params) * params.M

    def test_net_too_large(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        with pytest.raises(rn.NetTooLarge):
            rn.build_rect_net(SQ, params, max_rects=10_000)

    def test_jsonl_round_trip(self):
        params = rn.make_net_params(16, 0.1, SQ)
        rects = []
        level_index = {}
        for t in (0, 1):
            for m in (25, 30):
                centers = rn.level_centers(SQ, params, m, t)
                w, h = params.level_dims(m)
                start = len(rects)
                rects.extend(OrientedRect(tuple(c), w, h, t * params.theta0)
                             for c in centers)
                level_index[(m, t)] = slice(start, len(rects))
        net = rn.RectNet(params, rects, level_index)
        back = rn.net_from_jsonl(rn.net_to_jsonl(net), params)
        assert len(back.rects) == len(net.rects)
        assert back.rects[0] == net.rects[0]


class TestMaxRect:
    def test_no_points(self):
        rect, area = rn.max_empty_axis_rect(CONT, np.empty((0, 2)))
        assert area == 1.0

    def test_single_center(self):
        _, area = rn.max_empty_axis_rect(CONT, np.array([[0.5, 0.5]]))
        assert area == pytest.approx(0.5, abs=1e-15)

    def test_two_mid_points(self):
        _, area = rn.max_empty_axis_rect(CONT, np.array([[0.25, 0.5], [0.75, 0.5]]))
        assert area == pytest.approx(0.5, abs=1e-15)

    def test_corner_point(self):
        assert rn.max_empty_axis_rect_oracle(CONT, np.array([[0.0, 0.0]])) == 1.0

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(8)
        for k in range(200):
            n = int(rng.integers(0, 41))
            pts = rng.random((n, 2))
            if k % 4 == 0 and n >= 4:
                pts[1, 1] = pts[0, 1]
                pts[3, 0] = pts[2, 0]
            _, a = rn.max_empty_axis_rect(CONT, pts)
            b = rn.max_empty_axis_rect_oracle(CONT, pts)
            assert a == pytest.approx(b, abs=1e-12), k

    def test_monotone_under_points(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            pts = rng.random((20, 2))
            _, a1 = rn.max_empty_axis_rect(CONT, pts[:19])
            _, a2 = rn.max_empty_axis_rect(CONT, pts)
            assert a2 <= a1 + 1e-15

    def test_oracle_limit(self):
        with pytest.raises(rn.TooManyPoints):
            rn.max_empty_axis_rect_oracle(CONT, np.zeros((61, 2)))


class TestCertification:
    def test_empty_sample_not_certified(self):
        params = rn.make_net_params(16, 0.1, SQ)
        s = PointSample(SeedSpec(0, 0), 0, np.empty((0, 2)))
        rep = rn.net_max_empty_rect(SQ, s, params, level_budget=50_000)
        assert rep.status == rn.EMPTY_MEMBER
        assert rep.lower == pytest.approx(1.0)
        member = ConvexBody(rep.empty_member.corners())
        assert body_contains_rect(SQ, rep.empty_member, tol=1e-9)

    def test_corner_sample_finds_member(self):
        params = rn.make_net_params(16, 0.1, SQ)
        pts = 0.01 * np.abs(np.random.default_rng(3).random((16, 2)))
        s = PointSample(SeedSpec(0, 0), 16, pts)
        rep = rn.net_max_empty_rect(SQ, s, params, level_budget=50_000)
        assert rep.status == rn.EMPTY_MEMBER
        assert rep.lower > 0
        assert not rep.empty_member.contains_points(pts, "open").any()

    def test_dense_sample_certifies(self):
        # every member rectangle has short side >= w0/gamma, far above the
        # grid pitch, so the full level scan proves non-emptiness
        params = rn.make_net_params(16, 0.1, SQ)
        g = np.linspace(0.025, 0.975, 20)
        pts = np.array([(x, y) for x in g for y in g])
        s = PointSample(SeedSpec(0, 0), len(pts), pts)
        rep = rn.net_max_empty_rect(SQ, s, params, level_budget=50_000)
        assert rep.status == rn.CERTIFIED
        assert rep.upper_certified == pytest.approx(params.area_hi)
        assert rep.levels_scanned == params.levels

    def test_large_net_undecided(self):
        params = rn.make_net_params(4096, 0.1, SQ)
        s = sample_uniform(SQ, 4096, SeedSpec(0, 0))
        rep = rn.net_max_empty_rect(SQ, s, params, level_budget=1000)
        assert rep.status in (rn.UNDECIDED, rn.EMPTY_MEMBER)
        assert math.isinf(rep.upper_certified)

    def test_axis_member_hunt(self):
        # seed 1 of n=4096 has an empty axis rectangle above (2+2eps)log n/n,
        # which the hunt converts into a verified empty member
        params = rn.make_net_params(4096, 0.1, SQ)
        s = sample_uniform(SQ, 4096, SeedSpec(1, 0))
        rep = rn.net_max_empty_rect(SQ, s, params, level_budget=1000)
        assert rep.lower * 4096 / math.log(4096) > 2.1
        assert rep.status == rn.EMPTY_MEMBER
        assert not rep.empty_member.contains_points(s.points, "open").any()
        assert rep.empty_member.area == pytest.approx(params.area_lo, rel=1e-9)


class TestDegenerateParams:
    def test_theta0_above_pi_collapses_t_range(self):
        # not reachable through make_net_params; exercises the t-range logic
        base = rn.make_net_params(16, 0.1, SQ)
        degenerate = rn.NetParams(
            n=base.n, epsilon=base.epsilon, rho=base.rho, theta0=3.5,
            gamma=base.gamma, w0=base.w0, M=base.M,
            t_count=max(1, math.ceil(math.pi / 3.5)),
            area_lo=base.area_lo, area_mid=base.area_mid, area_hi=base.area_hi,
        )
        assert degenerate.t_count == 1
        centers = rn.level_centers(SQ, degenerate, 30, 0)
        w, h = degenerate.level_dims(30)
        for c in centers[:10]:
            rect = OrientedRect(tuple(c), w, h, 0.0)
            assert rect.inclination == 0.0
            assert body_contains_rect(SQ, rect, tol=1e-9)
