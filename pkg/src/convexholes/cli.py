"""Command-line interface: sampling, occupancy, hole statistics, nets, and
the experiment harness.

Every subcommand writes JSON (default) or CSV to --out or stdout; seeds make
each invocation reproducible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .geometry import ConvexBody, OrientedRect
from .harness import (
    ExperimentConfig,
    emit_trials_csv,
    fit_scaling,
    parse_trials_csv,
    report_to_json,
    resolve_body,
    resolve_shape,
    run_experiment,
)
from .holes import convex_hole_bounds, polymax, strip_quadrilateral
from .homothet import largest_empty_homothet
from .occupancy import chebyshev_empty_regions_bound, empty_bin_moments
from .rect_nets import (
    build_rect_net,
    make_net_params,
    net_contains_witness,
    net_max_empty_rect,
    net_to_jsonl,
    quantize_rectangle,
)
from .sampling import SeedSpec, sample_uniform


def _write(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _body_from(args) -> ConvexBody:
    if args.body == "unit_square":
        return ConvexBody.unit_square()
    with open(args.body) as fh:
        return ConvexBody.from_json(fh.read())


def _sample_from(args, body):
    seed = SeedSpec(args.seed, args.stream)
    return sample_uniform(body, args.n, seed)


def cmd_sample(args) -> int:
    body = _body_from(args)
    sample = _sample_from(args, body)
    _write(args, sample.to_csv() if args.format == "csv" else sample.to_json() + "\n")
    return 0


def cmd_occupancy(args) -> int:
    body = _body_from(args)
    logn = math.log(args.n)
    k = args.k or max(1, round(args.n / ((1.0 - args.eps) * logn)))
    mom = empty_bin_moments(k, args.n)
    cheb = chebyshev_empty_regions_bound(args.n, args.eps)
    counts = []
    from .harness import _strip_empty_count

    for t in range(args.trials):
        sample = sample_uniform(body, args.n, SeedSpec(args.seed, t))
        counts.append(_strip_empty_count(body, sample, k, True))
    arr = np.array(counts, dtype=float)
    if args.format == "csv":
        from .occupancy import occupancy_csv

        _write(args, occupancy_csv(
            [(k, args.n, mom.expected_empty, mom.variance_empty,
              float(arr.mean()), float(arr.var()), args.trials)]
        ))
    else:
        _write(args, json.dumps({
            "k": k, "n": args.n, "expected": mom.expected_empty,
            "variance": mom.variance_empty, "empirical_mean": float(arr.mean()),
            "empirical_var": float(arr.var()), "trials": args.trials,
            "chebyshev_threshold": cheb.threshold,
            "chebyshev_prob_bound": cheb.prob_bound,
        }, indent=2) + "\n")
    return 0


def cmd_maxrect(args) -> int:
    body = _body_from(args)
    sample = _sample_from(args, body)
    params = make_net_params(max(args.n, 16), args.eps, body)
    report = net_max_empty_rect(body, sample, params)
    _write(args, json.dumps({
        "n": args.n, "lower": report.lower,
        "normalized_lower": report.lower * args.n / math.log(args.n),
        "status": report.status,
        "upper_certified": report.upper_certified if report.certified else None,
        "rect": json.loads(report.lower_rect.to_json()) if report.lower_rect else None,
    }, indent=2) + "\n")
    return 0


def cmd_net_build(args) -> int:
    body = _body_from(args)
    params = make_net_params(args.n, args.eps, body)
    net = build_rect_net(body, params, max_rects=args.max_rects,
                         t_limit=args.t_limit)
    _write(args, net_to_jsonl(net))
    return 0


def cmd_net_verify(args) -> int:
    body = _body_from(args)
    params = make_net_params(args.n, args.eps, body)
    rng = SeedSpec(args.seed, 0).generator()
    failures = 0
    for _ in range(args.trials):
        rect = _random_hi_rect(rng, params, body)
        q = quantize_rectangle(rect, params, body)
        member = net_contains_witness(q.scaled_to_area(params.area_mid), params, body)
        from .geometry import rect_contains_rect

        if not rect_contains_rect(rect, member, tol=1e-12):
            failures += 1
    _write(args, json.dumps({
        "n": args.n, "eps": args.eps, "trials": args.trials, "failures": failures,
    }, indent=2) + "\n")
    return 0 if failures == 0 else 1


def _random_hi_rect(rng, params, body):
    a = params.area_hi
    lo, hi = body.bounding_box()
    for _ in range(100000):
        theta = rng.random() * math.pi
        w = math.exp(rng.uniform(math.log(max(a / params.rho, math.sqrt(a) / 50.0)),
                                 math.log(math.sqrt(a))))
        h = a / w
        ct, st = abs(math.cos(theta)), abs(math.sin(theta))
        hw = (w * ct + h * st) / 2.0
        hh = (w * st + h * ct) / 2.0
        if 2 * hw >= hi[0] - lo[0] or 2 * hh >= hi[1] - lo[1]:
            continue
        cx = rng.uniform(lo[0] + hw, hi[0] - hw)
        cy = rng.uniform(lo[1] + hh, hi[1] - hh)
        rect = OrientedRect((cx, cy), w, h, theta).canonical()
        from .geometry import body_contains_rect

        if body_contains_rect(body, rect):
            return rect
    raise RuntimeError("could not draw a contained rectangle")


def cmd_maxhole(args) -> int:
    body = _body_from(args)
    if args.shape in ("square", "disk", "rect2"):
        shape = resolve_shape(args.shape)
    else:
        with open(args.shape) as fh:
            shape = ConvexBody.from_json(fh.read())
    sample = _sample_from(args, body)
    res = largest_empty_homothet(body, shape, sample, args.eps)
    _write(args, json.dumps({
        "n": args.n, "eps": args.eps,
        "lower": res.area,
        "normalized_lower": res.area * args.n / math.log(max(args.n, 3)),
        "upper": res.certified_upper if res.certified else None,
        "certified": res.certified,
        "placement": {"scale": res.best.scale, "offset": list(res.best.offset)},
    }, indent=2) + "\n")
    return 0


def cmd_polymax(args) -> int:
    body = _body_from(args)
    sample = _sample_from(args, body)
    chain, area, exact = polymax(sample, max_exact_n=args.max_exact_n)
    _write(args, json.dumps({
        "n": args.n, "area": area,
        "normalized": area * args.n / math.log(max(args.n, 3)),
        "exact": exact,
        "vertices": chain.vertices.tolist(),
    }, indent=2) + "\n")
    return 0


def cmd_stripquad(args) -> int:
    body = _body_from(args)
    sample = _sample_from(args, body)
    rep = strip_quadrilateral(sample, args.eps, args.delta)
    _write(args, json.dumps({
        "n": args.n, "found": rep.found, "area": rep.area,
        "band_event": rep.band_event, "strip_index": rep.strip_index,
        "t": rep.decomposition.t, "q": rep.q,
        "empty_strips": rep.decomposition.empty_indices.tolist(),
        "consecutive_empty": rep.consecutive_empty,
        "disjoint_point_sets": rep.disjoint_point_sets,
        "quad": rep.quad.vertices.tolist() if rep.quad else None,
    }, indent=2) + "\n")
    return 0


def cmd_holebounds(args) -> int:
    body = _body_from(args)
    sample = _sample_from(args, body)
    rep = convex_hole_bounds(sample, body, args.eps)
    _write(args, json.dumps({
        "n": args.n, "lower": rep.lower,
        "normalized_lower": rep.lower * args.n / math.log(max(args.n, 3)),
        "upper": None if math.isinf(rep.upper) else rep.upper,
        "lower_source": rep.lower_source, "rect_status": rep.rect_status,
        "components": rep.components,
    }, indent=2) + "\n")
    return 0


def cmd_experiment_run(args) -> int:
    with open(args.config) as fh:
        config = ExperimentConfig.from_json(fh.read())
    report = run_experiment(config)
    if args.format == "csv":
        _write(args, emit_trials_csv(report.rows))
    else:
        _write(args, report_to_json(report) + "\n")
    return 0


def cmd_experiment_fit(args) -> int:
    with open(args.report) as fh:
        rows = parse_trials_csv(fh.read())
    stats = sorted({r.statistic for r in rows})
    out = {}
    for stat in stats:
        ns = sorted({r.n for r in rows if r.statistic == stat})
        meds = []
        for n in ns:
            vals = [r.normalized for r in rows
                    if r.statistic == stat and r.n == n and r.certificate != "failed"
                    and math.isfinite(r.normalized)]
            meds.append(float(np.median(vals)) if vals else math.nan)
        try:
            c_hat, drift = fit_scaling(ns, meds)
            out[stat] = {"c_hat": c_hat, "drift": drift}
        except Exception as exc:
            out[stat] = {"error": str(exc)}
    _write(args, json.dumps(out, indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convexholes",
                                description="Empty-region statistics of random point sets")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--stream", type=int, default=0)
        if n:
            sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--body", default="unit_square",
                        help="'unit_square' or a JSON body file")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("sample", help="draw a uniform sample")
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("occupancy", help="empty-strip occupancy statistics")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_occupancy)

    sp = sub.add_parser("maxrect", help="largest empty axis rectangle + net status")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.set_defaults(func=cmd_maxrect)

    np_ = sub.add_parser("net", help="rectangle net operations")
    nsub = np_.add_subparsers(dest="net_command", required=True)
    sp = nsub.add_parser("build", help="materialize a small net as JSON lines")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--max-rects", type=int, default=2_000_000)
    sp.add_argument("--t-limit", dest="t_limit", type=int, default=None,
                    help="materialize only inclinations t < t_limit")
    sp.set_defaults(func=cmd_net_build)
    sp = nsub.add_parser("verify", help="random-rectangle completeness check")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--trials", type=int, default=200)
    sp.set_defaults(func=cmd_net_verify)

    sp = sub.add_parser("maxhole", help="largest empty homothet of a shape")
    common(sp)
    sp.add_argument("--shape", default="square",
                    help="'square', 'disk', 'rect2', or a JSON body file")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.set_defaults(func=cmd_maxhole)

    sp = sub.add_parser("polymax", help="largest empty convex polygon")
    common(sp)
    sp.add_argument("--max-exact-n", dest="max_exact_n", type=int, default=300)
    sp.set_defaults(func=cmd_polymax)

    sp = sub.add_parser("stripquad", help="empty-strip quadrilateral construction")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--delta", type=float, default=0.2)
    sp.set_defaults(func=cmd_stripquad)

    sp = sub.add_parser("holebounds", help="two-sided convex hole bounds")
    common(sp)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.set_defaults(func=cmd_holebounds)

    ep = sub.add_parser("experiment", help="scaling experiments")
    esub = ep.add_subparsers(dest="experiment_command", required=True)
    sp = esub.add_parser("run", help="run an experiment from a JSON config")
    sp.add_argument("config")
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_experiment_run)
    sp = esub.add_parser("fit", help="fit scaling constants from a trials CSV")
    sp.add_argument("report")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_experiment_fit)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
