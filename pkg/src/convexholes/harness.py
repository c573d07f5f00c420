"""Experiment orchestration: seeded trials, per-statistic certificates,
scaling-law aggregation, and deterministic CSV reports.

Every trial derives its sample stream from (master_seed, n, trial) through a
stable 64-bit mix, so reruns are byte-identical regardless of worker count;
statistics computed within one trial share the sample and the exact
rectangle sweep.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import _kernels
from .geometry import ConvexBody, OrientedRect, halfplane_polygon
from .homothet import (
    HomothetNet,
    build_homothet_net,
    largest_empty_homothet,
    net_emptiness,
)
from .holes import polymax, strip_quadrilateral
from .occupancy import empty_bin_moments
from .rect_nets import (
    CERTIFIED,
    EMPTY_MEMBER,
    UNDECIDED,
    make_net_params,
    net_contains_witness,
    net_max_empty_rect,
)
from .sampling import PointSample, SeedSpec, mix64, sample_uniform


class InsufficientData(ValueError):
    """Scaling fit needs at least three n values."""


STATISTICS = ("occupancy", "maxrect", "max_l", "polymax", "stripquad", "bounds")
_STAT_ID = {name: i + 1 for i, name in enumerate(STATISTICS)}

CERT_CERTIFIED = "certified"
CERT_LOWER = "lower_only"
CERT_FAILED = "failed"


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple
    epsilon: float = 0.1
    delta: float = 0.2
    trials_per_n: int = 10
    master_seed: int = 0
    which: tuple = ("max_l",)
    body: str = "unit_square"
    shape: str = "square"
    workers: int = 1
    polymax_max_n: int = 300
    rect_level_budget: int = 40_000
    homothet_cert_max_lattice: int = 40_000_000

    def __post_init__(self):
        ns = tuple(int(v) for v in self.n_values)
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be >= 1")
        unknown = set(self.which) - set(STATISTICS)
        if unknown:
            raise ValueError(f"unknown statistics: {sorted(unknown)}")
        object.__setattr__(self, "n_values", ns)
        object.__setattr__(self, "which", tuple(self.which))

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        return ExperimentConfig(**json.loads(text))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass(frozen=True)
class TrialRow:
    statistic: str
    n: int
    trial: int
    seed: int
    value: float
    normalized: float
    certificate: str
    bound: float = math.inf


def resolve_body(spec) -> ConvexBody:
    if isinstance(spec, ConvexBody):
        return spec
    if spec == "unit_square":
        return ConvexBody.unit_square()
    if isinstance(spec, dict):
        return ConvexBody(spec["vertices"])
    raise ValueError(f"unknown body spec {spec!r}")


def resolve_shape(spec) -> ConvexBody:
    if isinstance(spec, ConvexBody):
        return spec
    if spec == "square":
        return ConvexBody([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    if spec == "disk":
        return ConvexBody.regular_polygon(64, 1.0)
    if spec == "rect2":
        return ConvexBody([(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)])
    if isinstance(spec, dict):
        return ConvexBody(spec["vertices"])
    raise ValueError(f"unknown shape spec {spec!r}")


def _is_axis_unit_square(body: ConvexBody) -> bool:
    v = body.vertices
    return len(v) == 4 and set(map(tuple, v)) == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}


def _is_axis_square_shape(shape: ConvexBody) -> bool:
    v = shape.vertices
    if len(v) != 4:
        return False
    xs, ys = np.unique(v[:, 0]), np.unique(v[:, 1])
    return len(xs) == 2 and len(ys) == 2 and abs((xs[1] - xs[0]) - (ys[1] - ys[0])) < 1e-12


def run_trial(config: ExperimentConfig, n: int, trial: int) -> list:
    """One seeded trial: shared sample + sweep, one row per statistic."""
    body = resolve_body(config.body)
    shape = resolve_shape(config.shape)
    stream = mix64(n, trial, 0)
    seed = SeedSpec(config.master_seed, stream)
    sample = sample_uniform(body, n, seed)
    logn = math.log(n)
    norm = n / logn
    eps = config.epsilon
    square_fast = _is_axis_unit_square(body)

    sweep = None
    if square_fast:
        pts = sample.points
        sweep = _kernels.max_empty_rect_sweep(
            np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
            0.0, 1.0, 0.0, 1.0,
        )

    rows = []

    def emit(stat, value, certificate, bound=math.inf):
        rows.append(TrialRow(stat, n, trial, stream, float(value),
                             float(value) * norm, certificate, bound))

    rect_params = None
    rect_status = None
    if {"maxrect", "bounds"} & set(config.which):
        try:
            rect_params = make_net_params(n, eps, body)
        except ValueError:
            rect_params = None

    for stat in config.which:
        if stat == "occupancy":
            k = max(1, round(n / ((1.0 - eps) * logn)))
            empty = _strip_empty_count(body, sample, k, square_fast)
            emit(stat, float(empty), CERT_LOWER)
        elif stat == "maxrect":
            if rect_params is None:
                emit(stat, math.nan, CERT_FAILED)
                continue
            report = net_max_empty_rect(body, sample, rect_params,
                                        level_budget=config.rect_level_budget,
                                        presweep=sweep)
            rect_status = report.status
            cert = CERT_CERTIFIED if report.certified else CERT_LOWER
            emit(stat, report.lower, cert, report.upper_certified)
        elif stat == "max_l":
            value, cert, bound = _max_l_statistic(
                config, body, shape, sample, sweep, square_fast)
            emit(stat, value, cert, bound)
        elif stat == "polymax":
            if 3 <= n <= config.polymax_max_n:
                _, area, exact = polymax(sample, max_exact_n=config.polymax_max_n)
                emit(stat, area, CERT_LOWER)
            else:
                emit(stat, math.nan, CERT_FAILED)
        elif stat == "stripquad":
            if square_fast:
                rep = strip_quadrilateral(sample, eps, config.delta)
                if rep.found:
                    emit(stat, rep.area, CERT_LOWER)
                else:
                    emit(stat, 0.0, CERT_FAILED)
            else:
                emit(stat, math.nan, CERT_FAILED)
        elif stat == "bounds":
            lower, lcert = _bounds_lower(config, body, shape, sample, sweep, square_fast)
            if rect_status is None and rect_params is not None:
                report = net_max_empty_rect(body, sample, rect_params,
                                            level_budget=config.rect_level_budget,
                                            presweep=sweep)
                rect_status = report.status
            certified = rect_status == CERTIFIED and rect_params is not None
            upper = 2.0 * rect_params.area_hi if certified else math.inf
            emit(stat, lower, CERT_CERTIFIED if certified else CERT_LOWER, upper)
    return rows


def _strip_empty_count(body, sample, k, square_fast) -> int:
    if sample.n == 0:
        return k
    if square_fast:
        idx = np.clip((sample.points[:, 0] * k).astype(int), 0, k - 1)
    else:
        cuts = equal_area_strip_cuts(body, k)
        idx = np.clip(np.searchsorted(cuts, sample.points[:, 0], side="right") - 1,
                      0, k - 1)
    return int(k - len(np.unique(idx)))


def equal_area_strip_cuts(body: ConvexBody, k: int) -> np.ndarray:
    """x-cuts splitting the body into k vertical slabs of equal area."""
    from .geometry import _halfplane_area

    lo, hi = body.bounding_box()
    total = body.area
    cuts = [lo[0]]
    for j in range(1, k):
        want = total * j / k
        a, b = cuts[-1], hi[0]
        for _ in range(60):
            mid = 0.5 * (a + b)
            if _halfplane_area(body, 0.0, mid) < want:
                a = mid
            else:
                b = mid
        cuts.append(0.5 * (a + b))
    return np.array(cuts)


def _max_l_statistic(config, body, shape, sample, sweep, square_fast):
    n = sample.n
    eps = config.epsilon
    if square_fast and _is_axis_square_shape(shape) and sweep is not None:
        side = sweep[5]
        value = side * side
    else:
        res = largest_empty_homothet(body, shape, sample, eps, rounds=2, certify=False)
        value = res.area
    bound = math.inf
    cert = CERT_LOWER
    if n >= 16:
        try:
            net = build_homothet_net(body, shape, n, eps)
        except ValueError:
            net = None
        if net is not None and net.placement_count <= config.homothet_cert_max_lattice:
            rep = net_emptiness(net, sample)
            if rep.all_non_empty:
                cert = CERT_CERTIFIED
                bound = net.area_target
    return value, cert, bound


def _bounds_lower(config, body, shape, sample, sweep, square_fast):
    """Convex-hole lower bound: exact empty axis square, plus the exact
    empty convex polygon at small n."""
    lower = 0.0
    if square_fast and sweep is not None:
        lower = sweep[5] ** 2
    else:
        res = largest_empty_homothet(body, resolve_shape("square"), sample,
                                     config.epsilon, rounds=2, certify=False)
        lower = res.area
    if 3 <= sample.n <= config.polymax_max_n:
        _, area, _ = polymax(sample, max_exact_n=config.polymax_max_n)
        lower = max(lower, area)
    return lower, CERT_LOWER


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------


@dataclass
class StatAggregate:
    n: int
    count: int
    failures: int
    certified: int
    mean: float
    median: float
    std: float


@dataclass
class ScalingReport:
    config: ExperimentConfig
    rows: list
    aggregates: dict  # statistic -> [StatAggregate per n]
    trends: dict      # statistic -> [median normalized per n]
    verdicts: dict    # statistic -> {"c_hat", "drift", "diverging"}


def run_experiment(config: ExperimentConfig) -> ScalingReport:
    tasks = [(n, t) for n in config.n_values for t in range(config.trials_per_n)]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda nt: run_trial(config, *nt), tasks))
    else:
        results = [run_trial(config, *nt) for nt in tasks]
    rows = [r for chunk in results for r in chunk]
    rows.sort(key=lambda r: (_STAT_ID[r.statistic], r.n, r.trial))
    aggregates = {}
    trends = {}
    verdicts = {}
    for stat in config.which:
        per_n = []
        meds = []
        for n in config.n_values:
            vals = [r.normalized for r in rows
                    if r.statistic == stat and r.n == n and r.certificate != CERT_FAILED
                    and math.isfinite(r.normalized)]
            fails = sum(1 for r in rows if r.statistic == stat and r.n == n
                        and r.certificate == CERT_FAILED)
            certs = sum(1 for r in rows if r.statistic == stat and r.n == n
                        and r.certificate == CERT_CERTIFIED)
            if vals:
                arr = np.array(vals)
                agg = StatAggregate(n, len(vals), fails, certs, float(arr.mean()),
                                    float(np.median(arr)), float(arr.std()))
            else:
                agg = StatAggregate(n, 0, fails, certs, math.nan, math.nan, math.nan)
            per_n.append(agg)
            meds.append(agg.median)
        aggregates[stat] = per_n
        trends[stat] = meds
        if len([m for m in meds if math.isfinite(m)]) >= 3:
            c_hat, drift = fit_scaling(config.n_values, meds)
            verdicts[stat] = {
                "c_hat": c_hat,
                "drift": drift,
                "diverging": bool(abs(drift) > 0.5 * max(abs(c_hat), 0.1)),
            }
        else:
            verdicts[stat] = {"c_hat": math.nan, "drift": math.nan, "diverging": False}
    return ScalingReport(config, rows, aggregates, trends, verdicts)


def fit_scaling(n_values, medians):
    """(c_hat, drift): c_hat is the median normalized value at the largest
    n; drift is the slope of the medians against 1/log(n), scaled by
    1/log(n_max) so it measures the residual deviation at the largest n.
    Near-zero drift supports a limiting constant.
    """
    pairs = [(n, m) for n, m in zip(n_values, medians) if math.isfinite(m)]
    if len(pairs) < 3:
        raise InsufficientData("need at least 3 n values with data")
    xs = np.array([1.0 / math.log(n) for n, _ in pairs])
    ys = np.array([m for _, m in pairs])
    slope = float(np.polyfit(xs, ys, 1)[0])
    c_hat = pairs[-1][1]
    drift = slope * xs[-1]
    return float(c_hat), drift


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------

CSV_HEADER = "statistic,n,trial,seed,value,normalized,certificate"


def emit_trials_csv(rows) -> str:
    out = [CSV_HEADER]
    for r in rows:
        out.append("%s,%d,%d,%d,%r,%r,%s"
                   % (r.statistic, r.n, r.trial, r.seed, r.value, r.normalized,
                      r.certificate))
    return "\n".join(out) + "\n"


def parse_trials_csv(text: str) -> list:
    lines = text.strip().splitlines()
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        stat, n, trial, seed, value, normalized, cert = ln.split(",")
        rows.append(TrialRow(stat, int(n), int(trial), int(seed), float(value),
                             float(normalized), cert))
    return rows


def report_to_json(report: ScalingReport) -> str:
    return json.dumps(
        {
            "config": json.loads(report.config.to_json()),
            "aggregates": {
                stat: [asdict(a) for a in aggs]
                for stat, aggs in report.aggregates.items()
            },
            "trends": report.trends,
            "verdicts": report.verdicts,
        },
        indent=2,
        allow_nan=True,
    )
