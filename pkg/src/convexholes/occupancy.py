"""Bins-and-balls moments, the Chebyshev empty-region bound, and empirical
occupancy counts over equal-area partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import ConvexBody
from .sampling import PointSample


class NotAPartition(ValueError):
    """Supplied regions overlap or leave a gap beyond tolerance."""


@dataclass(frozen=True)
class OccupancyMoments:
    k: int
    n: int
    expected_empty: float
    variance_empty: float


def empty_bin_moments(k: int, n: int, exact: bool = False):
    """First two moments of the number of empty bins when n balls land
    uniformly in k bins.

    E[Y] = k(1-1/k)^n and
    Var[Y] = k(1-1/k)^n + k(k-1)(1-2/k)^n - k^2 (1-1/k)^(2n).

    Floating evaluation goes through n*log1p(-1/k) so large n does not
    underflow inside the power; ``exact=True`` evaluates the same formulas
    in rational arithmetic and returns Fractions.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    if exact:
        p1 = Fraction(k - 1, k) ** n
        p2 = Fraction(k - 2, k) ** n if k >= 2 else Fraction(0)
        e = k * p1
        var = k * p1 + k * (k - 1) * p2 - k * k * p1 * p1
        return OccupancyMoments(k, n, e, var)
    if k == 1:
        e = 1.0 if n == 0 else 0.0
        return OccupancyMoments(k, n, e, 0.0)
    lp1 = n * math.log1p(-1.0 / k)
    e = math.exp(math.log(k) + lp1)
    term2 = 0.0
    if k > 2:
        term2 = math.exp(math.log(k) + math.log(k - 1) + n * math.log1p(-2.0 / k))
    elif k == 2 and n == 0:
        term2 = 2.0
    term3 = math.exp(2.0 * math.log(k) + 2.0 * lp1)
    var = max(e + term2 - term3, 0.0)
    return OccupancyMoments(k, n, e, var)


@dataclass(frozen=True)
class ChebyshevEmptyBound:
    """Threshold and failure-probability bound for the empty-region count.

    ``prob_bound`` is the asymptotic form 4(1-eps)log(n)/n^eps;
    ``prob_bound_exact`` evaluates the same Chebyshev chain 4/E[X] with the
    exact expectation at k = round(n/((1-eps)log n)) regions.
    """

    threshold: float
    prob_bound: float
    prob_bound_exact: float
    regions: int


def chebyshev_empty_regions_bound(n: int, epsilon: float) -> ChebyshevEmptyBound:
    if n < 3:
        raise ValueError("n must be >= 3")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    logn = math.log(n)
    threshold = n ** epsilon / (2.0 * (1.0 - epsilon) * logn)
    prob = 4.0 * (1.0 - epsilon) * logn / n ** epsilon
    k = max(1, round(n / ((1.0 - epsilon) * logn)))
    e_exact = empty_bin_moments(k, n).expected_empty
    prob_exact = min(1.0, 4.0 / e_exact) if e_exact > 0 else 1.0
    return ChebyshevEmptyBound(threshold, prob, prob_exact, k)


@dataclass
class OccupancyCount:
    empty_count: int
    empty_flags: np.ndarray
    assignment: np.ndarray


def simulate_partition_occupancy(body: ConvexBody, regions, sample: PointSample,
                                 check: bool = True) -> OccupancyCount:
    """Empty flags per region against a sample: a region is empty iff no
    point lies in its open interior.  Boundary points are assigned to the
    lowest-index region whose closed set contains them.
    """
    pts = sample.points
    m = len(regions)
    if check:
        total = sum(r.area for r in regions)
        if abs(total - body.area) > max(1e-9 * m, 1e-12):
            raise NotAPartition(f"region areas sum to {total}, body area {body.area}")
    flags = np.ones(m, dtype=bool)
    assignment = np.full(len(pts), -1, dtype=int)
    open_hits = np.zeros(len(pts), dtype=int)
    for i, reg in enumerate(regions):
        if len(pts):
            inside_open = reg.contains_open(pts)
            open_hits += inside_open
            flags[i] = not inside_open.any()
            closed = reg.contains_closed(pts)
            fresh = closed & (assignment < 0)
            assignment[fresh] = i
        else:
            flags[i] = True
    if check and len(pts):
        if (assignment < 0).any():
            raise NotAPartition("a sample point is covered by no region")
        if (open_hits > 1).any():
            raise NotAPartition("a sample point lies in two open interiors")
    return OccupancyCount(int(flags.sum()), flags, assignment)


def occupancy_csv(rows) -> str:
    """CSV emitter: (k, n, expected, variance, empirical_mean, empirical_var, trials)."""
    out = ["k,n,expected,variance,empirical_mean,empirical_var,trials"]
    for r in rows:
        out.append("%d,%d,%r,%r,%r,%r,%d" % tuple(r))
    return "\n".join(out) + "\n"
