"""Empty-region statistics of random point sets in convex bodies.

Exact planar convex geometry, certified witness families for rectangle and
homothet holes, empty convex polygon search, and a seeded Monte Carlo
harness that measures the log(n)/n scaling of the largest-hole statistics.
"""

from .geometry import (
    AffineMap,
    ConvexBody,
    ConvergenceFailure,
    InvalidTarget,
    OrientedRect,
    TooFewCells,
    area,
    body_contains_rect,
    contains_point,
    diameter,
    equal_area_partition,
    inner_offset,
    lassak_rectangles,
    normalize_to_unit_area,
    rect_contains_rect,
    solve_inner_offset,
)
from .harness import ExperimentConfig, ScalingReport, fit_scaling, run_experiment
from .holes import (
    ConvexChain,
    convex_hole_bounds,
    polymax,
    polymax_oracle,
    strip_quadrilateral,
)
from .homothet import (
    HomothetNet,
    HomothetPlacement,
    build_homothet_net,
    largest_empty_disk_oracle,
    largest_empty_homothet,
    lower_bound_partition,
    net_emptiness,
    verify_translate_cover,
)
from .occupancy import (
    NotAPartition,
    chebyshev_empty_regions_bound,
    empty_bin_moments,
    simulate_partition_occupancy,
)
from .rect_nets import (
    NetParams,
    RectNet,
    build_rect_net,
    make_net_params,
    max_empty_axis_rect,
    max_empty_axis_rect_oracle,
    net_contains_witness,
    net_max_empty_rect,
    quantize_rectangle,
)
from .sampling import PointSample, SeedSpec, sample_uniform

__version__ = "0.1.0"
