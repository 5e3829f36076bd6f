"""h-influences of Boolean functions on discrete and continuous cubes."""

from .cube import (
    CubeFunction,
    ProductMeasure,
    cube_boundary_measure,
    cube_expectation,
    cube_h_influence,
    cube_influence_vector,
    enumerate_monotone,
    is_monotone_cube,
    parse_measure,
)
from .discretize import (
    BitGrouping,
    default_bits,
    discretize,
    dual,
    grouped_bit_influence_sums,
    lift_biased,
)
from .families import (
    FamilyInstance,
    corner,
    padded_tribes,
    parse_family,
    random_grid,
    threshold_family,
    tribes,
    tribes_r_hint,
)
from .grid import (
    FiberProfile,
    GridFunction,
    common_grid,
    fiber_ones_counts,
    fiber_profile,
    grid_boundary_measure,
    grid_expectation,
    grid_h_influence,
    grid_influence_vector,
    intersection_mass,
    refine,
)
from .kernels import (
    InfluenceKernel,
    catalogue_kernel,
    check_concave,
    check_dominates_entropy,
    entropy,
    load_tabulated_kernel,
    parse_kernel,
    tabulated_kernel,
)
from .monotone import (
    ColumnReorder,
    MoveOne,
    ShiftTrace,
    is_monotone,
    monotonize,
    monotonize_coord,
    shift_trace,
)
from .theorems import (
    DegenerateInstance,
    InequalityReport,
    averaged_correlation_check,
    best_junta_error,
    bkkkl_report,
    boundary_report,
    correlation_report,
    harris_kleitman_check,
    kkl_sum_report,
    min_junta_size,
    normalization_constant,
    talagrand_report,
)

__version__ = "0.1.0"
