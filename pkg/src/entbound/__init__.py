"""Upper bounds on bipartite negativity from the purity of a mixed state."""
from .bounds import (
    BoundsReport,
    bounds_report,
    norm_bound_fixed_negatives,
    p_critical,
    q1_bound,
    q2_bound,
    q3_bound,
    q_min,
    rank_refined_bound,
)
from .states import (
    Bipartition,
    DensityMatrix,
    linear_entropy,
    negativity,
    partial_trace,
    partial_transpose_1,
    purity,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "BoundsReport",
    "DensityMatrix",
    "bounds_report",
    "linear_entropy",
    "negativity",
    "norm_bound_fixed_negatives",
    "p_critical",
    "partial_trace",
    "partial_transpose_1",
    "purity",
    "q1_bound",
    "q2_bound",
    "q3_bound",
    "q_min",
    "rank_refined_bound",
    "validate",
]
