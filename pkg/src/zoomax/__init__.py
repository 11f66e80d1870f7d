"""Subaction construction and verification for expanding and zooming maps."""

from .contractions import AxiomReport, ContractionSeq, TailSum, tail_sum, validate_contraction
from .dynamics import (
    AdicGrid,
    Domain,
    InverseBranch,
    MapModel,
    Orbit,
    birkhoff_sum,
    covering_time,
    derivative_product,
    iterate,
    node_budget,
    preimages,
)
from .ergopt import (
    DefectReport,
    ErgodicValueEstimate,
    HolderPotential,
    PeriodicOrbit,
    SandwichResult,
    SubactionGrid,
    estimate_ergodic_value,
    holder_seminorm_estimate,
    lax_oleinik_fixed_point,
    make_potential,
    mane_subaction,
    periodic_points,
    supplied_subaction,
    two_sided_sandwich,
    verify_subcohomology,
)
from .families import (
    ConditionReport,
    QuadraticFamily,
    VianaParams,
    collet_eckmann_check,
    expansion_outside_check,
    make_expanding_circle,
    make_quadratic,
    make_viana,
    slow_recurrence_check,
    viana_step,
)
from .shiftspace import (
    CylinderCertificate,
    ShiftSpace,
    SymbolicPoint,
    WeightedShiftMetric,
    cylinder_contraction_check,
    shift_metric,
    validate_weights,
)
from .zooming import (
    DistortionReport,
    ExpansionBounds,
    FrequencyStats,
    HyperbolicParams,
    TimeRecord,
    check_bounded_distortion,
    detect_hyperbolic_times,
    hyperbolic_frequency,
    is_hyperbolic_time,
    local_expansion_bounds,
    truncated_distance,
    verify_preball_contraction,
)

__version__ = "0.1.0"
