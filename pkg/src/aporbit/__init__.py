"""Workbench for recurrence of weighted backward shifts.

Exact rational orbits and return sets, arithmetic-progression structure
of integer sets, constructive recurrence witness searches, and the
iterated-logarithm growth table — all decisions exact unless a float
mode is explicitly requested.
"""

from .errors import (
    BudgetExceededError,
    DomainError,
    InvalidArgumentError,
    ModeMismatchError,
    MonotonicityError,
    PreconditionError,
    SchemaError,
    StageFailureError,
    WorkbenchError,
)
from .families import (
    APWitness,
    ColoringResult,
    DensityEstimate,
    HitSet,
    StepVerdict,
    ap_bar_estimate,
    coloring_avoids_progressions,
    count_aps_with_step,
    density_report,
    find_ap,
    find_homogeneous_ap,
    longest_ap,
    szemeredi_r,
    szemeredi_r_naive,
    vdw_check,
    verify_witness,
)
from .gowers import (
    GowersRow,
    check_growth_monotone,
    gowers_bound,
    gowers_row,
    gowers_table,
    growth_profile,
    guaranteed_ap_length,
    is_vacuous_length,
    power_identity_residual,
    profile_inverse,
)
from .recurrence import (
    CriterionReport,
    DecayProbe,
    DecayReport,
    NestedRefinement,
    NestedStage,
    PairWitness,
    RecurrenceWitness,
    homogeneous_ap_union,
    inverse_witness,
    joint_return_count,
    lift_vector,
    membership_gap,
    multirec_candidate,
    multirec_witness,
    nested_ball_refinement,
    pair_recurrence_search,
    return_set,
    sequence_decay_check,
    shift_ap_criterion,
    universal_vector,
    verify_return_times,
    verify_universal,
)
from .spaces import (
    BILATERAL,
    FLOAT_MEMBERSHIP_TOL,
    INF,
    UNILATERAL,
    BackwardShift,
    Ball,
    ConstantWeights,
    DirectSum,
    DyadicSqrtScalars,
    ExplicitScalars,
    ExplicitWeights,
    ExpSqrtScalars,
    FiniteVector,
    ForwardShift,
    Iterates,
    OneScalars,
    Power,
    ScaledIterates,
    Scaled,
    SpaceSpec,
    UnitWeights,
    ValleyWeights,
    apply,
    in_ball,
    invert,
    iterate,
    norm_le,
    norm_lt,
    operator_space,
    orbit,
    weight_product,
)

__version__ = "0.1.0"
