"""Relaxed-locality Bell polytopes, two-qubit strategies and leaky-CHSH randomness."""

from .behaviors import (
    CHSH,
    BellScenario,
    ConditionalBehavior,
    InputDistribution,
    JointBehavior,
    joint_from_conditional,
    marginals,
    product_behavior,
    signaling_deficit,
)
from .geometry import (
    LinearFunctional,
    MembershipResult,
    build_inequality,
    is_facet,
    max_over_vertices,
    membership,
    polytope_dim,
    saturating_vertices,
)
from .numerics import (
    LPProblem,
    MixedPolicyError,
    NumericBreakdown,
    affine_rank,
    det_exact,
    lp_solve,
    parse_scalar,
)
from .quantum import (
    QubitObservable,
    TwoQubitState,
    TwoQubitStrategy,
    behavior_of,
    chsh_leak_strategy,
    chsh_leak_value,
    operator_norm_diff,
    tilted_hardy_strategy,
    tilted_hardy_value,
)
from .randomness import (
    GuessCurvePoint,
    OracleParams,
    beta_c,
    beta_q,
    beta_star,
    curve,
    guessing_probability,
    hmin,
    oracle_max_chsh,
    pbar_g,
)
from .vertices import (
    RelaxationParams,
    VertexSet,
    input_vertices,
    marginal_vertex_pairs,
    marginal_vertices,
    mdpdl_vertices,
    pd_conditional_vertices,
)

__version__ = "0.1.0"
