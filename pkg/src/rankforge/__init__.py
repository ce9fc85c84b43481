"""Rank-metric codes as spaces of linearized polynomials over finite fields."""
from .constructions import (
    FunctionalPair,
    TwistSpec,
    admissible_eta,
    gabidulin,
    general_twisted,
    twist_spec,
    twisted,
)
from .equivalence import (
    Isometry,
    apply_isometry,
    brute_force_aut,
    gabidulin_subspaces,
    left_idealiser,
    predicted_aut_gabidulin,
    predicted_aut_twisted,
    right_idealiser,
    twisted_equivalent,
    verify_aut,
)
from .errors import RankForgeError
from .field import FFElement, FieldCtx, make_field_ctx, paper_field
from .linpoly import LinearizedPoly, compose, evaluate, kernel, parse_poly, rank
from .rankcode import (
    RankMetricCode,
    adjoint_code,
    delsarte_dual,
    is_mrd,
    make_code,
    min_distance,
    puncture,
    rank_distribution,
    sets_equal,
)
from .representation import MatrixFq, generator_matrix, matrix_to_poly, poly_to_matrix
from .search import dedup_by_invariants, extend_code, is_maximal
from .spreads import (
    gtf_mult,
    has_zero_divisors,
    is_field_spread,
    is_scattered,
    lift,
    lifted_min_distance,
    linear_set_size,
    scattered_code,
    spread_mult_from_code,
    subspace_distance,
)

__version__ = "0.1.0"
