"""Verified computation of staged (b, c)-shaped generalized inverses.

Exact engine over finite *-monoids, floating-point engine over complex
matrices, and a theorem-checking battery that validates the algebraic
claims the two engines rely on.
"""
from .monoid import (
    FiniteStarMonoid,
    build_matrix_monoid,
    build_zn_monoid,
    load_monoid,
    parse_universe,
    save_monoid,
)
from .search import (
    IndexSetReport,
    InverseKind,
    InverseResult,
    default_k_max,
    dual_stage_witnesses,
    find_along,
    find_bc,
    find_bc_core,
    find_bc_core_ep,
    find_bc_one_sided,
    find_core,
    find_core_ep,
    find_drazin,
    find_dual_bc_core_ep,
    find_group,
    find_i13,
    find_i14,
    find_mp,
    find_w_core,
    find_w_core_ep,
    kind_from_token,
    stage_witnesses,
    unit_regular_check,
    w_core_ep_stage_witnesses,
)
from .matrices import (
    CoreEpSolution,
    NotBCInvertibleError,
    NotCoreEpInvertibleError,
    RankProfile,
    bc_core_ep,
    bc_core_ep_index,
    bc_inverse,
    core_ep_rank_table,
    dual_bc_core_ep,
    load_matrix,
    matrix_from_jsonable,
    matrix_to_jsonable,
    one_three_inverse,
    pinv,
    projector,
    random_core_ep_instance,
    rank,
    save_matrix,
    solve_constrained,
    stage_data,
)
from .checks import (
    ALL_CHECKS,
    DEFAULT_UNIVERSES,
    TheoremCheck,
    checks_to_jsonable,
    ledger_table,
    run_all,
)

__version__ = "0.1.0"
