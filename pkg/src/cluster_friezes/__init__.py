"""Exact cluster mutation, tropical points, frieze patterns and the
finite-type duality pairing."""

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InternalDisagreement,
    NegativeExponent,
    NotAdmissible,
    NotDivisible,
    NotFiniteType,
    NotFound,
    SubtractionFreeViolation,
    TropOverflow,
    ZeroDenominator,
)
from .laurent import (
    TROP_LIMIT,
    IntLaurentPoly,
    RationalFunction,
    check_trop,
    exact_div,
    poly_gcd,
    rf_reduce,
    substitute_monomials,
    trop_add,
    trop_eval,
    trop_mul,
)
from .mutation import (
    GCFData,
    MutationMatrix,
    Seed,
    canonical_address,
    enumerate_exchange_graph,
    extract_gcf,
    is_cluster_monomial,
    is_global_Y_monomial,
    mutate_A_seed,
    mutate_matrix,
    mutate_Y_seed,
    principal_pattern_at,
    seed_at,
    separation_check,
)
from .tropical import (
    TropPoint,
    beta_map,
    check_admissible_A,
    check_admissible_Y,
    coords_at,
    d_compat_degree,
    d_trop_point,
    g_vector_of_cluster_monomial,
    p_map,
    trop_mutate_A,
    trop_mutate_Y,
)
from .friezes import (
    CartanMatrix,
    FriezeFunction,
    PLMap,
    additive_extend,
    belts,
    ensemble_map_friezes,
    extend,
    f_from_admissible_y,
    f_from_trop_point,
    generic_A_frieze,
    generic_Y_frieze,
    hammock,
    k_from_admissible_x,
    k_from_trop_point,
    shift,
    shift_trop,
    slice_step,
)
from .finite import (
    Classification,
    FAMap,
    RootSystemData,
    classify,
    coxeter_data,
    d_duality_check,
    decompose_hammocks,
    fim_recursion,
    finite_context,
    mono_from_gvector_A,
    mono_from_gvector_Y,
    named_cartan,
    pairing,
    verify_periodicity,
    x_from_rho,
    y_from_delta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
