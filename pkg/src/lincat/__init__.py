"""Exact computational algebra for finite linear categories."""

from .fields import QQ, GF, DualNumbers, FieldSpec
from .errors import (
    AlgebraMismatch,
    AxiomViolation,
    BadParams,
    DegreeTooLarge,
    DomainViolation,
    FieldMismatch,
    InputError,
    InvalidFamily,
    LincatError,
    MissingUnits,
    NotACocycle,
    NotAPoint,
    NotComposable,
    NotIdempotent,
    NotIdempotentModEps,
    ParseError,
    SearchTooLarge,
    ShapeMismatch,
    UnknownName,
)
from .linalg import Matrix, SparseIntMatrix, kernel_basis, rank, rref, solve
from .core import (
    GraphType,
    IdempotentFamily,
    LinCat,
    alg_dim,
    alg_mul,
    alg_unit,
    catalog,
    catalog_names,
    category_from_idempotents,
    compose,
    disjoint_union,
    extend_to_duals,
    matrix_ring,
    matrix_ring_layout,
    new_lincat,
    opposite,
    structural_equal,
    tensor_product,
    validate,
    validate_idempotent_family,
)
from .functors import (
    LinFunctor,
    NatTrans,
    compose_functors,
    find_isomorphism,
    identity_functor,
    identity_nat,
    is_equivalence,
    is_nat_iso,
    new_functor,
    new_nat_trans,
    validate_functor,
    validate_nat_trans,
    vertical_compose,
)
from .hochschild import (
    Cochain,
    CohomologyReport,
    DeformedCat,
    NonTrivial,
    Trivial,
    apply_differential,
    center,
    cochain_dim,
    cochain_from_map,
    cohomology,
    deform,
    deformed_law_violations,
    derivations,
    differential_matrix,
    hh_dims,
    inner_derivations,
    nat_iso_from_0cochain,
    normalized_two_cocycles,
    random_cochain,
    trivialize,
    zero_cochain,
)
from .bimodules import (
    Bimodule,
    BimoduleMap,
    DualReport,
    Invertible,
    NotInvertible,
    Pairing,
    bimodule_map_space,
    bimodule_of_functor,
    dual_and_pairings,
    enveloping_module,
    ext_ranks,
    find_bimodule_isomorphism,
    hochschild_dims_by_ext,
    is_invertible,
    module_ext_complex,
    morita_check,
    new_bimodule,
    regular_bimodule,
    tensor_over_middle,
    validate_bimodule,
    validate_bimodule_map,
)
from .karoubi import (
    KaroubiFragment,
    KaroubianReport,
    KaroubiObject,
    NotPresent,
    Split,
    biproduct_object,
    build_fragment,
    embed,
    is_karoubian_within,
    new_karoubi_object,
    split_projector,
    unit_object,
    zero_object,
)
from .lifting import (
    DualMatrix,
    dual_identity,
    embed_base_vector,
    lift_algebra_idempotent,
    lift_idempotent,
    lift_orthogonal_family,
    lift_projective_presentation,
    new_dual_matrix,
    reduction_algebra,
)
from .moduli import (
    EnumerationResult,
    InclusionReport,
    Poly,
    PolySystem,
    TangentSpace,
    check_hz2_inclusion,
    emit_system,
    enumerate_points,
    structure_point,
    tangent_space,
)

__version__ = "0.1.0"
