"""Computational engine for Temperley-Lieb subproduct systems.

Classifies Temperley-Lieb polynomials, builds Jones-Wenzl projection towers
and truncated Fock-space creation operators, certifies the generator
relations and decay estimates numerically, and computes the fusion and
K-theory data of the associated free orthogonal quantum group.
"""

from .errors import (
    BadCoefficients,
    MemoryBudgetExceeded,
    NotAProjection,
    NotTemperleyLieb,
    ProjectionDrift,
    TlsubError,
    TruncationTooSmall,
    UsageError,
    TauUndefined,
)
from .fock import (
    FockOperators,
    FockSpace,
    GaugeDiagonal,
    RelationReport,
    boundary_flatness,
    build_fock,
    commutator_norms,
    gauge_degree,
    phi_element,
    psi_map,
    tail_projections,
    theta_map,
    verify_relations,
    word_matrix,
)
from .ktheory import (
    K0Group,
    KPairingMatrix,
    RepClass,
    fuse,
    k0_order,
    mult_in_fock_rep,
    pi_star_matrix,
)
from .linalg import adjoint, kron, operator_norm, range_basis, scalar_budget
from .tl import (
    AntiLinearOp,
    TLInvariants,
    TLSystem,
    invariants_close,
    invariants_of,
    normal_form,
    params_from_polynomial,
    projection_of,
    tl_check,
    tl_relation_residuals,
    vector_of,
)
from .wenzl import (
    JWTower,
    build_tower,
    dims_by_recurrence,
    phi,
    q_integer,
    subspace_basis,
    wenzl_defect,
)

__version__ = "0.1.0"
