"""Exact equivariant intersection numbers on nested Hilbert schemes of
points in affine space.

Two independent engines compute the same virtual integrals: a fixed-point
localization sum over nested partition chains, and an iterated-residue
formula that needs no fixed-point enumeration.  All arithmetic is exact
over the rationals.
"""

from .algebra import (
    FactoredRational,
    LinearForm,
    SparsePolynomial,
    evaluate,
    homogeneous_degree,
    linear_form_of,
    rational_equal,
    sum_factored,
)
from .errors import (
    DegenerateRestriction,
    DivisionByZero,
    InconsistentVirtualDimension,
    IndexOutOfRange,
    MissingVariable,
    NahilbError,
    NoFixedPoints,
    NonElimination,
    NotBisymmetric,
    NotInFiber,
    NotPolynomial,
    ParseError,
    RequiresFullFlag,
    RequiresNilfil,
    RequiresPointedDims,
    SizeGuardExceeded,
    TooManyPoints,
)
from .localization import (
    IntegralResult,
    TautClass,
    chern_taut,
    contribution,
    cy_restrict,
    integrate_localization,
    reduce_full_flag,
    restrict_class,
    virtual_dimension,
)
from .partitions import (
    Enumeration,
    NestedPartition,
    all_enumerations,
    canonical_enumeration,
    enumerate_nested,
    enumerate_partitions,
    flag_cosets,
    identity_sigma,
    in_flag_fiber,
    is_admissible,
    is_nilfil,
    max_points,
    point_levels,
    porteous,
)
from .residues import (
    RESIDUE_SIGN,
    ResidueForm,
    flag_fiber_Q,
    integrate_residue_nilfil,
    iterated_residue,
    residue_term,
    residue_term_vanishes,
    weighted_residue_rhs,
)
from .weights import (
    SignedWeightMultiset,
    epunct_class,
    euler_class,
    fiber_tangent_class,
    fixed_ranks,
    flag_tangent_euler,
    obstruction_class,
    tangent_class,
    tangent_class_punctual,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateRestriction",
    "DivisionByZero",
    "Enumeration",
    "FactoredRational",
    "InconsistentVirtualDimension",
    "IndexOutOfRange",
    "IntegralResult",
    "LinearForm",
    "MissingVariable",
    "NahilbError",
    "NestedPartition",
    "NoFixedPoints",
    "NonElimination",
    "NotBisymmetric",
    "NotInFiber",
    "NotPolynomial",
    "ParseError",
    "RESIDUE_SIGN",
    "RequiresFullFlag",
    "RequiresNilfil",
    "RequiresPointedDims",
    "ResidueForm",
    "SignedWeightMultiset",
    "SizeGuardExceeded",
    "SparsePolynomial",
    "TautClass",
    "TooManyPoints",
    "all_enumerations",
    "canonical_enumeration",
    "chern_taut",
    "contribution",
    "cy_restrict",
    "enumerate_nested",
    "enumerate_partitions",
    "epunct_class",
    "euler_class",
    "evaluate",
    "fiber_tangent_class",
    "fixed_ranks",
    "flag_cosets",
    "flag_fiber_Q",
    "flag_tangent_euler",
    "homogeneous_degree",
    "identity_sigma",
    "in_flag_fiber",
    "integrate_localization",
    "integrate_residue_nilfil",
    "is_admissible",
    "is_nilfil",
    "iterated_residue",
    "linear_form_of",
    "max_points",
    "obstruction_class",
    "point_levels",
    "porteous",
    "rational_equal",
    "reduce_full_flag",
    "residue_term",
    "residue_term_vanishes",
    "restrict_class",
    "sum_factored",
    "tangent_class",
    "tangent_class_punctual",
    "virtual_dimension",
    "weighted_residue_rhs",
]
