"""Exact invariant approximate subgroups for finite uniform families."""
from .approx import (
    ApproximateSubgroup,
    CommensurabilityCertificate,
    Family,
    commensurability,
    family_square,
    family_validate,
    minimal_doubling,
    product_commensurability_witness,
    xx_intersection_witness,
)
from .covering import (
    CoverCertificate,
    PackingCertificate,
    check_cover_bound,
    covering_number,
    maximal_disjoint_family,
    packing_index,
)
from .errors import (
    ApproxGroupError,
    CapExceeded,
    CayleyError,
    EmptyInput,
    FamilyTooLargeForExhaustive,
    GroupMismatch,
    LemmaViolation,
    MissingIdentity,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotSymmetric,
    OrderCapExceeded,
    SearchBudgetExceeded,
)
from .groups import (
    Automorphism,
    FiniteGroup,
    GroupSubset,
    apply_automorphism,
    automorphisms,
    generated_subgroup,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_from_cayley,
    set_inverse,
    set_power,
    set_product,
)
from .pipeline import PipelineResult, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "ApproximateSubgroup",
    "CommensurabilityCertificate",
    "Family",
    "commensurability",
    "family_square",
    "family_validate",
    "minimal_doubling",
    "product_commensurability_witness",
    "xx_intersection_witness",
    "CoverCertificate",
    "PackingCertificate",
    "check_cover_bound",
    "covering_number",
    "maximal_disjoint_family",
    "packing_index",
    "Automorphism",
    "FiniteGroup",
    "GroupSubset",
    "apply_automorphism",
    "automorphisms",
    "generated_subgroup",
    "make_cyclic",
    "make_dihedral",
    "make_direct_product",
    "make_from_cayley",
    "set_inverse",
    "set_power",
    "set_product",
    "PipelineResult",
    "run_pipeline",
    "ApproxGroupError",
    "CapExceeded",
    "CayleyError",
    "EmptyInput",
    "FamilyTooLargeForExhaustive",
    "GroupMismatch",
    "LemmaViolation",
    "MissingIdentity",
    "NoIdentity",
    "NoInverse",
    "NotAssociative",
    "NotSymmetric",
    "OrderCapExceeded",
    "SearchBudgetExceeded",
]
