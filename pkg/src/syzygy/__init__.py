from .conversion import (
    build_tilde_N_star,
    compute_K_ef,
    derive_conversion,
    extend_tilde_M,
    from_unimodular_M,
    make_unimodular_M,
    n_star_from_completion,
    unimodular_conversion,
)
from .generator import random_grade2_instance
from .instance import (
    AlignmentStatus,
    BoundCheck,
    ConversionPair,
    Grade2Instance,
    Strategy,
    SyzygyBasis,
    VerificationReport,
)
from .pipeline import compute_syzygy_basis, cross_check_strategies, prepare_instance
from .strategies import (
    aligned_bases_check,
    basis_via_M,
    basis_via_N,
    basis_via_tilde_M,
    n_star_star,
    unit_ideal_basis,
)
from .verification import bases_equivalent, change_of_basis, verify_basis
