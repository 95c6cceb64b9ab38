"""Exact verification of derangement determinant identities over cyclotomic fields."""

from .circulant import (
    CirculantSymbol,
    SpectrumResult,
    build_matrix,
    check_condition_iii,
    dft_eigenvalues,
    from_abc,
    from_sun1,
    from_sun2,
    from_values,
    parse_symbol,
    scan_abc,
)
from .cyclotomic import (
    ContextMismatch,
    CycNum,
    CyclotomicContext,
    context,
    cyclotomic_polynomial,
    parse_literal,
)
from .derangements import SignedPermutation, brute_det, count_derangements, derangements
from .errors import PreconditionError
from .identities import (
    VerificationReport,
    rhs_sun1,
    rhs_sun2,
    verify_c_s_eigenvalue,
    verify_eei_report,
    verify_lemma1,
    verify_scaling,
    verify_sun1,
    verify_sun2,
    verify_theorem3,
)
from .linalg import (
    BasisSpec,
    ExactMatrix,
    SingularMatrixError,
    determinant,
    minor,
    solve,
)

__version__ = "0.1.0"
