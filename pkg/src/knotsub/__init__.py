"""Knotted (circle) subgroups generated by one-parameter subgroups of matrix Lie groups."""
from .algebras import (
    AlgebraFamily,
    LieAlgebraElement,
    Sl2Coords,
    build_sl2,
    build_su2_sigma,
    check_membership,
    element,
    pauli_basis,
    sl3_form,
)
from .canonical import (
    CanonicalForm,
    ambient_path,
    canonical_sl2,
    canonical_sl3,
    canonical_so,
    canonical_su,
)
from .classify import (
    Classification,
    FrequencyVector,
    IntegerForm,
    TorusKnotType,
    Verdict,
    classify,
    commensurate,
    minimal_period,
    spectrum_frequencies,
    torus_knot_type,
)
from .exceptions import (
    DomainError,
    InvalidInputError,
    KnotsubError,
    NotPeriodicError,
    PreconditionError,
    UnsupportedDimensionError,
)
from .linalg import (
    EigenPair,
    hermitian_eigs,
    mat_exp,
    principal_log_unitary,
    skew_block_schur,
    small_eigs,
)
from .oracle import closed_form_sl2, closed_form_sl3, detect_period_numeric

__version__ = "0.1.0"
