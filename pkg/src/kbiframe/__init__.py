"""Certification and theorem auditing for K-biframes in C^n."""

from .audit import STATEMENTS, AuditReport, run_audit
from .certify import (
    UNBOUNDED,
    BoundProblem,
    ClaimedBoundCheck,
    KBiframeCertificate,
    certify_biframe,
    certify_frame,
    certify_k_biframe,
    certify_k_frame,
    certify_with_claims,
    check_claimed_bounds,
    optimal_lower_bound,
    optimal_upper_bound,
)
from .errors import (
    BadParametersError,
    DimensionMismatchError,
    KBiframeError,
    MatrixTooLargeError,
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    ParseError,
    SchemaError,
    UnknownNameError,
)
from .frames import (
    BiframePair,
    FrameSequence,
    apply_operator_to_pair,
    apply_operator_to_sequence,
    biframe_operator,
    frame_operator,
    hermitian_part,
    inner,
    pair_form,
)
from .instances import Instance, gallery, random_biframe
from .operators import DouglasReport, douglas_check, restrict_to_range
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"

__all__ = [
    "STATEMENTS", "AuditReport", "run_audit",
    "UNBOUNDED", "BoundProblem", "ClaimedBoundCheck", "KBiframeCertificate",
    "certify_biframe", "certify_frame", "certify_k_biframe", "certify_k_frame",
    "certify_with_claims", "check_claimed_bounds", "optimal_lower_bound",
    "optimal_upper_bound",
    "BadParametersError", "DimensionMismatchError", "KBiframeError", "MatrixTooLargeError",
    "NoConvergenceError", "NotHermitianError", "NotPSDError", "ParseError", "SchemaError",
    "UnknownNameError",
    "BiframePair", "FrameSequence", "apply_operator_to_pair", "apply_operator_to_sequence",
    "biframe_operator", "frame_operator", "hermitian_part", "inner", "pair_form",
    "Instance", "gallery", "random_biframe",
    "DouglasReport", "douglas_check", "restrict_to_range",
    "DEFAULT", "Tolerances",
]
