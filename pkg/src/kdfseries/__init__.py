"""Exact truncated-series toolkit for generalized hypergeometric bundles.

Submodules: exact_arith (rationals and rising factorials), mseries
(truncated sparse multivariate series), kdf_core (parameter bundles and
expansion), identities (the finite summation catalog and verifier),
reductions (classical multivariable families and their specializations),
numeval (floating-point evaluation), cli (command line front end).
"""

from .errors import (
    ExhaustedRetries,
    KdfError,
    NotApplicable,
    ParseError,
    PoleInParameters,
    ShapeMismatch,
)
from .exact_arith import (
    Rational,
    binom,
    format_rational,
    list_poch,
    parse_rational,
    poch,
    poch_is_zero,
    vandermonde_2f1,
)
from .mseries import TruncatedSeries
from .kdf_core import (
    ConvergenceReport,
    KdfSpec,
    SlotBinding,
    convergence_class,
    expand,
    lambda_coeff,
    pole_scan,
    shift_spec,
)
from .identities import (
    CORRECTED,
    LITERAL,
    IdentityId,
    IdentityInstance,
    VerificationReport,
    build_lhs,
    build_rhs,
    preconditions,
    random_instance,
    verify,
)

__all__ = [
    "ExhaustedRetries",
    "KdfError",
    "NotApplicable",
    "ParseError",
    "PoleInParameters",
    "ShapeMismatch",
    "Rational",
    "binom",
    "format_rational",
    "list_poch",
    "parse_rational",
    "poch",
    "poch_is_zero",
    "vandermonde_2f1",
    "TruncatedSeries",
    "ConvergenceReport",
    "KdfSpec",
    "SlotBinding",
    "convergence_class",
    "expand",
    "lambda_coeff",
    "pole_scan",
    "shift_spec",
    "IdentityId",
    "IdentityInstance",
    "VerificationReport",
    "CORRECTED",
    "LITERAL",
    "build_lhs",
    "build_rhs",
    "preconditions",
    "random_instance",
    "verify",
]

__version__ = "0.1.0"
