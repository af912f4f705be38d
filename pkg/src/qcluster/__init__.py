"""Exact quantum cluster algebra engine with a K-theory verification suite.

The package computes in quantum tori over Z[q^(1/2), q^(-1/2)]: seeds,
matrix and variable mutation, the GL_n family of compatible pairs with its
named mutation sequences, the class map onto simple-object classes, green
sequences, and the rectangular Schur / Q-system character oracle.
"""

from .errors import (
    ExactDivisionFailed,
    ExpectedCommutationFailed,
    FrozenMutation,
    IdentityFailed,
    LaurentFailure,
    NotBarProportional,
    NotCompatible,
    NotQCommuting,
    NotSkewSymmetric,
    OutOfRange,
    ParityMismatch,
    PatternViolation,
    QClusterError,
    RedVertexMutation,
    SchemaVersionMismatch,
    TorusMismatch,
)
from .exchange import CompatiblePair, ExchangeData, skew_symmetrizer
from .gls import (
    CartanDatum,
    ReducedWord,
    Weight,
    betas,
    distinguished_sequence,
    gls_pair,
    minor_to_variable,
    reflect,
)
from .glnsatake import (
    GLnContext,
    KClass,
    LabeledPairState,
    build_conjectural_b,
    build_gln_pair,
    frozen_row_report,
    mu_prime_sequence,
    mu_sequence,
)
from .green import FramedQuiver, is_maximal_green, kedem_sequence, run_green
from .qseed import QuantumSeed
from .qtorus import (
    CommLaurent,
    QScalar,
    QuantumTorus,
    TorusElement,
    lambda_exponent,
    left_divide_exact,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "CartanDatum",
    "CommLaurent",
    "CompatiblePair",
    "ExchangeData",
    "FramedQuiver",
    "GLnContext",
    "KClass",
    "LabeledPairState",
    "QClusterError",
    "QScalar",
    "QuantumSeed",
    "QuantumTorus",
    "ReducedWord",
    "SUITES",
    "TorusElement",
    "Weight",
    "betas",
    "build_conjectural_b",
    "build_gln_pair",
    "distinguished_sequence",
    "frozen_row_report",
    "gls_pair",
    "is_maximal_green",
    "kedem_sequence",
    "lambda_exponent",
    "left_divide_exact",
    "minor_to_variable",
    "mu_prime_sequence",
    "mu_sequence",
    "reflect",
    "run_green",
    "run_suite",
    "skew_symmetrizer",
]
