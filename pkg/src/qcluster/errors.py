"""Exception hierarchy shared by all engine modules."""


class QClusterError(Exception):
    """Base class for all engine errors."""


class TorusMismatch(QClusterError):
    """Operands live in different quantum tori."""


class NotBarProportional(QClusterError):
    """Element is not a q-power multiple of a bar-invariant element."""


class NotQCommuting(QClusterError):
    """Pair of elements admits no single q-commutation exponent."""


class ExactDivisionFailed(QClusterError):
    """Left division has no exact quotient (or safety bound exceeded)."""


class FrozenMutation(QClusterError):
    """Mutation requested at a frozen index."""


class NotCompatible(QClusterError):
    """(L, B) is not a compatible pair; args carry offending coordinates."""


class NotSkewSymmetric(QClusterError):
    """Matrix fails skew-symmetry (or skew-symmetrizability) where required."""


class LaurentFailure(QClusterError):
    """A mutated variable failed to be Laurent: signals an engine bug."""


class ParityMismatch(QClusterError):
    """Minor indices (b, d) do not address the same word letter."""


class OutOfRange(QClusterError):
    """Index arguments outside the defined range."""


class ExpectedCommutationFailed(QClusterError):
    """A guaranteed q-commutation exponent did not match the computed one."""


class IdentityFailed(QClusterError):
    """A two-sided exact identity failed; args carry both sides."""


class PatternViolation(QClusterError):
    """Frozen-row pattern check failed; args carry coordinates."""


class RedVertexMutation(QClusterError):
    """Green-sequence step requested at a red vertex."""


class SchemaVersionMismatch(QClusterError):
    """Persisted session snapshot has an unknown schema version."""
