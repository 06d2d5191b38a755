"""Exception types raised across the package.

Every error carries a stable ``name`` so the CLI can emit a machine-readable
record without inspecting message text.
"""


class QlatError(Exception):
    name = "QlatError"


class MixedDiscriminant(QlatError):
    name = "MixedDiscriminant"


class DivisionByZero(QlatError, ZeroDivisionError):
    name = "DivisionByZero"


class DegenerateBasis(QlatError):
    name = "DegenerateBasis"


class NotPositiveBasis(QlatError):
    name = "NotPositiveBasis"


class OnGridLine(QlatError):
    name = "OnGridLine"


class SingularLine(QlatError):
    name = "SingularLine"


class SingularIndex(QlatError):
    name = "SingularIndex"


class InconsistentSigns(QlatError):
    name = "InconsistentSigns"


class InvalidParams(QlatError):
    name = "InvalidParams"


class NotUnimodular(QlatError):
    name = "NotUnimodular"


class NotSameLattice(QlatError):
    name = "NotSameLattice"


class WidthOrder(QlatError):
    name = "WidthOrder"


class AmbiguousReadoff(QlatError):
    name = "AmbiguousReadoff"


class NonCanonicalReadoff(QlatError):
    name = "NonCanonicalReadoff"


class UnparseableWord(QlatError):
    name = "UnparseableWord"


class InvalidWord(QlatError):
    name = "InvalidWord"


class DegenerateEigen(QlatError):
    name = "DegenerateEigen"


class NotSelfSimilar(QlatError):
    name = "NotSelfSimilar"


class DivisibilityViolation(QlatError):
    name = "DivisibilityViolation"


class PrecisionExhausted(QlatError):
    name = "PrecisionExhausted"


class EmptyPayload(QlatError):
    name = "EmptyPayload"
