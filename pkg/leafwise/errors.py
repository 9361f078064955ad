class LeafwiseError(Exception):
    '''Base class for every error raised by leafwise'''


class DimensionMismatchError(LeafwiseError, ValueError):
    pass


class AliasingError(LeafwiseError, ValueError):
    pass


class BudgetExceededError(LeafwiseError, ValueError):
    pass


class RankDeficientError(LeafwiseError, ValueError):
    pass


class NotClosedError(LeafwiseError, ValueError):
    pass


class InconsistentFormError(LeafwiseError, ValueError):
    pass


class OrientationError(LeafwiseError, ValueError):
    pass


class NonHyperbolicError(LeafwiseError, ValueError):
    pass


class InvertibilityError(LeafwiseError, ValueError):
    pass


class TruncationLossError(LeafwiseError, ValueError):
    pass


class RepresentabilityError(LeafwiseError, ValueError):
    pass


class StructureConstantError(LeafwiseError, ValueError):
    pass


class RankInstabilityError(LeafwiseError, ValueError):
    pass


class UnknownReferenceError(LeafwiseError, KeyError):
    pass
