"""Exception hierarchy shared by every module."""


class FrameError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(FrameError, ValueError):
    pass


class LengthMismatch(FrameError, ValueError):
    pass


class DegenerateAnchors(FrameError, ValueError):
    """Anchor vectors are (numerically) linearly dependent."""


class NumericalNegativity(FrameError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""


class NotPositive(FrameError, ValueError):
    pass


class Singular(FrameError, ValueError):
    pass


class NotUnitary(FrameError, ValueError):
    pass


class NotTight(FrameError, ValueError):
    pass


class NotControlledFrame(FrameError, ValueError):
    pass


class CommutationFailure(FrameError, ValueError):
    """A commutation hypothesis required by a construction does not hold."""


class CrossTermViolation(FrameError, ValueError):
    """The direct-sum orthogonality conditions fail on some probe pair."""


class DualityFailure(FrameError, ValueError):
    pass


class TheoremViolation(FrameError, AssertionError):
    """A verified inequality or identity failed beyond its tolerance.

    Raised only by the ``verify=True`` paths; in exact arithmetic this
    indicates either a bug or an input outside the theorem's hypotheses.
    """
