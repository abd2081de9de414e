"""Controlled frames in n-Hilbert spaces, realised in finite dimension."""

from .controlled import ControlledBounds, ControlledFrame
from .directsum import DirectSumFrame, DirectSumSpace
from .errors import FrameError, TheoremViolation
from .frames import FrameBounds, FrameFamily
from .ninner import AnchorSet, QuotientSpace, build_quotient, n_inner, n_norm
from .tensor import TensorControlledFrame, TensorSpace

__all__ = [
    "AnchorSet",
    "ControlledBounds",
    "ControlledFrame",
    "DirectSumFrame",
    "DirectSumSpace",
    "FrameBounds",
    "FrameError",
    "FrameFamily",
    "QuotientSpace",
    "TensorControlledFrame",
    "TensorSpace",
    "TheoremViolation",
    "build_quotient",
    "n_inner",
    "n_norm",
]
