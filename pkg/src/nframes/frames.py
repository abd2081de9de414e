"""Ordinary frames associated to an anchor tuple.

A family is supplied either as ambient vectors (projected once into H_F) or
directly as H_F coordinates. All operator work happens on the projected
coordinates, stored row-wise in ``projected`` (shape ``m x d_F``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LengthMismatch
from .ninner import QuotientSpace, as_vector, project

FRAME_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FrameFamily:
    """Finite family ``{f_i}``.

    ``space`` is any object exposing ``dim`` (a :class:`QuotientSpace`, or a
    tensor / direct-sum space). ``vectors`` holds ambient representatives when
    they are known, and is ``None`` otherwise.
    """

    space: object
    projected: np.ndarray = field(repr=False)
    vectors: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        p = np.asarray(self.projected, dtype=complex)
        if p.ndim != 2 or p.shape[0] < 1:
            raise LengthMismatch("a frame family needs at least one vector")
        if p.shape[1] != self.space.dim:
            raise DimensionMismatch(f"family vectors have length {p.shape[1]}, space has dim {self.space.dim}")
        if not np.all(np.isfinite(p)):
            raise ValueError("family has non-finite entries")
        object.__setattr__(self, "projected", _readonly(p))
        if self.vectors is not None:
            object.__setattr__(self, "vectors", _readonly(self.vectors))

    @classmethod
    def from_ambient(cls, space: QuotientSpace, vectors) -> "FrameFamily":
        v = np.asarray(vectors, dtype=complex)
        if v.ndim != 2:
            raise DimensionMismatch("expected a list of ambient vectors")
        return cls(space, project(space, v), v)

    @classmethod
    def from_quotient(cls, space, coords) -> "FrameFamily":
        p = np.asarray(coords, dtype=complex)
        lift = getattr(space, "lift", None)
        fits = lift is not None and p.ndim == 2 and p.shape[1] == lift.shape[1]
        vectors = p @ lift.T if fits else None
        return cls(space, p, vectors)

    def __len__(self) -> int:
        return self.projected.shape[0]

    def scaled(self, factor: float) -> "FrameFamily":
        v = None if self.vectors is None else self.vectors * factor
        return FrameFamily(self.space, self.projected * factor, v)

    def mapped(self, op: np.ndarray) -> "FrameFamily":
        """Family ``{T f_i}`` for an operator ``T`` on the coordinate space."""
        return FrameFamily.from_quotient(self.space, self.projected @ np.asarray(op).T)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    optimal: bool

    @property
    def is_frame(self) -> bool:
        return self.lower > FRAME_TOL * max(self.upper, 0.0) and self.lower > 0


def analysis(frame: FrameFamily, f) -> np.ndarray:
    """``T_F^* f = {<f, f_i>}``."""
    f = as_vector(f, frame.space.dim)
    return frame.projected.conj() @ f


def synthesis(frame: FrameFamily, coeffs) -> np.ndarray:
    """``T_F c = sum_i c_i f_i``."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (len(frame),):
        raise LengthMismatch(f"expected {len(frame)} coefficients, got shape {c.shape}")
    return frame.projected.T @ c


def frame_operator(frame: FrameFamily) -> np.ndarray:
    """``S_F = sum_i f_i f_i^H``."""
    p = frame.projected
    s = p.T @ p.conj()
    return (s + s.conj().T) / 2


def optimal_bounds(frame: FrameFamily) -> FrameBounds:
    lam = np.linalg.eigvalsh(frame_operator(frame))
    return FrameBounds(lower=float(max(lam[0], 0.0)), upper=float(lam[-1]), optimal=True)
