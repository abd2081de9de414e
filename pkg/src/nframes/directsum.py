"""Direct sums of induced spaces, operators and controlled frames.

``H_F (+) K_G`` is modelled by stacked coordinates, so its inner product is
the sum of the component inner products. A direct-sum family shares one index
set: entry ``i`` is ``f_i (+) g_i`` and the control is ``C1 (+) C2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .controlled import BOUND_SLACK, ControlledBounds, ControlledFrame, controlled_bounds
from .errors import CrossTermViolation, LengthMismatch, TheoremViolation
from .frames import FrameFamily
from .ninner import as_vector

CROSS_TOL = 1e-10


@dataclass(frozen=True)
class DirectSumSpace:
    left: object
    right: object

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim


def dsum_vector(u, v) -> np.ndarray:
    return np.concatenate([as_vector(u), as_vector(v)])


def dsum_operator(t, u) -> np.ndarray:
    t, u = ops.as_operator(t), ops.as_operator(u)
    out = np.zeros((t.shape[0] + u.shape[0],) * 2, dtype=complex)
    out[: t.shape[0], : t.shape[0]] = t
    out[t.shape[0] :, t.shape[0] :] = u
    return out


def dsum_inner(x, y) -> complex:
    """Inner product on stacked coordinates (sum of the component products)."""
    return complex(np.vdot(as_vector(y), as_vector(x)))


def sum_norm(u, v) -> float:
    """``||u|| + ||v||``: the additive direct-sum norm.

    This is not the norm induced by :func:`dsum_inner` (that one is
    ``sqrt(||u||^2 + ||v||^2)``) and is offered only as a diagnostic.
    """
    return float(np.linalg.norm(as_vector(u)) + np.linalg.norm(as_vector(v)))


@dataclass(frozen=True)
class DirectSumFrame:
    """Shared-index family ``{f_i (+) g_i}`` with control ``C1 (+) C2``.

    ``left`` and ``right`` are the component controlled frames and must have
    the same length. Use :meth:`disjoint` to pad two families of any lengths
    into the block layout ``(f_1, 0), ..., (f_m, 0), (0, g_1), ..., (0, g_k)``.
    """

    left: ControlledFrame
    right: ControlledFrame

    def __post_init__(self):
        if len(self.left.frame) != len(self.right.frame):
            raise LengthMismatch(
                f"paired families need equal lengths, got {len(self.left.frame)} and {len(self.right.frame)}"
            )
        space = DirectSumSpace(self.left.space, self.right.space)
        rows = np.hstack([self.left.frame.projected, self.right.frame.projected])
        control = dsum_operator(self.left.control, self.right.control)
        object.__setattr__(self, "_combined", ControlledFrame(FrameFamily(space, rows), control))

    @classmethod
    def disjoint(cls, left: ControlledFrame, right: ControlledFrame) -> "DirectSumFrame":
        p, q = left.frame.projected, right.frame.projected
        zl = np.zeros((len(q), p.shape[1]), dtype=complex)
        zr = np.zeros((len(p), q.shape[1]), dtype=complex)
        lf = FrameFamily(left.space, np.vstack([p, zl]))
        rf = FrameFamily(right.space, np.vstack([zr, q]))
        return cls(left.with_family(lf), right.with_family(rf))

    @property
    def space(self) -> DirectSumSpace:
        return self._combined.space

    @property
    def combined(self) -> ControlledFrame:
        return self._combined


def cross_term(dsf: DirectSumFrame, f, g) -> tuple[complex, complex]:
    """``(sum <f, f_i><C2 g_i, g>, sum <g, g_i><C1 f_i, f>)``."""
    f = as_vector(f, dsf.left.space.dim)
    g = as_vector(g, dsf.right.space.dim)
    p, q = dsf.left.frame.projected, dsf.right.frame.projected
    c1, c2 = dsf.left.control, dsf.right.control
    first = np.sum((p.conj() @ f) * (g.conj() @ (c2 @ q.T)))
    second = np.sum((q.conj() @ g) * (f.conj() @ (c1 @ p.T)))
    return complex(first), complex(second)


def cross_term_matrices(dsf: DirectSumFrame) -> tuple[np.ndarray, np.ndarray]:
    """Both cross sums over every pair of basis vectors.

    ``first[b, a]`` is the first sum at ``f = e_a, g = e_b`` and
    ``second[a, b]`` the second; they are the off-diagonal blocks of the
    direct-sum controlled frame operator.
    """
    p, q = dsf.left.frame.projected, dsf.right.frame.projected
    first = dsf.right.control @ q.T @ p.conj()
    second = dsf.left.control @ p.T @ q.conj()
    return first, second


def cross_term_defect(dsf: DirectSumFrame) -> float:
    first, second = cross_term_matrices(dsf)
    return float(max(np.max(np.abs(first)), np.max(np.abs(second))))


def cross_terms_vanish(dsf: DirectSumFrame, tol: float = CROSS_TOL) -> bool:
    scale = 1 + ops.operator_norm(dsf.combined.controlled_operator)
    return cross_term_defect(dsf) <= tol * scale


def dsum_controlled_bounds(dsf: DirectSumFrame, verify: bool = True) -> ControlledBounds:
    """Spectral bounds of the direct-sum controlled frame operator.

    The cross sums must vanish on the basis grid, otherwise
    :class:`CrossTermViolation`. With ``verify`` the result must lie in
    ``[min(A, C), max(B, D)]`` built from the component bounds.
    """
    if not cross_terms_vanish(dsf):
        raise CrossTermViolation(f"cross sums reach {cross_term_defect(dsf):.3e}")
    actual = controlled_bounds(dsf.combined)
    if verify:
        b1, b2 = controlled_bounds(dsf.left), controlled_bounds(dsf.right)
        lo, hi = min(b1.lower, b2.lower), max(b1.upper, b2.upper)
        slack = BOUND_SLACK * (1 + abs(hi))
        if actual.lower < lo - slack or actual.upper > hi + slack:
            raise TheoremViolation(
                f"direct-sum bounds ({actual.lower:.6g}, {actual.upper:.6g}) escape [{lo:.6g}, {hi:.6g}]"
            )
    return actual

