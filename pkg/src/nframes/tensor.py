"""Tensor products of induced spaces and of controlled frames.

H_F (x) K_G is modelled directly by Kronecker coordinates of the two component
spaces. Doubly indexed families ``{f_i (x) g_j}`` are stored row-major, so
the row for ``(i, j)`` sits at ``i * len(right) + j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .controlled import (
    BESSEL_ONLY,
    BOUND_SLACK,
    CONTROLLED_FRAME,
    NON_REAL_FORM,
    RESIDUAL_TOL,
    ControlledBounds,
    ControlledFrame,
    classify_form,
    controlled_bounds,
    controlled_frame_operator,
    dual_check,
    reconstruction_residual,
    tight_rescale,
)
from .errors import (
    CommutationFailure,
    DimensionMismatch,
    DualityFailure,
    NotControlledFrame,
    TheoremViolation,
)
from .frames import FrameFamily
from .ninner import as_vector, n_inner

IDENTITY_TOL = 1e-11
INVERSE_TOL = 1e-9
PROBES = 200


@dataclass(frozen=True)
class TensorSpace:
    left: object
    right: object

    @property
    def dim(self) -> int:
        return self.left.dim * self.right.dim


def kron_vector(u, v) -> np.ndarray:
    return np.kron(as_vector(u), as_vector(v))


def kron_operator(q, t) -> np.ndarray:
    return np.kron(ops.as_operator(q), ops.as_operator(t))


def tensor_n_inner(first, second, space: TensorSpace) -> complex:
    """``<x1 (x) y1, x2 (x) y2 | a_k (x) b_k>`` for simple ambient tensors
    ``first = (x1, y1)`` and ``second = (x2, y2)``; the product of the
    component n-inner products."""
    (x1, y1), (x2, y2) = first, second
    return n_inner(x1, x2, space.left.anchors) * n_inner(y1, y2, space.right.anchors)


def tensor_n_norm(x, y, space: TensorSpace) -> float:
    value = tensor_n_inner((x, y), (x, y), space).real
    return float(np.sqrt(max(value, 0.0)))


@dataclass(frozen=True)
class TensorControlledFrame:
    left: ControlledFrame
    right: ControlledFrame

    def __post_init__(self):
        space = TensorSpace(self.left.space, self.right.space)
        p1, p2 = self.left.frame.projected, self.right.frame.projected
        rows = np.einsum("ia,jb->ijab", p1, p2).reshape(len(p1) * len(p2), space.dim)
        family = FrameFamily(space, rows)
        control = np.kron(self.left.control, self.right.control)
        object.__setattr__(self, "_combined", ControlledFrame(family, control))

    @property
    def space(self) -> TensorSpace:
        return self.combined.space

    @property
    def combined(self) -> ControlledFrame:
        """The tensor family as a single controlled frame on the product space."""
        return self._combined

    @property
    def family(self) -> FrameFamily:
        return self.combined.frame

    @property
    def control(self) -> np.ndarray:
        return self.combined.control


def sandwich_applies(*bounds: ControlledBounds) -> bool:
    return all(b.classification in (CONTROLLED_FRAME, BESSEL_ONLY) for b in bounds)


def tensor_controlled_bounds(tcf: TensorControlledFrame, verify: bool = True) -> ControlledBounds:
    """Spectral bounds of the tensor controlled frame operator.

    With ``verify`` and both component forms real and nonnegative, checks
    ``A C <= lower`` and ``upper <= B D``.
    """
    actual = controlled_bounds(tcf.combined)
    if verify:
        b1, b2 = controlled_bounds(tcf.left), controlled_bounds(tcf.right)
        if sandwich_applies(b1, b2):
            lo, hi = b1.lower * b2.lower, b1.upper * b2.upper
            slack = 1e-9 * (1 + abs(hi))
            if actual.lower < lo - slack or actual.upper > hi + slack:
                raise TheoremViolation(
                    f"tensor bounds ({actual.lower:.6g}, {actual.upper:.6g}) escape [{lo:.6g}, {hi:.6g}]"
                )
    return actual


def tensor_frame_operator(tcf: TensorControlledFrame, verify: bool = True) -> np.ndarray:
    """``S_{C1 (x) C2}`` from the doubly indexed sum; with ``verify`` it must
    equal ``S_{C1} (x) S_{C2}``."""
    s = controlled_frame_operator(tcf.combined)
    if verify:
        s1, s2 = tcf.left.controlled_operator, tcf.right.controlled_operator
        residual = np.linalg.norm(s - np.kron(s1, s2), 2)
        scale = 1 + ops.operator_norm(s1) * ops.operator_norm(s2)
        if residual > IDENTITY_TOL * scale:
            raise TheoremViolation(f"S differs from S1 (x) S2 by {residual:.3e}")
    return s


def tensor_frame_operator_inverse(tcf: TensorControlledFrame, verify: bool = True) -> np.ndarray:
    """``S_{C1}^{-1} (x) S_{C2}^{-1}``; with ``verify`` compared with the direct
    inverse of the assembled operator."""
    inv = np.kron(ops.inverse(tcf.left.controlled_operator), ops.inverse(tcf.right.controlled_operator))
    if verify:
        direct = ops.inverse(tcf.combined.controlled_operator)
        residual = np.linalg.norm(inv - direct, 2) / (1 + ops.operator_norm(direct))
        if residual > INVERSE_TOL:
            raise TheoremViolation(f"inverse mismatch {residual:.3e}")
    return inv


@dataclass(frozen=True)
class FactorizationReport:
    tensor_classification: str
    left_classification: str
    right_classification: str
    iff_applicable: bool
    iff_holds: bool
    left_probe_bounds: tuple[float, float] | None
    right_probe_bounds: tuple[float, float] | None
    bounds_valid: bool

    @property
    def holds(self) -> bool:
        return (self.iff_holds or not self.iff_applicable) and self.bounds_valid


def _negative_definite(s: np.ndarray) -> bool:
    lam = np.linalg.eigvalsh(ops.hermitian_part(s))
    return bool(lam[-1] < 0)


def _form_ratios(s: np.ndarray, probes: np.ndarray) -> np.ndarray:
    """``||g||^2 / Q(g)`` for each probe row, dropping near-zero denominators."""
    q = np.einsum("ia,ab,ib->i", probes.conj(), s, probes).real
    sq = np.sum(np.abs(probes) ** 2, axis=1)
    keep = np.abs(q) > 1e-12 * sq * (1 + ops.operator_norm(s))
    return sq[keep] / q[keep]


def _probe_bounds(actual: ControlledBounds, other_s: np.ndarray, rng, probes: int):
    dim = other_s.shape[0]
    g = (rng.standard_normal((probes, dim)) + 1j * rng.standard_normal((probes, dim))) / np.sqrt(2)
    ratios = _form_ratios(other_s, g)
    if ratios.size == 0:
        return None
    return actual.lower * float(ratios.min()), actual.upper * float(ratios.max())


def factorization_check(tcf: TensorControlledFrame, rng=None, probes: int = PROBES) -> FactorizationReport:
    """Tensor family is a controlled frame exactly when both components are.

    The inf/sup component bounds ``A_1, B_1`` (and their mirror images) are
    estimated from ``probes`` random vectors of the other factor. A sampled
    infimum can only overestimate, so the certificate checks the sound
    direction: ``A_1 <= A_left`` and ``B_1 >= B_left``.

    The equivalence needs component forms that are real and not both negative
    definite (two negative forms tensor to a positive one); otherwise
    ``iff_applicable`` is false.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    t = controlled_bounds(tcf.combined)
    b1, b2 = controlled_bounds(tcf.left), controlled_bounds(tcf.right)
    s1, s2 = tcf.left.controlled_operator, tcf.right.controlled_operator

    real = NON_REAL_FORM not in (b1.classification, b2.classification)
    applicable = real and not (_negative_definite(s1) and _negative_definite(s2))
    both = b1.is_controlled_frame and b2.is_controlled_frame
    iff = t.is_controlled_frame == both

    left_probe = right_probe = None
    valid = True
    if applicable and t.is_controlled_frame:
        left_probe = _probe_bounds(t, ops.hermitian_part(s2), rng, probes)
        right_probe = _probe_bounds(t, ops.hermitian_part(s1), rng, probes)
        for probe, comp in ((left_probe, b1), (right_probe, b2)):
            if probe is None:
                continue
            slack = BOUND_SLACK * (1 + abs(comp.upper))
            valid &= probe[0] <= comp.lower + slack and probe[1] >= comp.upper - slack
    return FactorizationReport(
        t.classification, b1.classification, b2.classification, applicable, iff, left_probe, right_probe, bool(valid)
    )


def _require_tensor_frame(tcf: TensorControlledFrame) -> None:
    b = controlled_bounds(tcf.combined)
    if not b.is_controlled_frame:
        raise NotControlledFrame(f"tensor family classifies as {b.classification}")


def tensor_reconstruct(tcf: TensorControlledFrame, vector, formula: str = "dual") -> np.ndarray:
    """Expand ``F`` over the tensor family.

    ``formula="dual"``: ``sum <F, S^{-*}(f_i (x) g_j)> (C1 (x) C2)(f_i (x) g_j)``.
    ``formula="inverse"``: ``sum <F, f_i (x) g_j> S^{-1} (C1 (x) C2)(f_i (x) g_j)``.
    ``F`` may be any element of the product space, simple or not.
    """
    _require_tensor_frame(tcf)
    f = as_vector(vector, tcf.space.dim)
    p = tcf.family.projected
    k = tcf.control
    s_inv = tensor_frame_operator_inverse(tcf, verify=False)
    if formula == "dual":
        dual = p @ s_inv.conj()  # rows S^{-*} p_i
        return k @ (p.T @ (dual.conj() @ f))
    if formula == "inverse":
        return s_inv @ (k @ (p.T @ (p.conj() @ f)))
    raise ValueError(f"unknown formula {formula!r}")


def tight_tensor_reconstruct(tcf: TensorControlledFrame, vector) -> np.ndarray:
    """``(1 / (A1 A2)) sum <F, f_i (x) g_j> (C1 (x) C2)(f_i (x) g_j)`` for tight
    components with bounds ``A1``, ``A2``."""
    bounds = []
    for cf in (tcf.left, tcf.right):
        tight_rescale(cf)  # raises NotTight
        bounds.append(controlled_bounds(cf).lower)
    f = as_vector(vector, tcf.space.dim)
    p = tcf.family.projected
    return tcf.control @ (p.T @ (p.conj() @ f)) / (bounds[0] * bounds[1])


@dataclass(frozen=True)
class ImageReport:
    classification: str
    invertible: bool
    conjugation_residual: float
    lower: float
    upper: float
    predicted_lower: float
    predicted_upper: float

    @property
    def holds(self) -> bool:
        match = (self.classification == CONTROLLED_FRAME) == self.invertible
        if not self.invertible:
            return match and self.conjugation_residual < INVERSE_TOL
        slack = BOUND_SLACK * (1 + self.predicted_upper)
        return (
            match
            and self.conjugation_residual < INVERSE_TOL
            and self.lower >= self.predicted_lower - slack
            and self.upper <= self.predicted_upper + slack
        )


def image_under_operator(tcf: TensorControlledFrame, u1, u2, verify: bool = True) -> ImageReport:
    """Image family ``(U1 (x) U2)(f_i (x) g_j)`` under the same control.

    Requires ``C1 U1 = U1 C1`` and ``C2 U2 = U2 C2``. The image is a controlled
    frame exactly when ``U1 (x) U2`` is invertible, and its frame operator is
    ``(U1 (x) U2) S (U1 (x) U2)^*``.
    """
    u1 = ops.as_operator(u1, tcf.left.space.dim)
    u2 = ops.as_operator(u2, tcf.right.space.dim)
    if not ops.commutes(tcf.left.control, u1) or not ops.commutes(tcf.right.control, u2):
        raise CommutationFailure("each U must commute with its control")
    w = np.kron(u1, u2)
    image = ControlledFrame(tcf.family.mapped(w), tcf.control)
    new_s = image.controlled_operator
    s = tcf.combined.controlled_operator
    expected = w @ s @ w.conj().T
    residual = float(np.linalg.norm(new_s - expected, 2) / (1 + ops.operator_norm(expected)))
    bounds = classify_form(new_s)
    invertible = ops.classify(w).invertible
    b1, b2 = controlled_bounds(tcf.left), controlled_bounds(tcf.right)
    w_norm = ops.operator_norm(w)
    if invertible:
        lo = b1.lower * b2.lower / ops.operator_norm(np.linalg.inv(w)) ** 2
    else:
        lo = 0.0
    report = ImageReport(
        bounds.classification,
        invertible,
        residual,
        bounds.lower,
        bounds.upper,
        float(lo),
        float(b1.upper * b2.upper * w_norm**2),
    )
    if verify and sandwich_applies(b1, b2) and not report.holds:
        raise TheoremViolation(f"image report violates the invertibility characterisation: {report}")
    return report


def tensor_dual_check(
    tcf: TensorControlledFrame,
    left_dual: FrameFamily,
    right_dual: FrameFamily,
    tol: float = RESIDUAL_TOL,
    require_components: bool = True,
) -> bool:
    """Does ``{e_i (x) h_j}`` reconstruct through the tensor frame?

    With ``require_components`` each component pair must pass
    :func:`dual_check` first, otherwise :class:`DualityFailure` is raised.
    """
    if require_components:
        if not dual_check(tcf.left, left_dual, tol) or not dual_check(tcf.right, right_dual, tol):
            raise DualityFailure("component pair is not dual")
    elif left_dual.space.dim != tcf.left.space.dim or right_dual.space.dim != tcf.right.space.dim:
        raise DimensionMismatch("dual families live in different spaces")
    e = np.einsum("ia,jb->ijab", left_dual.projected, right_dual.projected).reshape(-1, tcf.space.dim)
    if e.shape[0] != len(tcf.family):
        raise DimensionMismatch("dual families have the wrong lengths")
    return reconstruction_residual(tcf.control, tcf.family.projected, e) < tol


def unitary_dual_transport(tcf: TensorControlledFrame, left_dual, right_dual, u, v) -> bool:
    """Transport a tensor dual pair by ``U (x) V`` and re-check duality.

    ``U``, ``V`` must be unitary and commute with ``C1``, ``C2``.
    """
    u = ops.require_unitary(ops.as_operator(u, tcf.left.space.dim))
    v = ops.require_unitary(ops.as_operator(v, tcf.right.space.dim))
    if not ops.commutes(tcf.left.control, u) or not ops.commutes(tcf.right.control, v):
        raise CommutationFailure("U and V must commute with the controls")
    if not tensor_dual_check(tcf, left_dual, right_dual):
        raise DualityFailure("the starting pair is not dual")
    moved = TensorControlledFrame(
        tcf.left.with_family(tcf.left.frame.mapped(u)),
        tcf.right.with_family(tcf.right.frame.mapped(v)),
    )
    return tensor_dual_check(moved, left_dual.mapped(u), right_dual.mapped(v))
