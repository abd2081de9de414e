"""Controlled frames: the C-controlled quadratic form, S_C, bounds, the
frame <-> controlled-frame conversions, Parseval normalisation and duals.

For a family ``{f_i}`` and an invertible control ``C`` the controlled form is

    Q(f) = sum_i <f, f_i> <C f_i, f> = <S_C f, f>,   S_C = C S_F.

``Q`` is real for every ``f`` only when ``S_C`` is self-adjoint. Bounds are
therefore taken from the Hermitian part of ``S_C``, and the size of its
skew-Hermitian part is reported as ``realness_defect``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .errors import (
    CommutationFailure,
    DimensionMismatch,
    DualityFailure,
    LengthMismatch,
    NotControlledFrame,
    NotPositive,
    NotTight,
    Singular,
    TheoremViolation,
)
from .frames import FrameBounds, FrameFamily, frame_operator, optimal_bounds
from .ninner import as_vector

REALNESS_TOL = 1e-8
FRAME_TOL = 1e-10
TIGHT_TOL = 1e-8
RESIDUAL_TOL = 1e-9
BOUND_SLACK = 1e-8

CONTROLLED_FRAME = "controlled_frame"
BESSEL_ONLY = "controlled_bessel_only"
NOT_CONTROLLED = "not_controlled"
NON_REAL_FORM = "non_real_form"


@dataclass(frozen=True)
class ControlledFrame:
    frame: FrameFamily
    control: np.ndarray

    def __post_init__(self):
        c = ops.as_operator(self.control, self.frame.space.dim)
        if not ops.classify(c).invertible:
            raise Singular("the control operator must be invertible")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "control", c)
        s_f = frame_operator(self.frame)
        s_c = c @ s_f
        s_f.setflags(write=False)
        s_c.setflags(write=False)
        object.__setattr__(self, "_s_f", s_f)
        object.__setattr__(self, "_s_c", s_c)

    @property
    def space(self):
        return self.frame.space

    @property
    def frame_operator(self) -> np.ndarray:
        return self._s_f

    @property
    def controlled_operator(self) -> np.ndarray:
        return self._s_c

    def with_family(self, family: FrameFamily) -> "ControlledFrame":
        return ControlledFrame(family, self.control)


@dataclass(frozen=True)
class ControlledBounds:
    lower: float
    upper: float
    realness_defect: float
    classification: str

    @property
    def is_controlled_frame(self) -> bool:
        return self.classification == CONTROLLED_FRAME


def controlled_form(cf: ControlledFrame, f) -> complex:
    """``sum_i <f, f_i> <C f_i, f>``, summed term by term."""
    f = as_vector(f, cf.space.dim)
    p = cf.frame.projected
    left = p.conj() @ f  # <f, f_i>
    right = f.conj() @ (cf.control @ p.T)  # <C f_i, f>
    return complex(np.sum(left * right))


def controlled_frame_operator(cf: ControlledFrame) -> np.ndarray:
    """``S_C f = sum_i <f, f_i> C f_i`` assembled as a sum of outer products."""
    p = cf.frame.projected
    cp = p @ cf.control.T  # rows C f_i
    return np.einsum("ia,ib->ab", cp, p.conj())


def classify_form(s_c: np.ndarray) -> ControlledBounds:
    """Bounds and classification for a controlled frame operator."""
    s_c = np.asarray(s_c, dtype=complex)
    norm = ops.operator_norm(s_c)
    skew = (s_c - s_c.conj().T) / 2
    defect = ops.operator_norm(skew)
    lam = np.linalg.eigvalsh(ops.hermitian_part(s_c))
    lower, upper = float(lam[0]), float(lam[-1])
    if 2 * defect > REALNESS_TOL * (1 + norm):
        kind = NON_REAL_FORM
    elif lower > 0 and lower > FRAME_TOL * upper:
        kind = CONTROLLED_FRAME
    elif lower >= -FRAME_TOL * (1 + abs(upper)):
        kind = BESSEL_ONLY
    else:
        kind = NOT_CONTROLLED
    return ControlledBounds(lower, upper, defect, kind)


def controlled_bounds(cf: ControlledFrame) -> ControlledBounds:
    return classify_form(cf.controlled_operator)


def _require_frame(cf: ControlledFrame) -> ControlledBounds:
    b = controlled_bounds(cf)
    if not b.is_controlled_frame:
        raise NotControlledFrame(f"family classifies as {b.classification}")
    return b


def tight_rescale(cf: ControlledFrame) -> ControlledFrame:
    """``{A^{-1/2} f_i}`` for a C-controlled tight frame with bound ``A``."""
    b = controlled_bounds(cf)
    if not b.is_controlled_frame or abs(b.upper - b.lower) > TIGHT_TOL * b.upper:
        raise NotTight(f"bounds ({b.lower:.6g}, {b.upper:.6g}) are not equal")
    return cf.with_family(cf.frame.scaled(1 / np.sqrt(b.lower)))


@dataclass(frozen=True)
class SynthesisReport:
    norm: float
    bound: float
    adjoint_residual: float

    @property
    def holds(self) -> bool:
        return self.norm <= self.bound + BOUND_SLACK and self.adjoint_residual < 1e-10


def synthesis_matrix(cf: ControlledFrame) -> np.ndarray:
    """Columns ``C f_i``: the map ``{c_i} -> sum_i c_i C f_i``."""
    return cf.control @ cf.frame.projected.T


def synthesis_norm_check(cf: ControlledFrame, rng=None, probes: int = 20) -> SynthesisReport:
    """Compare ``||U||`` with ``sqrt(B) ||C^{1/2}||`` and check
    ``U^* f = {<C f, f_i>}`` on random probes."""
    if not ops.classify(cf.control).positive:
        raise NotPositive("the control must be positive")
    rng = np.random.default_rng(0) if rng is None else rng
    u = synthesis_matrix(cf)
    upper = max(controlled_bounds(cf).upper, 0.0)
    bound = np.sqrt(upper) * ops.operator_norm(ops.sqrt_positive(cf.control))
    dim = cf.space.dim
    worst = 0.0
    for _ in range(probes):
        f = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2)
        direct = u.conj().T @ f
        formula = cf.frame.projected.conj() @ (cf.control @ f)
        scale = 1 + np.linalg.norm(direct)
        worst = max(worst, float(np.linalg.norm(direct - formula) / scale))
    return SynthesisReport(ops.operator_norm(u), float(bound), worst)


def _gb_plus_norms(c: np.ndarray) -> tuple[float, float]:
    """``(||C^{1/2}||, ||C^{-1/2}||)`` for ``C`` in GB+."""
    rep = ops.classify(c)
    if not rep.positive:
        raise NotPositive("the control must be positive")
    if not rep.invertible:
        raise Singular("the control must be invertible")
    lam = np.linalg.eigvalsh(ops.hermitian_part(c))
    return float(np.sqrt(lam[-1])), float(1 / np.sqrt(lam[0]))


def controlled_to_frame_bounds(cf: ControlledFrame, verify: bool = True) -> FrameBounds:
    """Ordinary frame bounds ``A ||C^{1/2}||^{-2}`` and ``B ||C^{-1/2}||^2``
    predicted from the controlled bounds ``(A, B)``."""
    root, inv_root = _gb_plus_norms(cf.control)
    b = controlled_bounds(cf)
    predicted = FrameBounds(b.lower / root**2, b.upper * inv_root**2, optimal=False)
    if verify:
        actual = optimal_bounds(cf.frame)
        slack = BOUND_SLACK * (1 + actual.upper)
        if predicted.lower > actual.lower + slack or actual.upper > predicted.upper + slack:
            raise TheoremViolation(
                f"predicted ({predicted.lower:.6g}, {predicted.upper:.6g}) does not contain "
                f"actual ({actual.lower:.6g}, {actual.upper:.6g})"
            )
    return predicted


def frame_to_controlled_bounds(frame: FrameFamily, control, verify: bool = True) -> ControlledBounds:
    """Controlled bounds ``A ||C^{-1/2}||^{-2}`` and ``B ||C||`` predicted from
    the optimal ordinary bounds.

    The returned classification and realness defect describe the actual
    controlled form. Verification is only meaningful when that form is real,
    so a ``non_real_form`` result is returned unverified.
    """
    c = ops.as_operator(control, frame.space.dim)
    _, inv_root = _gb_plus_norms(c)
    ordinary = optimal_bounds(frame)
    lower = ordinary.lower / inv_root**2
    upper = ordinary.upper * ops.operator_norm(c)
    actual = controlled_bounds(ControlledFrame(frame, c))
    if verify and actual.classification != NON_REAL_FORM:
        slack = BOUND_SLACK * (1 + upper)
        if lower > actual.lower + slack or actual.upper > upper + slack:
            raise TheoremViolation(
                f"predicted ({lower:.6g}, {upper:.6g}) does not contain "
                f"actual ({actual.lower:.6g}, {actual.upper:.6g})"
            )
    return ControlledBounds(float(lower), float(upper), actual.realness_defect, actual.classification)


def parsevalize(cf: ControlledFrame) -> ControlledFrame:
    """Canonical C-controlled Parseval frame ``{S_C^{-1/2} f_i}``.

    Refuses with :class:`CommutationFailure` unless ``S_C^{-1}`` commutes
    with ``C``.
    """
    _require_frame(cf)
    s_c = cf.controlled_operator
    if not ops.commutes(ops.inverse(s_c), cf.control):
        raise CommutationFailure("S_C^{-1} does not commute with the control")
    root = ops.inverse_sqrt(ops.hermitian_part(s_c))
    return cf.with_family(cf.frame.mapped(root))


def canonical_dual(cf: ControlledFrame) -> FrameFamily:
    """Dual family ``{(S_C^{-1})^* f_i}``; equals ``{S_C^{-1} f_i}`` when
    ``S_C`` is self-adjoint."""
    _require_frame(cf)
    return cf.frame.mapped(ops.inverse(cf.controlled_operator).conj().T)


def reconstruction_operator(control, family: np.ndarray, dual: np.ndarray) -> np.ndarray:
    """``f -> sum_i <f, g_i> C f_i`` for families given as row arrays."""
    return np.asarray(control) @ family.T @ dual.conj()


def reconstruction_residual(control, family: np.ndarray, dual: np.ndarray) -> float:
    """Worst ``||sum_i <e, g_i> C f_i - e||`` over canonical basis vectors ``e``."""
    r = reconstruction_operator(control, family, dual)
    r = r - np.eye(r.shape[0])
    return float(np.max(np.linalg.norm(r, axis=0)))


@dataclass(frozen=True)
class DualReport:
    residual: float
    swapped_residual: float
    holds: bool
    swapped_holds: bool
    candidate_classification: str


def _check_compatible(cf: ControlledFrame, candidate: FrameFamily):
    if candidate.space.dim != cf.space.dim:
        raise DimensionMismatch("candidate lives in a different space")
    if len(candidate) != len(cf.frame):
        raise LengthMismatch(f"candidate has {len(candidate)} vectors, frame has {len(cf.frame)}")


def dual_report(cf: ControlledFrame, candidate: FrameFamily, tol: float = RESIDUAL_TOL) -> DualReport:
    """Residuals of ``f = sum <f, g_i> C f_i`` and of the swapped expansion
    ``f = sum <f, f_i> C g_i``."""
    _check_compatible(cf, candidate)
    p, g = cf.frame.projected, candidate.projected
    res = reconstruction_residual(cf.control, p, g)
    swapped = reconstruction_residual(cf.control, g, p)
    kind = controlled_bounds(cf.with_family(candidate)).classification
    return DualReport(res, swapped, res < tol, swapped < tol, kind)


def dual_check(cf: ControlledFrame, candidate: FrameFamily, tol: float = RESIDUAL_TOL) -> bool:
    """True iff ``candidate`` reconstructs through ``cf``.

    When it does and the control is self-adjoint, the swapped expansion must
    hold too; a failure there raises :class:`TheoremViolation`. For a
    non-self-adjoint control the swapped expansion is not implied and is
    left unchecked.
    """
    rep = dual_report(cf, candidate, tol)
    if rep.holds and ops.classify(cf.control).self_adjoint and not rep.swapped_holds:
        raise TheoremViolation(f"swapped reconstruction residual {rep.swapped_residual:.3e}")
    return rep.holds


def dual_implies_frame_bound(cf: ControlledFrame, dual: FrameFamily, verify: bool = True) -> float:
    """Lower controlled bound ``1 / (B ||C^{-1/2}||^4 ||C||^2)`` for ``cf``
    implied by a dual pair, where ``B`` is the controlled Bessel bound of the
    dual family."""
    if not dual_check(cf, dual):
        raise DualityFailure("the candidate is not a dual of this controlled frame")
    _, inv_root = _gb_plus_norms(cf.control)
    bessel = controlled_bounds(cf.with_family(dual)).upper
    constant = 1.0 / (bessel * inv_root**4 * ops.operator_norm(cf.control) ** 2)
    if verify:
        actual = controlled_bounds(cf).lower
        if constant > actual + BOUND_SLACK * (1 + actual):
            raise TheoremViolation(f"implied lower bound {constant:.6g} exceeds actual {actual:.6g}")
    return float(constant)
