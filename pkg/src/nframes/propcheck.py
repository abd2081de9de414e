"""Seeded randomized certification of the controlled-frame theorems.

Each theorem check runs ``trials`` independent instances. Trial ``k`` of
theorem ``T`` draws everything from ``CounterRNG(seed, T, k)``, so a report
depends only on ``(seed, trials)`` and not on execution order.

A trial yields residuals, each paired with the tolerance it must meet, or is
skipped when the instance falls outside the theorem's hypotheses. Residuals
are relative: the raw defect divided by ``1 + norm`` of the checked quantity.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from . import operators as ops
from .controlled import (
    NON_REAL_FORM,
    ControlledFrame,
    canonical_dual,
    controlled_bounds,
    controlled_form,
    controlled_to_frame_bounds,
    dual_implies_frame_bound,
    dual_report,
    frame_to_controlled_bounds,
    parsevalize,
    reconstruction_residual,
    synthesis_norm_check,
    tight_rescale,
)
from .directsum import DirectSumFrame, dsum_controlled_bounds
from .errors import (
    CommutationFailure,
    CrossTermViolation,
    FrameError,
    NotControlledFrame,
    NotPositive,
    NotTight,
    Singular,
)
from .frames import FrameFamily, frame_operator, optimal_bounds
from .ninner import AnchorSet, build_quotient
from .rng import CounterRNG
from .tensor import (
    TensorControlledFrame,
    sandwich_applies,
    factorization_check,
    image_under_operator,
    tensor_dual_check,
    tensor_frame_operator,
    tensor_reconstruct,
    tight_tensor_reconstruct,
    unitary_dual_transport,
)

CONTROL_KINDS = (
    "identity",
    "scalar",
    "diagonal_positive",
    "random_positive",
    "polynomial_in_SF",
    "random_invertible",
)
POSITIVE_KINDS = CONTROL_KINDS[:5]
COMMUTING_KINDS = ("identity", "scalar", "polynomial_in_SF")
SCALAR_KINDS = ("identity", "scalar")

# Full-rank families are redrawn above this frame-operator condition number so
# that residual tolerances measure the identities rather than ill-conditioning.
MAX_FRAME_CONDITION = 1e4

PASS, FAIL, SKIPPED = "pass", "fail", "skipped_precondition"


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    ambient_dim: int
    order: int
    family_size: int
    control_kind: str

    def __post_init__(self):
        d, n, m = self.ambient_dim, self.order, self.family_size
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 2 <= d <= 8:
            raise ValueError(f"ambient_dim {d} outside [2, 8]")
        if not 2 <= n <= min(4, d):
            raise ValueError(f"order {n} outside [2, {min(4, d)}]")
        if not self.quotient_dim <= m <= 2 * self.quotient_dim + 4:
            raise ValueError(f"family_size {m} outside [{self.quotient_dim}, {2 * self.quotient_dim + 4}]")
        if self.control_kind not in CONTROL_KINDS:
            raise ValueError(f"unknown control kind {self.control_kind!r}")

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.order + 1


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    trials: int
    failures: int
    worst_residual: float
    status: str


def random_spec(rng: CounterRNG, seed: int, control_kind: str) -> InstanceSpec:
    d = int(rng.integers(2, 9))
    n = int(rng.integers(2, min(4, d) + 1))
    d_f = d - n + 1
    m = int(rng.integers(d_f, 2 * d_f + 5))
    return InstanceSpec(seed, d, n, m, control_kind)


def make_control(kind: str, s_f: np.ndarray, rng: CounterRNG) -> np.ndarray:
    dim = s_f.shape[0]
    eye = np.eye(dim, dtype=complex)
    if kind == "identity":
        return eye
    if kind == "scalar":
        return float(rng.uniform(0.5, 3.0)) * eye
    if kind == "diagonal_positive":
        return np.diag(rng.uniform(0.5, 3.0, dim)).astype(complex)
    if kind == "random_positive":
        m = rng.complex_normal((dim, dim))
        return m.conj().T @ m + 0.1 * eye
    if kind == "polynomial_in_SF":
        c0, c1, c2 = rng.uniform(0.1, 2.0, 3)
        s = ops.hermitian_part(s_f)
        norm = ops.operator_norm(s)
        s = s / norm if norm > 0 else s
        return c0 * eye + c1 * s + c2 * (s @ s)
    if kind == "random_invertible":
        while True:
            m = rng.complex_normal((dim, dim))
            if ops.classify(m).condition_number < 1e6:
                return m
    raise ValueError(f"unknown control kind {kind!r}")


def generate(spec: InstanceSpec, rng: CounterRNG | None = None, deficient: bool = False) -> ControlledFrame:
    """Random controlled frame for ``spec``.

    Anchors and ambient frame vectors are standard complex Gaussian. With
    ``deficient`` the family is drawn in H_F coordinates with its last
    coordinate zeroed, so it spans a proper subspace.
    """
    rng = CounterRNG(spec.seed, "instance") if rng is None else rng
    d, n = spec.ambient_dim, spec.order
    while True:
        try:
            anchors = AnchorSet(rng.complex_normal((n - 1, d)))
            break
        except FrameError:
            continue
    space = build_quotient(anchors)
    if deficient:
        coords = rng.complex_normal((spec.family_size, space.dim))
        coords[:, -1] = 0
        family = FrameFamily.from_quotient(space, coords)
    else:
        while True:
            family = FrameFamily.from_ambient(space, rng.complex_normal((spec.family_size, d)))
            if ops.classify(frame_operator(family)).condition_number <= MAX_FRAME_CONDITION:
                break
    control = make_control(spec.control_kind, frame_operator(family), rng)
    return ControlledFrame(family, control)


def generate_tight(spec: InstanceSpec, rng: CounterRNG) -> ControlledFrame:
    """Controlled tight frame: a family with ``S_F = t I`` under ``spec``'s control."""
    cf = generate(spec, rng)
    t = float(rng.uniform(0.5, 3.0))
    root = ops.inverse_sqrt(cf.frame_operator)
    return cf.with_family(cf.frame.mapped(np.sqrt(t) * root))


def generate_tensor(seed: int, rng: CounterRNG, kind: str, deficient: str | None = None) -> TensorControlledFrame:
    """Two independent components; ``deficient`` in {None, "left", "right"}."""
    left = generate(random_spec(rng, seed, kind), rng, deficient == "left")
    right = generate(random_spec(rng, seed, kind), rng, deficient == "right")
    return TensorControlledFrame(left, right)


def generate_dsum(seed: int, rng: CounterRNG, kind: str, layout: str) -> DirectSumFrame:
    """``layout="disjoint"`` pads two families; ``"paired"`` shares one index."""
    a, b = random_spec(rng, seed, kind), random_spec(rng, seed, kind)
    if layout == "disjoint":
        return DirectSumFrame.disjoint(generate(a, rng), generate(b, rng))
    while max(a.quotient_dim, b.quotient_dim) > 2 * min(a.quotient_dim, b.quotient_dim) + 4:
        b = random_spec(rng, seed, kind)
    m = max(a.family_size, b.family_size, a.quotient_dim, b.quotient_dim)
    m = min(m, 2 * min(a.quotient_dim, b.quotient_dim) + 4)
    a = InstanceSpec(seed, a.ambient_dim, a.order, m, kind)
    b = InstanceSpec(seed, b.ambient_dim, b.order, m, kind)
    return DirectSumFrame(generate(a, rng), generate(b, rng))


def _commuting_unitary_like(c: np.ndarray, values: np.ndarray) -> np.ndarray:
    """``W diag(values) W^*`` in an eigenbasis ``W`` of the self-adjoint ``c``."""
    _, w = np.linalg.eigh(ops.hermitian_part(c))
    return (w * values) @ w.conj().T


def _excess(predicted_lower, predicted_upper, lower, upper) -> float:
    raw = max(0.0, predicted_lower - lower, upper - predicted_upper)
    return raw / (1 + abs(upper))


# --- single-trial checks -------------------------------------------------------
# Each returns a list of (residual, tolerance) pairs, or None to skip.


def _r32(seed, rng, kind, trial):
    cf = generate_tight(random_spec(rng, seed, kind), rng)
    try:
        b = controlled_bounds(tight_rescale(cf))
    except NotTight:
        return None
    return [(max(abs(b.lower - 1), abs(b.upper - 1)), 1e-8)]


def _t35(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        rep = synthesis_norm_check(cf, rng)
    except NotPositive:
        return None
    return [(max(0.0, rep.norm - rep.bound) / (1 + rep.bound), 1e-8), (rep.adjoint_residual, 1e-10)]


def _t36(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        pred = controlled_to_frame_bounds(cf, verify=False)
    except (NotPositive, Singular):
        return None
    if controlled_bounds(cf).lower <= 0:
        return None
    act = optimal_bounds(cf.frame)
    return [(_excess(pred.lower, pred.upper, act.lower, act.upper), 1e-8)]


def _t37(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        pred = frame_to_controlled_bounds(cf.frame, cf.control, verify=False)
    except (NotPositive, Singular):
        return None
    act = controlled_bounds(cf)
    if act.classification == NON_REAL_FORM:
        return None
    return [(_excess(pred.lower, pred.upper, act.lower, act.upper), 1e-8)]


def _t38(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        pf = parsevalize(cf)
    except (NotControlledFrame, CommutationFailure):
        return None
    b = controlled_bounds(pf)
    h = pf.frame.projected
    out = [
        (max(abs(b.lower - 1), abs(b.upper - 1)), 1e-8),
        (reconstruction_residual(pf.control, h, h), 1e-9),
    ]
    worst = 0.0
    for _ in range(10):
        f = rng.complex_normal(cf.space.dim)
        nf = float(np.vdot(f, f).real)
        worst = max(worst, abs(controlled_form(pf, f) - nf) / (1 + nf))
    out.append((worst, 1e-8))
    return out


def _t310(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        dual = canonical_dual(cf)
    except NotControlledFrame:
        return None
    rep = dual_report(cf, dual)
    out = [(rep.residual, 1e-9)]
    if ops.classify(cf.control).self_adjoint:
        out.append((rep.swapped_residual, 1e-9))
    return out


def _r311(seed, rng, kind, trial):
    cf = generate(random_spec(rng, seed, kind), rng)
    try:
        dual = canonical_dual(cf)
        constant = dual_implies_frame_bound(cf, dual, verify=False)
    except (NotControlledFrame, NotPositive, Singular):
        return None
    actual = controlled_bounds(cf).lower
    return [(max(0.0, constant - actual) / (1 + actual), 1e-8)]


def _t43(seed, rng, kind, trial):
    deficient = (None, "left", "right")[trial % 3]
    tcf = generate_tensor(seed, rng, kind, deficient)
    rep = factorization_check(tcf, rng)
    out = [(0.0 if rep.holds else 1.0, 0.5)]
    b1, b2 = controlled_bounds(tcf.left), controlled_bounds(tcf.right)
    if b1.is_controlled_frame and b2.is_controlled_frame:
        t = controlled_bounds(tcf.combined)
        scale = 1 + abs(t.upper)
        out.append((abs(t.lower - b1.lower * b2.lower) / scale, 1e-9))
        out.append((abs(t.upper - b1.upper * b2.upper) / scale, 1e-9))
    return out


def _p44(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    s = tensor_frame_operator(tcf, verify=False)
    s1, s2 = tcf.left.controlled_operator, tcf.right.controlled_operator
    scale = 1 + ops.operator_norm(s1) * ops.operator_norm(s2)
    out = [(float(np.linalg.norm(s - np.kron(s1, s2), 2)) / scale, 1e-11)]
    if ops.classify(s1).invertible and ops.classify(s2).invertible:
        inv = np.kron(np.linalg.inv(s1), np.linalg.inv(s2))
        direct = np.linalg.inv(s)
        out.append((float(np.linalg.norm(inv - direct, 2)) / (1 + ops.operator_norm(direct)), 1e-9))
    return out


def _p45(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    b1, b2 = controlled_bounds(tcf.left), controlled_bounds(tcf.right)
    if not sandwich_applies(b1, b2):
        return None
    t = controlled_bounds(tcf.combined)
    return [(_excess(b1.lower * b2.lower, b1.upper * b2.upper, t.lower, t.upper), 1e-9)]


def _p46(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    f = rng.complex_normal(tcf.space.dim)  # generic, not a simple tensor
    scale = 1 + np.linalg.norm(f)
    out = []
    try:
        for formula in ("dual", "inverse"):
            rec = tensor_reconstruct(tcf, f, formula)
            out.append((float(np.linalg.norm(rec - f)) / scale, 1e-9))
    except NotControlledFrame:
        return None
    return out


def _c47(seed, rng, kind, trial):
    left = generate_tight(random_spec(rng, seed, kind), rng)
    right = generate_tight(random_spec(rng, seed, kind), rng)
    tcf = TensorControlledFrame(left, right)
    f = rng.complex_normal(tcf.space.dim)
    try:
        rec = tight_tensor_reconstruct(tcf, f)
    except NotTight:
        return None
    return [(float(np.linalg.norm(rec - f)) / (1 + np.linalg.norm(f)), 1e-9)]


def _t48(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    if not controlled_bounds(tcf.combined).is_controlled_frame:
        return None
    if not (ops.classify(tcf.left.control).self_adjoint and ops.classify(tcf.right.control).self_adjoint):
        return None
    us = []
    for cf in (tcf.left, tcf.right):
        dim = cf.space.dim
        mags = rng.uniform(0.5, 2.0, dim)
        phases = np.exp(2j * np.pi * rng.random(dim))
        us.append(mags * phases)
    if trial % 2 == 1:  # half the trials use a singular factor
        us[int(rng.integers(0, 2))][0] = 0.0
    u1 = _commuting_unitary_like(tcf.left.control, us[0])
    u2 = _commuting_unitary_like(tcf.right.control, us[1])
    rep = image_under_operator(tcf, u1, u2, verify=False)
    return [(0.0 if rep.holds else 1.0, 0.5), (rep.conjugation_residual, 1e-9)]


def _tensor_duals(tcf):
    return canonical_dual(tcf.left), canonical_dual(tcf.right)


def _tensor_dual_residual(tcf, left_dual, right_dual) -> float:
    e = np.einsum("ia,jb->ijab", left_dual.projected, right_dual.projected).reshape(-1, tcf.space.dim)
    return reconstruction_residual(tcf.control, tcf.family.projected, e)


def _t410(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    try:
        ld, rd = _tensor_duals(tcf)
    except NotControlledFrame:
        return None
    ok = tensor_dual_check(tcf, ld, rd)
    return [(0.0 if ok else 1.0, 0.5), (_tensor_dual_residual(tcf, ld, rd), 1e-9)]


def _t411(seed, rng, kind, trial):
    tcf = generate_tensor(seed, rng, kind)
    try:
        ld, rd = _tensor_duals(tcf)
    except NotControlledFrame:
        return None
    if not (ops.classify(tcf.left.control).self_adjoint and ops.classify(tcf.right.control).self_adjoint):
        return None
    u = _commuting_unitary_like(tcf.left.control, np.exp(2j * np.pi * rng.random(tcf.left.space.dim)))
    v = _commuting_unitary_like(tcf.right.control, np.exp(2j * np.pi * rng.random(tcf.right.space.dim)))
    ok = unitary_dual_transport(tcf, ld, rd, u, v)
    moved = TensorControlledFrame(
        tcf.left.with_family(tcf.left.frame.mapped(u)), tcf.right.with_family(tcf.right.frame.mapped(v))
    )
    res = _tensor_dual_residual(moved, ld.mapped(u), rd.mapped(v))
    return [(0.0 if ok else 1.0, 0.5), (res, 1e-9)]


def _t415(seed, rng, kind, trial):
    dsf = generate_dsum(seed, rng, kind, "disjoint")
    b = dsum_controlled_bounds(dsf, verify=False)
    b1, b2 = controlled_bounds(dsf.left), controlled_bounds(dsf.right)
    lo, hi = min(b1.lower, b2.lower), max(b1.upper, b2.upper)
    out = [(_excess(lo, hi, b.lower, b.upper), 1e-8)]
    paired = generate_dsum(seed, rng, kind, "paired")
    try:
        dsum_controlled_bounds(paired, verify=False)
        out.append((1.0, 0.5))  # cross terms should have been rejected
    except CrossTermViolation:
        out.append((0.0, 0.5))
    return out


CHECKS = {
    "R3.2": (_r32, SCALAR_KINDS),
    "T3.5": (_t35, POSITIVE_KINDS),
    "T3.6": (_t36, POSITIVE_KINDS),
    "T3.7": (_t37, COMMUTING_KINDS),
    "T3.8": (_t38, COMMUTING_KINDS),
    "T3.10": (_t310, COMMUTING_KINDS),
    "R3.11": (_r311, COMMUTING_KINDS),
    "T4.3": (_t43, COMMUTING_KINDS),
    "P4.4": (_p44, CONTROL_KINDS),
    "P4.5": (_p45, COMMUTING_KINDS),
    "P4.6": (_p46, COMMUTING_KINDS),
    "C4.7": (_c47, SCALAR_KINDS),
    "T4.8": (_t48, COMMUTING_KINDS),
    "T4.10": (_t410, COMMUTING_KINDS),
    "T4.11": (_t411, COMMUTING_KINDS),
    "T4.15": (_t415, CONTROL_KINDS),
}
THEOREM_IDS = tuple(CHECKS)


def run_trial(theorem_id: str, seed: int, trial: int, control_kind: str | None = None):
    """Residual/tolerance pairs for one trial, or ``None`` when skipped."""
    check, kinds = CHECKS[theorem_id]
    rng = CounterRNG(seed, theorem_id, trial)
    kind = kinds[int(rng.integers(0, len(kinds)))] if control_kind is None else control_kind
    return check(seed, rng, kind, trial)


def run_theorem(theorem_id: str, seed: int, trials: int, control_kind: str | None = None) -> TheoremReport:
    if theorem_id not in CHECKS:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if control_kind is not None and control_kind not in CONTROL_KINDS:
        raise ValueError(f"unknown control kind {control_kind!r}")
    failures, skipped, worst = 0, 0, 0.0
    for k in range(trials):
        result = run_trial(theorem_id, seed, k, control_kind)
        if result is None:
            skipped += 1
            continue
        worst = max([worst] + [float(r) for r, _ in result])
        if any(not r <= tol for r, tol in result):
            failures += 1
    if skipped == trials:
        status = SKIPPED
    else:
        status = PASS if failures == 0 else FAIL
    return TheoremReport(theorem_id, trials, failures, worst, status)


def run_suite(seed: int, trials: int) -> list[TheoremReport]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return [run_theorem(tid, seed, trials) for tid in THEOREM_IDS]


def reports_to_json(reports) -> str:
    return json.dumps([asdict(r) for r in reports], indent=2)
