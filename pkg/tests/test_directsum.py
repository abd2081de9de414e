import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import controlled, cvec, random_controlled
from nframes.controlled import ControlledFrame, controlled_bounds
from nframes.directsum import (
    DirectSumFrame,
    cross_term,
    cross_term_defect,
    cross_term_matrices,
    cross_terms_vanish,
    dsum_controlled_bounds,
    dsum_inner,
    dsum_operator,
    dsum_vector,
    sum_norm,
)
from nframes.errors import CrossTermViolation, LengthMismatch


def test_vector_and_operator_laws(rng):
    u, v, x, y = cvec(rng, 2), cvec(rng, 3), cvec(rng, 2), cvec(rng, 3)
    t, w = cvec(rng, 2, 2), cvec(rng, 3, 3)
    np.testing.assert_allclose(dsum_operator(t, w) @ dsum_vector(u, v), dsum_vector(t @ u, w @ v), atol=1e-12)
    assert abs(dsum_inner(dsum_vector(u, v), dsum_vector(x, y)) - (np.vdot(x, u) + np.vdot(y, v))) < 1e-12
    assert sum_norm(u, v) == pytest.approx(np.linalg.norm(u) + np.linalg.norm(v))
    # the additive norm dominates the induced one
    assert sum_norm(u, v) >= np.linalg.norm(dsum_vector(u, v))


def test_disjoint_example():
    left = ControlledFrame(controlled(np.eye(2)).frame, np.diag([1.0, 2.0]))
    right = ControlledFrame(controlled(np.eye(2)).frame, np.diag([3.0, 4.0]))
    dsf = DirectSumFrame.disjoint(left, right)
    assert dsf.space.dim == 4 and len(dsf.combined.frame) == 4
    assert cross_terms_vanish(dsf)
    b = dsum_controlled_bounds(dsf)
    assert 1 - 1e-12 <= b.lower and b.upper <= 4 + 1e-12
    assert (b.lower, b.upper) == pytest.approx((1, 4))


def test_paired_cross_term_example():
    dsf = DirectSumFrame(controlled([[1.0]]), controlled([[1.0]]))
    first, second = cross_term(dsf, [1], [1])
    assert first == pytest.approx(1) and second == pytest.approx(1)
    assert not cross_terms_vanish(dsf)
    with pytest.raises(CrossTermViolation):
        dsum_controlled_bounds(dsf)


def test_paired_length_mismatch():
    with pytest.raises(LengthMismatch):
        DirectSumFrame(controlled(np.eye(2)), controlled(np.eye(3)))


def test_cross_matrices_are_off_diagonal_blocks(rng):
    dsf = DirectSumFrame(random_controlled(rng, 2, 5, "invertible"), random_controlled(rng, 3, 5, "invertible"))
    first, second = cross_term_matrices(dsf)
    s = dsf.combined.controlled_operator
    np.testing.assert_allclose(s[2:, :2], first, atol=1e-12)
    np.testing.assert_allclose(s[:2, 2:], second, atol=1e-12)
    f, g = cvec(rng, 2), cvec(rng, 3)
    a, b = cross_term(dsf, f, g)
    assert abs(a - g.conj() @ first @ f) < 1e-10 and abs(b - f.conj() @ second @ g) < 1e-10
    assert cross_term_defect(dsf) == pytest.approx(max(np.abs(first).max(), np.abs(second).max()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["identity", "positive", "polynomial"]))
def test_disjoint_sandwich(seed, kind):
    rng = np.random.default_rng(seed)
    left = random_controlled(rng, int(rng.integers(1, 4)), control=kind)
    right = random_controlled(rng, int(rng.integers(1, 4)), control=kind)
    dsf = DirectSumFrame.disjoint(left, right)
    b = dsum_controlled_bounds(dsf, verify=True)
    b1, b2 = controlled_bounds(left), controlled_bounds(right)
    assert b.classification == b1.classification or kind == "positive"
    if kind != "positive":
        assert b.lower == pytest.approx(min(b1.lower, b2.lower)) and b.upper == pytest.approx(max(b1.upper, b2.upper))
