import numpy as np
import pytest

from helpers import coordinate_space, cvec, family
from nframes.errors import DimensionMismatch, LengthMismatch
from nframes.frames import FrameFamily, analysis, frame_operator, optimal_bounds, synthesis
from nframes.ninner import AnchorSet, build_quotient, n_inner


def test_analysis_examples():
    space = coordinate_space(3)
    basis = family(space, np.eye(3))
    np.testing.assert_allclose(analysis(basis, [1, 0, 0]), [1, 0, 0])
    np.testing.assert_allclose(analysis(basis, np.zeros(3)), np.zeros(3))
    with pytest.raises(DimensionMismatch):
        analysis(basis, [1, 0])


def test_analysis_matches_n_inner_on_ambient_vectors(rng):
    anchors = AnchorSet(cvec(rng, 2, 6))
    space = build_quotient(anchors)
    vectors = cvec(rng, 5, 6)
    fam = FrameFamily.from_ambient(space, vectors)
    x = cvec(rng, 6)
    coeffs = analysis(fam, space.project(x))
    want = [n_inner(x, v, anchors) for v in vectors]
    np.testing.assert_allclose(coeffs, want, atol=1e-10)


def test_synthesis(rng):
    space = coordinate_space(3)
    fam = family(space, cvec(rng, 5, 3))
    np.testing.assert_allclose(synthesis(fam, np.eye(5)[2]), fam.projected[2])
    np.testing.assert_allclose(synthesis(fam, np.zeros(5)), np.zeros(3))
    c, f = cvec(rng, 5), cvec(rng, 3)
    assert abs(np.vdot(f, synthesis(fam, c)) - np.vdot(analysis(fam, f), c)) < 1e-10
    with pytest.raises(LengthMismatch):
        synthesis(fam, np.ones(4))


def test_frame_operator_examples(rng):
    space = coordinate_space(3)
    np.testing.assert_allclose(frame_operator(family(space, np.eye(3))), np.eye(3))
    np.testing.assert_allclose(frame_operator(family(space, np.vstack([np.eye(3)] * 2))), 2 * np.eye(3))
    rows = cvec(rng, 6, 3)
    oracle = sum(np.outer(r, r.conj()) for r in rows)
    np.testing.assert_allclose(frame_operator(family(space, rows)), oracle, atol=1e-12)


def test_optimal_bounds_examples():
    space = coordinate_space(2)
    b = optimal_bounds(family(space, np.eye(2)))
    assert (b.lower, b.upper, b.optimal) == pytest.approx((1, 1, True))
    b = optimal_bounds(family(space, [[1, 0], [1, 0], [0, 1]]))
    assert (b.lower, b.upper) == pytest.approx((1, 2))
    b = optimal_bounds(family(space, [[1, 0]]))
    assert b.lower == pytest.approx(0) and not b.is_frame


def test_frame_inequality_and_inverse_sandwich(rng):
    space = coordinate_space(4)
    fam = family(space, cvec(rng, 7, 4))
    b = optimal_bounds(fam)
    s = frame_operator(fam)
    for _ in range(100):
        f = cvec(rng, 4)
        energy = np.sum(np.abs(analysis(fam, f)) ** 2)
        nf = np.vdot(f, f).real
        assert b.lower * nf - 1e-9 <= energy <= b.upper * nf + 1e-9
        np.testing.assert_allclose(np.linalg.solve(s, s @ f), f, atol=1e-9)
    lam = np.linalg.eigvalsh(np.linalg.inv(s))
    assert lam[0] >= 1 / b.upper - 1e-9 and lam[-1] <= 1 / b.lower + 1e-9


def test_family_is_immutable_and_validated(rng):
    space = coordinate_space(2)
    fam = family(space, cvec(rng, 3, 2))
    with pytest.raises(ValueError):
        fam.projected[0, 0] = 1
    with pytest.raises(DimensionMismatch):
        family(space, np.ones((3, 3)))
    with pytest.raises(LengthMismatch):
        family(space, np.ones((0, 2)))
