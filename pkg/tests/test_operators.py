import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cvec, random_positive
from nframes import operators as ops
from nframes.errors import DimensionMismatch, NotPositive, NotUnitary, Singular


def test_adjoint_examples(rng):
    np.testing.assert_array_equal(ops.adjoint(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(ops.adjoint(np.diag([1j, 2])), np.diag([-1j, 2]))
    t = cvec(rng, 4, 4)
    np.testing.assert_array_equal(ops.adjoint(ops.adjoint(t)), t)
    for _ in range(50):
        f, g = cvec(rng, 4), cvec(rng, 4)
        assert abs(np.vdot(g, t @ f) - np.vdot(ops.adjoint(t) @ g, f)) < 1e-12


class TestClassify:
    def test_identity(self):
        r = ops.classify(np.eye(3))
        assert r.self_adjoint and r.positive and r.invertible
        assert r.condition_number == pytest.approx(1.0)

    def test_singular_projection(self):
        r = ops.classify(np.diag([1.0, 0.0]))
        assert r.positive and not r.invertible
        assert r.condition_number == float("inf")

    def test_nilpotent(self):
        r = ops.classify([[0, 1], [0, 0]])
        assert not r.self_adjoint and not r.invertible and not r.positive

    def test_zero_matrix_never_raises(self):
        r = ops.classify(np.zeros((2, 2)))
        assert not r.invertible

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            ops.classify(np.ones((2, 3)))


class TestSquareRoot:
    def test_diagonal(self):
        np.testing.assert_allclose(ops.sqrt_positive(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)
        np.testing.assert_allclose(ops.sqrt_positive(np.eye(3)), np.eye(3), atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_square_recovers_input(self, seed, dim):
        rng = np.random.default_rng(seed)
        t = random_positive(rng, dim)
        v = ops.sqrt_positive(t)
        assert ops.classify(v).positive
        assert np.linalg.norm(v @ v - t, 2) < 1e-9 * (1 + np.linalg.norm(t, 2))
        assert ops.commutes(t, v)
        np.testing.assert_array_equal(v, ops.sqrt_positive(t))
        np.testing.assert_allclose(ops.inverse(v), ops.sqrt_positive(ops.inverse(t)), atol=1e-8)

    def test_rejects_non_positive(self):
        with pytest.raises(NotPositive):
            ops.sqrt_positive(np.diag([1.0, -1.0]))

    def test_inverse_sqrt(self, rng):
        t = random_positive(rng, 4)
        r = ops.inverse_sqrt(t)
        np.testing.assert_allclose(r @ t @ r, np.eye(4), atol=1e-9)
        with pytest.raises(Singular):
            ops.inverse_sqrt(np.diag([1.0, 0.0]))


class TestInverse:
    def test_examples(self, rng):
        np.testing.assert_allclose(ops.inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
        np.testing.assert_allclose(ops.inverse(np.eye(2)), np.eye(2))
        t = cvec(rng, 5, 5) + 3 * np.eye(5)
        cond = ops.classify(t).condition_number
        assert np.linalg.norm(t @ ops.inverse(t) - np.eye(5), 2) < 1e-9 * cond

    def test_singular(self):
        with pytest.raises(Singular):
            ops.inverse(np.diag([1.0, 0.0]))


class TestPseudoInverse:
    def test_examples(self, rng):
        np.testing.assert_allclose(ops.pseudo_inverse(np.diag([1.0, 0.0])), np.diag([1.0, 0.0]), atol=1e-12)
        np.testing.assert_array_equal(ops.pseudo_inverse(np.zeros((3, 3))), np.zeros((3, 3)))
        t = cvec(rng, 4, 4) + 2 * np.eye(4)
        np.testing.assert_allclose(ops.pseudo_inverse(t), ops.inverse(t), atol=1e-9)

    def test_penrose_identities_rank_deficient(self, rng):
        t = cvec(rng, 5, 2) @ cvec(rng, 2, 5)
        p = ops.pseudo_inverse(t)
        h = lambda m: m.conj().T  # noqa: E731
        for residual in (t @ p @ t - t, p @ t @ p - p, h(t @ p) - t @ p, h(p @ t) - p @ t):
            assert np.linalg.norm(residual, 2) < 1e-9
        u, s, _ = np.linalg.svd(t)
        rng_basis = u[:, s > 1e-10 * s[0]]
        assert np.linalg.norm(t @ p @ rng_basis - rng_basis, 2) < 1e-9
        np.testing.assert_allclose(ops.pseudo_inverse(p), t, atol=1e-8)


class TestCommutes:
    def test_examples(self, rng):
        t = cvec(rng, 3, 3)
        assert ops.commutes(t, np.eye(3))
        assert not ops.commutes(np.diag([1.0, 2.0]), [[0, 1], [1, 0]])

    def test_positive_operators_need_not_commute(self):
        a = np.diag([1.0, 2.0])
        b = np.array([[2.0, 1.0], [1.0, 2.0]])
        assert ops.classify(a).positive and ops.classify(b).positive
        assert not ops.commutes(a, b)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ops.commutes(np.eye(2), np.eye(3))


class TestNorm:
    def test_examples(self, rng):
        assert ops.operator_norm(np.eye(3)) == pytest.approx(1.0)
        assert ops.operator_norm(np.diag([1.0, -5.0])) == pytest.approx(5.0)
        t = cvec(rng, 4, 4)
        n = ops.operator_norm(t)
        for _ in range(100):
            x = cvec(rng, 4)
            assert np.linalg.norm(t @ x) / np.linalg.norm(x) <= n * (1 + 1e-10)


def test_loewner_order_matches_quadratic_forms(rng):
    t = random_positive(rng, 4)
    s = t + random_positive(rng, 4)
    assert ops.loewner_leq(t, s)
    assert not ops.loewner_leq(s, t)
    for _ in range(100):
        f = cvec(rng, 4)
        assert np.vdot(f, t @ f).real <= np.vdot(f, s @ f).real + 1e-9


def test_unitary_checks(rng):
    q, _ = np.linalg.qr(cvec(rng, 3, 3))
    assert ops.is_unitary(q)
    np.testing.assert_array_equal(ops.require_unitary(q), q)
    with pytest.raises(NotUnitary):
        ops.require_unitary(2 * q)
