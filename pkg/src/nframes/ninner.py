"""Gram-determinant n-inner product and the induced Hilbert space H_F.

The n-inner product of ``x, y`` relative to anchors ``a_2, ..., a_n`` is the
determinant of the n x n matrix whose first row is
``<x,y>, <x,a_2>, ..., <x,a_n>`` and whose row ``k`` is
``<a_k,y>, <a_k,a_2>, ..., <a_k,a_n>``.  Inner products are linear in the
first slot: ``<x, y> = sum(x * conj(y))``.

Dividing out the span of the anchors gives a genuine Hilbert space H_F. It is
realised here by a fixed linear map ``embedding`` (Phi) from ambient
coordinates onto ``C^{d_F}`` with ``<Phi x, Phi y> = <x, y | anchors>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAnchors, DimensionMismatch, NumericalNegativity

INDEPENDENCE_TOL = 1e-12
RANK_TOL = 1e-10
_CLUSTER_TOL = 1e-9


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Standard inner product, linear in ``x``."""
    return complex(np.vdot(y, x))


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected length {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AnchorSet:
    """The fixed tuple ``(a_2, ..., a_n)``; ``vectors`` has shape ``(n-1, d)``."""

    vectors: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.vectors, dtype=complex)
        if a.ndim == 1:
            a = a[None, :]
        if a.ndim != 2 or a.shape[0] < 1:
            raise DimensionMismatch("anchors must be a non-empty list of vectors")
        if not np.all(np.isfinite(a)):
            raise ValueError("anchors have non-finite components")
        k, d = a.shape
        if d < k + 1:
            raise DimensionMismatch(f"ambient dimension {d} is below the order n={k + 1}")
        gram = a.conj() @ a.T
        det = np.linalg.det(gram).real
        scale = float(np.prod(np.sum(np.abs(a) ** 2, axis=1)))
        if not det > INDEPENDENCE_TOL * scale:
            raise DegenerateAnchors(
                f"anchor Gram determinant {det:.3e} below {INDEPENDENCE_TOL:g} x {scale:.3e}"
            )
        object.__setattr__(self, "vectors", _frozen(a))

    @property
    def order(self) -> int:
        return self.vectors.shape[0] + 1

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        """``gram[k, l] = <a_k, a_l>``."""
        a = self.vectors
        return a @ a.conj().T

    def permuted(self, order) -> "AnchorSet":
        return AnchorSet(self.vectors[list(order)])


def n_inner(x, y, anchors: AnchorSet) -> complex:
    """``<x, y | a_2, ..., a_n>`` as a Gram determinant."""
    x = as_vector(x, anchors.dim)
    y = as_vector(y, anchors.dim)
    rows = np.vstack([x[None, :], anchors.vectors])
    cols = np.vstack([y[None, :], anchors.vectors])
    # m[r, c] = <rows[r], cols[c]>
    m = rows @ cols.conj().T
    return complex(np.linalg.det(m))


def n_norm(x, anchors: AnchorSet) -> float:
    """``||x, a_2, ..., a_n||``."""
    value = n_inner(x, x, anchors).real
    if value < -1e-10:
        raise NumericalNegativity(f"<x, x | anchors> = {value:.3e} is negative")
    return float(np.sqrt(max(value, 0.0)))


def semi_inner_matrix(anchors: AnchorSet) -> np.ndarray:
    """Hermitian ``K`` with ``<x, y | anchors> = y^H K x``.

    Schur complement of the Gram determinant: ``K = det(G) * P``, where ``P`` is
    the orthogonal projector onto the complement of the anchor span.
    """
    a = anchors.vectors.T  # d x (n-1), anchors as columns
    g = a.conj().T @ a
    det = np.linalg.det(g).real
    proj = np.eye(anchors.dim) - a @ np.linalg.solve(g, a.conj().T)
    k = det * proj
    return (k + k.conj().T) / 2


def _phase_fix(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    idx = int(np.argmax(mags > 1e-12 * mags.max()))
    return v * (abs(v[idx]) / v[idx])


def _canonical_eigenbasis(vecs: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of ``span(vecs)``.

    Gram-Schmidt over the projections of e_1, e_2, ... onto the span, then
    phase fixing. Independent of which basis the eigensolver returned.
    """
    d, k = vecs.shape
    proj = vecs @ vecs.conj().T
    basis: list[np.ndarray] = []
    for j in range(d):
        if len(basis) == k:
            break
        w = proj[:, j].copy()
        for b in basis:
            w -= np.vdot(b, w) * b
        nrm = np.linalg.norm(w)
        if nrm > 1e-6:
            basis.append(_phase_fix(w / nrm))
    return np.column_stack(basis)


@dataclass(frozen=True)
class QuotientSpace:
    """Coordinate model of H_F = H / span(anchors).

    ``embedding`` is the ``d_F x d`` map Phi, ``lift`` a ``d x d_F`` right
    inverse Psi (``Phi @ Psi = I``) whose columns are coset representatives.
    """

    anchors: AnchorSet
    embedding: np.ndarray = field(repr=False)
    lift: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.anchors.dim

    @property
    def quotient_dim(self) -> int:
        return self.embedding.shape[0]

    @property
    def dim(self) -> int:
        return self.quotient_dim

    def project(self, x) -> np.ndarray:
        return project(self, x)


def build_quotient(anchors: AnchorSet, ambient_dim: int | None = None) -> QuotientSpace:
    """Construct H_F with the canonical coordinate basis.

    Eigenpairs of the semi-inner-product matrix with eigenvalue above
    ``RANK_TOL * lambda_max`` are kept in descending order; each eigenspace
    gets the basis from :func:`_canonical_eigenbasis`, and
    ``Phi = diag(sqrt(lambda)) V^H``.
    """
    if not isinstance(anchors, AnchorSet):
        anchors = AnchorSet(anchors)
    if ambient_dim is not None and ambient_dim != anchors.dim:
        raise DimensionMismatch(f"anchors live in dimension {anchors.dim}, not {ambient_dim}")
    k = semi_inner_matrix(anchors)
    lam, vecs = np.linalg.eigh(k)
    lam, vecs = lam[::-1], vecs[:, ::-1]
    keep = lam > RANK_TOL * lam[0]
    lam, vecs = lam[keep], vecs[:, keep]
    expected = anchors.dim - anchors.order + 1
    if lam.size != expected:
        raise DegenerateAnchors(f"quotient has rank {lam.size}, expected {expected}")

    columns, values = [], []
    start = 0
    while start < lam.size:
        stop = start + 1
        while stop < lam.size and lam[start] - lam[stop] <= _CLUSTER_TOL * lam[0]:
            stop += 1
        columns.append(_canonical_eigenbasis(vecs[:, start:stop]))
        values.append(lam[start:stop])
        start = stop
    v = np.hstack(columns)
    lam = np.concatenate(values)

    root = np.sqrt(lam)
    embedding = root[:, None] * v.conj().T
    lift = v / root[None, :]
    return QuotientSpace(anchors, _frozen(embedding), _frozen(lift), np.array(lam))


def project(space: QuotientSpace, x) -> np.ndarray:
    """Coordinates of the coset ``x + L_F`` in H_F."""
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != space.ambient_dim:
        raise DimensionMismatch(f"expected ambient length {space.ambient_dim}, got {x.shape[-1]}")
    if x.ndim == 1:
        return space.embedding @ x
    return x @ space.embedding.T


def quotient_vector(space, coords) -> np.ndarray:
    """Validate ``coords`` as an element of ``space`` (any object with ``dim``)."""
    return as_vector(coords, space.dim)
