"""Operator calculus on H_F coordinates.

Operators are plain square complex ``numpy`` arrays. Spectral work goes
through ``eigh`` for self-adjoint inputs and the SVD otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositive, NotUnitary, Singular

SELF_ADJOINT_TOL = 1e-10
POSITIVE_TOL = 1e-10
INVERTIBLE_TOL = 1e-10
COMMUTE_TOL = 1e-10


def as_operator(t, dim: int | None = None) -> np.ndarray:
    m = np.asarray(t, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionMismatch(f"operator acts on dimension {m.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    return m


def adjoint(t) -> np.ndarray:
    return as_operator(t).conj().T


def hermitian_part(t) -> np.ndarray:
    m = as_operator(t)
    return (m + m.conj().T) / 2


def operator_norm(t) -> float:
    """Largest singular value (works for rectangular synthesis matrices too)."""
    m = np.asarray(t, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class OperatorClassReport:
    self_adjoint: bool
    positive: bool
    invertible: bool
    condition_number: float
    min_eigenvalue_hermitian_part: float


def classify(t) -> OperatorClassReport:
    """Report self-adjointness, positivity and invertibility; never raises on
    degenerate input."""
    m = as_operator(t)
    sv = np.linalg.svd(m, compute_uv=False)
    smax, smin = float(sv[0]), float(sv[-1])
    self_adjoint = np.linalg.norm(m - m.conj().T, 2) <= SELF_ADJOINT_TOL * (1 + smax)
    lam = np.linalg.eigvalsh(hermitian_part(m))
    positive = bool(self_adjoint and lam[0] >= -POSITIVE_TOL * (1 + abs(lam[-1])))
    invertible = smin > INVERTIBLE_TOL * smax
    cond = smax / smin if smin > 0 else float("inf")
    return OperatorClassReport(
        self_adjoint=bool(self_adjoint),
        positive=positive,
        invertible=bool(invertible),
        condition_number=float(cond),
        min_eigenvalue_hermitian_part=float(lam[0]),
    )


def _spectral(t):
    lam, v = np.linalg.eigh(hermitian_part(t))
    return lam, v


def sqrt_positive(t) -> np.ndarray:
    """Unique positive square root of a positive operator."""
    if not classify(t).positive:
        raise NotPositive("square root requires a positive operator")
    lam, v = _spectral(t)
    root = np.sqrt(np.clip(lam, 0.0, None))
    return (v * root) @ v.conj().T


def inverse(t) -> np.ndarray:
    m = as_operator(t)
    if not classify(m).invertible:
        raise Singular("operator is not invertible")
    return np.linalg.inv(m)


def inverse_sqrt(t) -> np.ndarray:
    """``T^{-1/2}`` for ``T`` in GB+."""
    rep = classify(t)
    if not rep.positive:
        raise NotPositive("inverse square root requires a positive operator")
    if not rep.invertible:
        raise Singular("inverse square root requires an invertible operator")
    lam, v = _spectral(t)
    return (v / np.sqrt(lam)) @ v.conj().T


def pseudo_inverse(t, rcond: float = INVERTIBLE_TOL) -> np.ndarray:
    """Moore-Penrose inverse via the SVD, discarding ``s <= rcond * s_max``."""
    m = np.asarray(t, dtype=complex)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros(m.T.shape, dtype=complex)
    inv = np.where(s > rcond * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def commutes(t, s, tol: float = COMMUTE_TOL) -> bool:
    a, b = as_operator(t), as_operator(s)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operators of shapes {a.shape} and {b.shape}")
    scale = 1 + operator_norm(a) * operator_norm(b)
    return bool(np.linalg.norm(a @ b - b @ a, 2) <= tol * scale)


def is_unitary(u, tol: float = 1e-10) -> bool:
    m = as_operator(u)
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]), 2) < tol)


def require_unitary(u) -> np.ndarray:
    if not is_unitary(u):
        raise NotUnitary("operator is not unitary")
    return as_operator(u)


def loewner_leq(t, s, tol: float = POSITIVE_TOL) -> bool:
    """``T <= S`` in the Loewner order (self-adjoint inputs)."""
    lam = np.linalg.eigvalsh(hermitian_part(as_operator(s) - as_operator(t)))
    scale = 1 + operator_norm(t) + operator_norm(s)
    return bool(lam[0] >= -tol * scale)
