"""Shared builders for the test suite."""

import numpy as np

from nframes.controlled import ControlledFrame
from nframes.frames import FrameFamily
from nframes.ninner import AnchorSet, build_quotient


def cvec(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def coordinate_space(dim):
    """H_F equal to C^dim: ambient C^(dim+1) with the last basis vector as anchor."""
    anchor = np.zeros(dim + 1)
    anchor[-1] = 1
    return build_quotient(AnchorSet([anchor]))


def family(space, rows):
    return FrameFamily.from_quotient(space, np.asarray(rows, dtype=complex))


def controlled(rows, control=None):
    rows = np.asarray(rows, dtype=complex)
    space = coordinate_space(rows.shape[1])
    c = np.eye(rows.shape[1]) if control is None else control
    return ControlledFrame(family(space, rows), c)


def random_positive(rng, dim):
    m = cvec(rng, dim, dim)
    return m.conj().T @ m + 0.1 * np.eye(dim)


def random_controlled(rng, dim, m=None, control="identity"):
    """Random full-rank family in C^dim with a chosen control."""
    m = dim + 2 if m is None else m
    rows = cvec(rng, m, dim)
    cf = controlled(rows)
    if control == "identity":
        return cf
    if control == "positive":
        return ControlledFrame(cf.frame, random_positive(rng, dim))
    if control == "polynomial":
        s = cf.frame_operator / np.linalg.norm(cf.frame_operator, 2)
        c = 0.5 * np.eye(dim) + s + 0.3 * s @ s
        return ControlledFrame(cf.frame, c)
    if control == "invertible":
        return ControlledFrame(cf.frame, cvec(rng, dim, dim) + 2 * np.eye(dim))
    raise ValueError(control)
