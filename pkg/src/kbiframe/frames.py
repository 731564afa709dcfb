"""Finite frame sequences, biframe pairs and their operators.

Inner products are linear in the first argument and conjugate-linear in
the second: ``<u, v> = sum_k u_k * conj(v_k)``. With that convention the
biframe operator of a pair ``(X, Y)`` is ``S = sum_i y_i x_i^*`` and
``S x = sum_i <x, x_i> y_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._validation import MAX_DIM, check_matrix, check_vector
from .errors import DimensionMismatchError, MatrixTooLargeError


def inner(u, v) -> complex:
    """``<u, v>``, linear in ``u``."""
    return complex(np.vdot(v, u))


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """Finite sequence of vectors in C^dim, stored row-wise.

    ``vectors[i]`` is the i-th element. The sequence may be empty.
    """

    vectors: np.ndarray
    dim: int

    def __init__(self, vectors, dim: int | None = None):
        arr = np.asarray(vectors, dtype=np.complex128)
        if arr.size == 0 and arr.ndim < 2:
            if dim is None:
                raise DimensionMismatchError("dim is required for an empty sequence")
            arr = np.zeros((0, dim), dtype=np.complex128)
        if arr.ndim != 2:
            raise DimensionMismatchError(
                f"vectors must be a list of equal-length vectors, got shape {arr.shape}"
            )
        if dim is not None and arr.shape[1] != dim:
            raise DimensionMismatchError(
                f"vectors have length {arr.shape[1]}, expected dim={dim}"
            )
        if arr.shape[1] > MAX_DIM:
            raise MatrixTooLargeError(f"dim {arr.shape[1]} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("frame vectors contain NaN or Inf")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)
        object.__setattr__(self, "dim", int(arr.shape[1]))

    @classmethod
    def from_columns(cls, m) -> "FrameSequence":
        """Sequence whose elements are the columns of ``m`` (e.g. ``K e_i``)."""
        a = check_matrix(m)
        return cls(a.T, dim=a.shape[0])

    @classmethod
    def empty(cls, dim: int) -> "FrameSequence":
        return cls(np.zeros((0, dim)), dim=dim)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i) -> np.ndarray:
        return self.vectors[i]

    def __add__(self, other: "FrameSequence") -> "FrameSequence":
        if not isinstance(other, FrameSequence):
            return NotImplemented
        if self.dim != other.dim or len(self) != len(other):
            raise DimensionMismatchError(
                f"cannot add sequences of shape ({len(self)}, {self.dim}) "
                f"and ({len(other)}, {other.dim})"
            )
        return FrameSequence(self.vectors + other.vectors, dim=self.dim)

    def scaled(self, c) -> "FrameSequence":
        """Every element multiplied by the scalar ``c`` (or per-element array)."""
        c = np.asarray(c, dtype=np.complex128)
        if c.ndim == 0:
            return FrameSequence(self.vectors * c, dim=self.dim)
        return FrameSequence(self.vectors * c.reshape(-1, 1), dim=self.dim)

    def equals(self, other: "FrameSequence") -> bool:
        return self.dim == other.dim and np.array_equal(self.vectors, other.vectors)


@dataclass(frozen=True, eq=False)
class BiframePair:
    """Ordered pair ``(X, Y)`` of equal-length sequences in the same space."""

    x: FrameSequence
    y: FrameSequence

    def __post_init__(self):
        if self.x.dim != self.y.dim:
            raise DimensionMismatchError(f"x.dim={self.x.dim} but y.dim={self.y.dim}")
        if len(self.x) != len(self.y):
            raise DimensionMismatchError(
                f"x has {len(self.x)} vectors but y has {len(self.y)}"
            )

    @classmethod
    def of(cls, x, y, dim: int | None = None) -> "BiframePair":
        x = x if isinstance(x, FrameSequence) else FrameSequence(x, dim)
        y = y if isinstance(y, FrameSequence) else FrameSequence(y, dim)
        return cls(x, y)

    @property
    def dim(self) -> int:
        return self.x.dim

    def __len__(self) -> int:
        return len(self.x)

    def swapped(self) -> "BiframePair":
        return BiframePair(self.y, self.x)

    def equals(self, other: "BiframePair") -> bool:
        return self.x.equals(other.x) and self.y.equals(other.y)


def biframe_operator(p: BiframePair) -> np.ndarray:
    """``S = sum_i y_i x_i^*`` as a dense ``dim x dim`` matrix.

    The outer products are accumulated in index order from real and
    imaginary parts (no BLAS reordering, no fused complex multiply), so
    ``biframe_operator(p.swapped())`` is bit-for-bit the adjoint of
    ``biframe_operator(p)``.
    """
    n = p.dim
    re = np.zeros((n, n))
    im = np.zeros((n, n))
    for y, x in zip(p.y.vectors, p.x.vectors):
        yr, yi, xr, xi = y.real, y.imag, x.real, x.imag
        re += np.multiply.outer(yr, xr) + np.multiply.outer(yi, xi)
        im += np.multiply.outer(yi, xr) - np.multiply.outer(yr, xi)
    return re + 1j * im


def frame_operator(x: FrameSequence) -> np.ndarray:
    """``sum_i x_i x_i^*`` (Hermitian PSD)."""
    s = x.vectors.T @ x.vectors.conj()
    return (s + s.conj().T) / 2


def pair_form(p: BiframePair, v) -> complex:
    """``sum_i <v, x_i> <y_i, v>`` evaluated term by term."""
    v = check_vector(v, p.dim, "v")
    a = p.x.vectors.conj() @ v  # <v, x_i>
    b = p.y.vectors @ v.conj()  # <y_i, v>
    return complex(np.sum(a * b))


def hermitian_part(s) -> np.ndarray:
    """``(S + S^*) / 2``; exactly Hermitian."""
    a = check_matrix(s, name="S", square=True)
    return (a + a.conj().T) / 2


def apply_operator_to_sequence(t, x: FrameSequence) -> FrameSequence:
    """Elementwise image ``{T x_i}``."""
    t = check_matrix(t, name="T")
    if t.shape[1] != x.dim:
        raise DimensionMismatchError(f"T has {t.shape[1]} columns but dim={x.dim}")
    return FrameSequence(x.vectors @ t.T, dim=t.shape[0])


def apply_operator_to_pair(t, p: BiframePair) -> BiframePair:
    return BiframePair(
        apply_operator_to_sequence(t, p.x), apply_operator_to_sequence(t, p.y)
    )


def basis(n: int) -> FrameSequence:
    return FrameSequence(np.eye(n), dim=n)


def sequence_from(vectors: Iterable, dim: int) -> FrameSequence:
    rows = [check_vector(v, dim) for v in vectors]
    if not rows:
        return FrameSequence.empty(dim)
    return FrameSequence(np.stack(rows), dim=dim)
