"""Dense complex linear algebra for small operators.

All functions are pure: inputs are never modified and results are fresh
arrays. Decompositions are delegated to LAPACK through :mod:`numpy.linalg`;
this module adds the tolerance conventions, precondition checks and the
derived quantities (pseudo-inverse, PSD square root, ranges) used by the
certifier.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._validation import check_matrix
from .errors import NoConvergenceError, NotHermitianError, NotPSDError
from .tolerances import DEFAULT


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns


class SvdDecomposition(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray  # descending, nonnegative
    right: np.ndarray  # M = left @ diag(singulars) @ right^*


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return check_matrix(m).conj().T.copy()


def spectral_norm(m) -> float:
    a = check_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitian_residual(h) -> float:
    """``||H - H*||`` in spectral norm."""
    a = check_matrix(h, square=True)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a - a.conj().T, 2))


def is_hermitian(h, ktol: float = DEFAULT.ktol) -> bool:
    return hermitian_residual(h) <= ktol * max(1.0, spectral_norm(h))


def _require_hermitian(a: np.ndarray, ktol: float, name: str) -> None:
    res = hermitian_residual(a)
    scale = max(1.0, spectral_norm(a))
    if res > ktol * scale:
        raise NotHermitianError(
            f"{name} is not Hermitian: ||H - H*|| = {res:.3e} > {ktol:.1e} * {scale:.3e}"
        )


def hermitian_eigen(h, ktol: float = DEFAULT.ktol) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in ascending order; eigenvectors are the
    columns of a unitary matrix. Only the lower triangle of the symmetrised
    input is used, so tiny anti-Hermitian noise is discarded.

    Raises
    ------
    NotHermitianError
        If ``||H - H*|| > ktol * max(1, ||H||)``.
    NoConvergenceError
        If LAPACK fails to converge.
    """
    a = check_matrix(h, name="H", square=True)
    _require_hermitian(a, ktol, "H")
    sym = (a + a.conj().T) / 2
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(str(exc)) from exc
    return EigenDecomposition(w, v)


def eigvalsh(h, ktol: float = DEFAULT.ktol) -> np.ndarray:
    a = check_matrix(h, name="H", square=True)
    _require_hermitian(a, ktol, "H")
    if a.shape[0] == 0:
        return np.zeros(0)
    try:
        return np.linalg.eigvalsh((a + a.conj().T) / 2)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergenceError(str(exc)) from exc


def min_eig_hermitian(h, ktol: float = DEFAULT.ktol) -> float:
    w = eigvalsh(h, ktol)
    return float(w[0]) if w.size else 0.0


def max_eig_hermitian(h, ktol: float = DEFAULT.ktol) -> float:
    w = eigvalsh(h, ktol)
    return float(w[-1]) if w.size else 0.0


def svd(m) -> SvdDecomposition:
    a = check_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergenceError(str(exc)) from exc
    return SvdDecomposition(u, s, vh.conj().T)


def _cutoff(s: np.ndarray, rtol: float) -> float:
    return rtol * float(s[0]) if s.size else 0.0


def numerical_rank(m, rtol: float | None = None) -> int:
    """Number of singular values above ``rtol * sigma_max``."""
    a = check_matrix(m)
    if a.size == 0:
        return 0
    rtol = DEFAULT.rank_tol(a.shape) if rtol is None else rtol
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > _cutoff(s, rtol)))


def range_basis(m, rtol: float | None = None) -> np.ndarray:
    """Orthonormal columns spanning the numerical range of ``m``."""
    a = check_matrix(m)
    r = numerical_rank(a, rtol)
    if r == 0:
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    u, _, _ = svd(a)
    return u[:, :r].copy()


def null_basis(m, rtol: float | None = None) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of ``m``."""
    a = check_matrix(m)
    r = numerical_rank(a, rtol)
    _, _, v = svd(a)
    return v[:, r:].copy()


def range_projector(m, rtol: float | None = None) -> np.ndarray:
    q = range_basis(m, rtol)
    return q @ q.conj().T


def pseudo_inverse(m, rtol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse by truncated SVD.

    Singular values above ``rtol * sigma_max`` are inverted, the rest are
    zeroed. The zero matrix maps to the (transposed-shape) zero matrix.
    """
    a = check_matrix(m)
    if rtol is not None and not rtol > 0:
        raise ValueError("rtol must be positive")
    out = np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    if a.size == 0:
        return out
    rtol = DEFAULT.rank_tol(a.shape) if rtol is None else rtol
    u, s, v = svd(a)
    if s[0] == 0:
        return out
    keep = s > _cutoff(s, rtol)
    r = int(np.count_nonzero(keep))
    return (v[:, :r] / s[:r]) @ u[:, :r].conj().T


def psd_sqrt(h, ktol: float = DEFAULT.ktol) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues with ``|lambda| <= ktol * ||H||`` are treated as exact
    zeros, so the rank of the root matches the numerical rank of ``H``.

    Raises
    ------
    NotPSDError
        If some eigenvalue is below ``-ktol * ||H||``.
    """
    w, v = hermitian_eigen(h, ktol)
    if w.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    scale = float(np.max(np.abs(w)))
    floor = ktol * scale
    if w[0] < -floor:
        raise NotPSDError(f"minimum eigenvalue {w[0]:.3e} < -{floor:.3e}")
    root = np.where(w > floor, np.sqrt(np.clip(w, 0.0, None)), 0.0)
    r = (v * root) @ v.conj().T
    return (r + r.conj().T) / 2


def is_psd(h, ktol: float = DEFAULT.ktol, scale: float | None = None) -> bool:
    """``min eig(H) >= -ktol * scale`` (``scale`` defaults to ``||H||``)."""
    w = eigvalsh(h, ktol=np.inf)
    if w.size == 0:
        return True
    scale = float(np.max(np.abs(w))) if scale is None else scale
    return bool(w[0] >= -ktol * scale)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)
