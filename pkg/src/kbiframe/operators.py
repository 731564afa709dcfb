"""Operator predicates: range inclusion / Douglas factorization, injectivity,
co-isometry, commutation, pseudo-inverse checks and range restriction.

Every operator on C^n has closed range, so "closed range" hypotheses are
vacuous here and "dense range" reduces to "surjective".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from ._validation import check_matrix, check_same_shape
from .errors import DimensionMismatchError
from .tolerances import DEFAULT, Tolerances


@dataclass
class DouglasReport:
    """Outcome of the three equivalent range-inclusion tests.

    ``range_included`` is the projector test. ``majorization_holds`` and
    ``factorization_holds`` are the other two criteria, computed
    independently; ``consistent`` says whether all three agree.
    """

    range_included: bool
    majorization_holds: bool
    factorization_holds: bool
    lambda_min: float | None
    factor_u: np.ndarray | None
    projector_residual: float
    majorization_margin: float | None
    factor_residual: float
    witness: np.ndarray | None = None

    @property
    def residuals(self) -> tuple[float, float | None, float]:
        return (self.projector_residual, self.majorization_margin, self.factor_residual)

    @property
    def consistent(self) -> bool:
        return self.range_included == self.majorization_holds == self.factorization_holds


def douglas_check(t1, t2, tols: Tolerances = DEFAULT, incl_tol: float = 1e-9) -> DouglasReport:
    """Test ``R(t1) ⊆ R(t2)`` three ways.

    1. projector: ``||(I - P) t1|| <= incl_tol * max(1, ||t1||)`` with ``P``
       the orthogonal projector onto the numerical range of ``t2``;
    2. majorization: least ``lambda`` with ``t1 t1^* <= lambda^2 t2 t2^*``,
       found by bisection on ``[0, ||t1|| / sigma+_min(t2) + 1]``;
    3. factorization: ``U = t2^+ t1`` reproduces ``t1`` within ``incl_tol``.

    When inclusion fails, ``witness`` is a unit vector in ``R(t1)``
    orthogonal to ``R(t2)``.
    """
    a = check_matrix(t1, "t1", square=True)
    b = check_matrix(t2, "t2", square=True)
    check_same_shape(a, b, ("t1", "t2"))
    rtol = tols.rank_tol(b.shape)
    a_norm = linalg.spectral_norm(a)
    scale = max(1.0, a_norm)

    q = linalg.range_basis(b, rtol)
    outside = a - q @ (q.conj().T @ a)
    proj_res = linalg.spectral_norm(outside)
    included = proj_res <= incl_tol * scale

    witness = None
    if not included:
        u, _, _ = linalg.svd(outside)
        witness = u[:, 0]
        z = witness[np.argmax(np.abs(witness))]
        witness = witness * (abs(z) / z)

    b_pinv = linalg.pseudo_inverse(b, rtol)
    u_fac = b_pinv @ a
    fac_res = linalg.spectral_norm(b @ u_fac - a)
    factor_ok = fac_res <= incl_tol * scale

    lam, margin = _majorization_constant(a, b, tols, rtol)
    major_ok = lam is not None

    return DouglasReport(
        range_included=bool(included),
        majorization_holds=bool(major_ok),
        factorization_holds=bool(factor_ok),
        lambda_min=lam,
        factor_u=u_fac if factor_ok else None,
        projector_residual=proj_res,
        majorization_margin=margin,
        factor_residual=fac_res,
        witness=witness,
    )


def _majorization_constant(a, b, tols: Tolerances, rtol: float):
    aa = a @ a.conj().T
    bb = b @ b.conj().T
    scale = max(1.0, linalg.spectral_norm(aa))

    def margin(lam: float) -> float:
        return linalg.min_eig_hermitian(lam * lam * bb - aa, np.inf)

    def ok(lam: float) -> bool:
        return margin(lam) >= -tols.ktol * scale

    if ok(0.0):
        return 0.0, margin(0.0)
    s = np.linalg.svd(b, compute_uv=False)
    pos = s[s > rtol * s[0]] if s.size and s[0] > 0 else s[:0]
    if pos.size == 0:
        return None, None
    hi = linalg.spectral_norm(a) / float(pos[-1]) + 1.0
    if not ok(hi):
        return None, None
    lo = 0.0
    while hi - lo > tols.bis_tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi, margin(hi)


def injectivity_constant(t) -> float:
    """Largest ``c`` with ``c ||x||^2 <= ||t x||^2``, i.e. ``sigma_min(t)^2``."""
    a = check_matrix(t, "t", square=True)
    if a.size == 0:
        return math.inf
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[-1] ** 2)


def is_coisometry(t, tol: float = 1e-9) -> bool:
    """``||t t^* - I|| <= tol``."""
    a = check_matrix(t, "t", square=True)
    return linalg.spectral_norm(a @ a.conj().T - np.eye(a.shape[0])) <= tol


def commutation_residual(t, k) -> float:
    """``||t k - k t||``."""
    a = check_matrix(t, "t", square=True)
    b = check_matrix(k, "k", square=True)
    check_same_shape(a, b, ("t", "k"))
    return linalg.spectral_norm(a @ b - b @ a)


class PenroseResiduals(NamedTuple):
    null_space: float  # N(t+) vs R(t)^perp
    range_space: float  # R(t+) vs N(t)^perp
    identity_on_range: float  # ||t t+ Q - Q||, Q spanning R(t)

    def max(self) -> float:
        return max(self)


def pseudo_inverse_verify(t, t_plus, tol: float | None = None) -> PenroseResiduals:
    """Residuals of the three defining properties of ``t_plus`` as ``t^+``.

    Subspace equalities are measured as spectral-norm distances between
    orthogonal projectors; ``tol`` is the rank cutoff used for them.
    """
    a = check_matrix(t, "t")
    ap = check_matrix(t_plus, "t_plus")
    if ap.shape != a.shape[::-1]:
        raise DimensionMismatchError(f"t_plus has shape {ap.shape}, expected {a.shape[::-1]}")
    # N(t+) = R(t+^*)^perp, so compare projectors onto R(t+^*) and R(t)
    p_range_t = linalg.range_projector(a, tol)
    p_range_tp_adj = linalg.range_projector(ap.conj().T, tol)
    r1 = linalg.spectral_norm(p_range_tp_adj - p_range_t)
    # N(t)^perp = R(t^*)
    p_range_tp = linalg.range_projector(ap, tol)
    p_range_t_adj = linalg.range_projector(a.conj().T, tol)
    r2 = linalg.spectral_norm(p_range_tp - p_range_t_adj)
    q = linalg.range_basis(a, tol)
    r3 = linalg.spectral_norm(a @ (ap @ q) - q) if q.shape[1] else 0.0
    return PenroseResiduals(r1, r2, r3)


def restrict_to_range(s, k, tols: Tolerances = DEFAULT) -> tuple[np.ndarray, float]:
    """Compress ``s`` to ``R(k)``.

    Returns ``(Q^* s Q, sigma_min(s Q))`` where the columns of ``Q`` are an
    orthonormal basis of ``R(k)``. The second value is a lower bound for
    ``||s x||`` over unit ``x`` in ``R(k)``; it is ``inf`` when ``R(k) = {0}``.
    """
    a = check_matrix(s, "s", square=True)
    b = check_matrix(k, "k", square=True)
    check_same_shape(a, b, ("s", "k"))
    q = linalg.range_basis(b, tols.rank_tol(b.shape))
    if q.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.complex128), math.inf
    sq = a @ q
    sigma = float(np.linalg.svd(sq, compute_uv=False)[-1])
    return q.conj().T @ sq, sigma


def is_surjective(t, tols: Tolerances = DEFAULT) -> bool:
    a = check_matrix(t, "t", square=True)
    return linalg.numerical_rank(a, tols.rank_tol(a.shape)) == a.shape[0]
