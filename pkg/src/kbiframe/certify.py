"""Frame, K-frame, biframe and K-biframe certification.

A pair ``(X, Y)`` is a K-biframe when there are ``0 < A <= B`` with

    A ||K^* x||^2 <= sum_i <x, x_i><y_i, x> <= B ||x||^2   for all x.

In finite dimension this is the operator inequality ``A K K^* <= H <= B I``
on the Hermitian part ``H`` of the biframe operator, provided the mixed sum
is real, i.e. ``S`` is Hermitian. The optimal ``B`` is ``lambda_max(H)``; the
optimal ``A`` is located by bisection on the PSD test of ``H - A K K^*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from ._validation import check_matrix
from .errors import DimensionMismatchError, NotHermitianError
from .frames import BiframePair, FrameSequence, biframe_operator, hermitian_part, pair_form
from .tolerances import DEFAULT, Tolerances

UNBOUNDED = math.inf
"""Sentinel for an optimal lower bound that any ``A`` satisfies (``K K^* = 0``)."""


@dataclass(frozen=True)
class BoundProblem:
    """The pencil ``(H, G)`` with ``G = K K^*``."""

    h: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        h = check_matrix(self.h, "h", square=True)
        g = check_matrix(self.g, "g", square=True)
        if h.shape != g.shape:
            raise DimensionMismatchError(f"h has shape {h.shape} but g has {g.shape}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @classmethod
    def from_operator(cls, s, k) -> "BoundProblem":
        k = check_matrix(k, "k")
        g = k @ k.conj().T
        return cls(hermitian_part(s), (g + g.conj().T) / 2)


@dataclass
class KBiframeCertificate:
    hermitian_residual: float
    psd_margin: float
    a_opt: float
    b_opt: float
    is_k_biframe: bool
    is_tight: bool
    is_parseval: bool
    witness_lower: np.ndarray | None
    herm_tol: float
    bis_tol: float
    reason: str = "ok"
    a_est: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def a_unbounded(self) -> bool:
        return math.isinf(self.a_opt)


@dataclass
class ClaimedBoundCheck:
    """Validity of externally claimed bounds against a pair and ``K``."""

    claimed_a: float | None
    claimed_b: float | None
    lower_margin: float | None  # min eig(H - A K K^*)
    upper_margin: float | None  # min eig(B I - H)
    lower_valid: bool
    upper_valid: bool
    witness: np.ndarray | None
    witness_margin: float | None

    @property
    def valid(self) -> bool:
        return self.lower_valid and self.upper_valid


def _psd_ok(m: np.ndarray, ktol: float, scale: float) -> bool:
    return linalg.min_eig_hermitian(m, ktol=np.inf) >= -ktol * scale


def optimal_upper_bound(h, ktol: float = DEFAULT.ktol) -> float:
    """Least ``B`` with ``H <= B I``, i.e. ``lambda_max(H)``."""
    return linalg.max_eig_hermitian(h, ktol)


def _smallest_positive_eig(w: np.ndarray, rtol: float) -> float | None:
    if w.size == 0 or w[-1] <= 0:
        return None
    pos = w[w > rtol * w[-1]]
    return float(pos[0]) if pos.size else None


def optimal_lower_bound(bp: BoundProblem, bis_tol: float = DEFAULT.bis_tol,
                        ktol: float = DEFAULT.ktol,
                        rtol: float | None = None) -> float:
    """Largest ``A >= 0`` with ``H - A G`` PSD (within ``ktol * ||H||``).

    Returns ``0.0`` when no positive ``A`` works (including ``H`` itself
    failing the PSD test) and :data:`UNBOUNDED` when ``G = 0`` and ``H`` is
    PSD. Otherwise bisects on ``[0, lambda_max(H) / lambda+_min(G) + 1]``
    down to width ``bis_tol`` and returns the feasible end of the bracket.
    """
    if not bis_tol > 0:
        raise ValueError("bis_tol must be positive")
    h, g = bp.h, bp.g
    for name, m in (("h", h), ("g", g)):
        if not linalg.is_hermitian(m, ktol):
            raise NotHermitianError(f"{name} is not Hermitian")
    wh = linalg.eigvalsh(h, ktol)
    if wh.size == 0:
        return UNBOUNDED
    h_norm = float(np.max(np.abs(wh)))
    floor = ktol * h_norm
    if wh[0] < -floor:
        return 0.0
    wg = linalg.eigvalsh(g, ktol)
    rtol = DEFAULT.rank_tol(g.shape) if rtol is None else rtol
    g_min = _smallest_positive_eig(wg, rtol)
    if g_min is None or wg[-1] <= ktol * max(1.0, h_norm):
        return UNBOUNDED
    # A > 0 needs R(K) inside R(H): a numerical null direction of H that K^*
    # does not annihilate rules out every positive A, however small. The
    # relative PSD slack alone cannot see this once A drops below ktol * ||H||.
    w_full, v_full = linalg.hermitian_eigen(h, ktol=np.inf)
    null = v_full[:, w_full <= floor]
    if null.shape[1]:
        g_on_null = linalg.max_eig_hermitian(null.conj().T @ g @ null, np.inf)
        if g_on_null > ktol * float(wg[-1]):
            return 0.0

    def feasible(a: float) -> bool:
        return _psd_ok(h - a * g, ktol, h_norm)

    if not feasible(bis_tol):
        return 0.0
    lo, hi = bis_tol, float(wh[-1]) / g_min + 1.0
    if feasible(hi):  # pragma: no cover - bracket is provably infeasible
        return hi
    while hi - lo > bis_tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _phase_normalise(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > 1e-8 * max(np.max(np.abs(v)), 1e-300))
    if idx.size:
        z = v[idx[0]]
        v = v * (abs(z) / z)
    return v


def lower_witness(h: np.ndarray, g: np.ndarray, k: np.ndarray, a: float,
                  tols: Tolerances = DEFAULT) -> np.ndarray:
    """A vector ``x`` maximising the violation of ``a ||K^* x||^2 <= <H x, x>``.

    Two candidates are compared: a null direction of ``H`` that ``K^*`` does
    not annihilate (refutes every ``a > 0``), and the eigenvector for the
    most negative eigenvalue of ``H - a G``. The result is scaled so that
    ``||K^* x|| = 1`` whenever ``K^* x`` is not negligible.
    """
    candidates = []
    w, v = linalg.hermitian_eigen(h, ktol=np.inf)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    null = v[:, np.abs(w) <= tols.ktol * max(scale, 1.0)]
    if null.shape[1]:
        gw, gv = linalg.hermitian_eigen(null.conj().T @ g @ null, ktol=np.inf)
        if gw[-1] > tols.ktol * max(1.0, linalg.spectral_norm(g)):
            candidates.append(null @ gv[:, -1])
    aa = 0.0 if math.isinf(a) else a
    ew, ev = linalg.hermitian_eigen(h - aa * g, ktol=np.inf)
    candidates.append(ev[:, 0])

    best, best_margin = None, -np.inf
    for c in candidates:
        kx = np.linalg.norm(k.conj().T @ c)
        if kx > math.sqrt(tols.ktol):
            c = c / kx
        margin = aa * float(np.linalg.norm(k.conj().T @ c) ** 2) - float(np.real(c.conj() @ h @ c))
        if margin > best_margin:
            best, best_margin = c, margin
    return _phase_normalise(best)


def upper_witness(h: np.ndarray) -> np.ndarray:
    _, v = linalg.hermitian_eigen(h, ktol=np.inf)
    return _phase_normalise(v[:, -1])


def _skew_witness(s: np.ndarray) -> np.ndarray:
    # maximises |Im <S v, v>|
    skew = (s - s.conj().T) / 2j
    w, v = linalg.hermitian_eigen(skew, ktol=np.inf)
    i = 0 if abs(w[0]) > abs(w[-1]) else -1
    return _phase_normalise(v[:, i])


def _check_k(p: BiframePair, k) -> np.ndarray:
    k = check_matrix(k, "k", square=True)
    if k.shape[0] != p.dim:
        raise DimensionMismatchError(f"k has size {k.shape[0]} but pair dim is {p.dim}")
    return k


def certify_k_biframe(p: BiframePair, k, tols: Tolerances = DEFAULT) -> KBiframeCertificate:
    """Decide whether ``p`` is a K-biframe and compute optimal bounds.

    Parameters
    ----------
    p : BiframePair
    k : array_like, shape (dim, dim)
    tols : Tolerances

    Returns
    -------
    KBiframeCertificate
        ``a_opt`` is :data:`UNBOUNDED` when ``K K^* = 0``. A non-Hermitian
        biframe operator is reported as not a K-biframe; its bounds are still
        computed from the Hermitian part for diagnostics.
    """
    k = _check_k(p, k)
    s = biframe_operator(p)
    s_norm = linalg.spectral_norm(s)
    residual = linalg.hermitian_residual(s) / max(1.0, s_norm)
    bp = BoundProblem.from_operator(s, k)
    h, g = bp.h, bp.g
    h_norm = linalg.spectral_norm(h)
    psd_margin = linalg.min_eig_hermitian(h)
    b_opt = optimal_upper_bound(h)
    a_opt = optimal_lower_bound(bp, tols.bis_tol, tols.ktol, tols.rtol)
    psd_ok = psd_margin >= -tols.ktol * h_norm
    hermitian = residual <= tols.herm_tol

    is_k = hermitian and psd_ok and a_opt > 0
    a_est = None
    g_trace = float(np.real(np.trace(g)))
    if g_trace > tols.ktol * max(1.0, h_norm):
        a_est = float(np.real(np.trace(h))) / g_trace
    is_tight = bool(
        is_k and a_est is not None
        and linalg.spectral_norm(h - a_est * g) <= tols.herm_tol * max(1.0, h_norm)
    )
    if is_tight and not math.isinf(a_opt) and abs(a_est - a_opt) <= 2 * tols.bis_tol:
        # exact optimum of a tight pair; keep it only if it passes the same PSD test
        if _psd_ok(h - a_est * g, tols.ktol, h_norm):
            a_opt = a_est
    is_parseval = bool(is_tight and abs(a_est - 1.0) <= tols.herm_tol)

    witness = None
    if not hermitian:
        reason = "non_hermitian"
        witness = None
    elif not psd_ok:
        reason = "not_psd"
    elif a_opt <= 0:
        reason = "no_lower_bound"
    else:
        reason = "ok"
    if reason in ("not_psd", "no_lower_bound"):
        witness = lower_witness(h, g, k, tols.bis_tol, tols)

    return KBiframeCertificate(
        hermitian_residual=residual,
        psd_margin=psd_margin,
        a_opt=a_opt,
        b_opt=b_opt,
        is_k_biframe=bool(is_k),
        is_tight=is_tight,
        is_parseval=is_parseval,
        witness_lower=witness,
        herm_tol=tols.herm_tol,
        bis_tol=tols.bis_tol,
        reason=reason,
        a_est=a_est,
    )


def certify_k_frame(x: FrameSequence, k, tols: Tolerances = DEFAULT) -> KBiframeCertificate:
    return certify_k_biframe(BiframePair(x, x), k, tols)


def certify_biframe(p: BiframePair, tols: Tolerances = DEFAULT) -> KBiframeCertificate:
    return certify_k_biframe(p, np.eye(p.dim), tols)


def certify_frame(x: FrameSequence, tols: Tolerances = DEFAULT) -> KBiframeCertificate:
    return certify_k_biframe(BiframePair(x, x), np.eye(x.dim), tols)


def bound_margins(h: np.ndarray, g: np.ndarray, a: float | None, b: float | None,
                  ktol: float = DEFAULT.ktol) -> tuple[float | None, float | None]:
    """``(min eig(H - a G), b - lambda_max(H))``; ``None`` for a missing bound.

    An unbounded ``a`` is meaningful only when ``G = 0``; otherwise its
    margin is ``-inf``.
    """
    lower = upper = None
    if a is not None:
        if math.isinf(a):
            g_zero = linalg.spectral_norm(g) <= ktol * max(1.0, linalg.spectral_norm(h))
            lower = linalg.min_eig_hermitian(h, np.inf) if g_zero else -math.inf
        else:
            lower = linalg.min_eig_hermitian(h - a * g, np.inf)
    if b is not None:
        upper = b - linalg.max_eig_hermitian(h, np.inf)
    return lower, upper


def check_claimed_bounds(p: BiframePair, k, claimed_a: float | None,
                         claimed_b: float | None,
                         tols: Tolerances = DEFAULT) -> ClaimedBoundCheck:
    """Test whether ``claimed_a`` / ``claimed_b`` are valid bounds for ``p``.

    A bound is valid when its PSD margin is at least
    ``-herm_tol * max(1, ||H||)``. On failure a normalised witness vector is
    returned together with its violation margin, re-evaluated through
    :func:`pair_form`.
    """
    k = _check_k(p, k)
    s = biframe_operator(p)
    bp = BoundProblem.from_operator(s, k)
    return _check_bounds_hg(p, bp.h, bp.g, k, claimed_a, claimed_b, tols)


def _check_bounds_hg(p, h, g, k, claimed_a, claimed_b, tols) -> ClaimedBoundCheck:
    lower, upper = bound_margins(h, g, claimed_a, claimed_b, tols.ktol)
    floor = -tols.herm_tol * max(1.0, linalg.spectral_norm(h))
    lower_valid = lower is None or lower >= floor
    upper_valid = upper is None or upper >= floor
    witness = margin = None
    if not lower_valid:
        witness = lower_witness(h, g, k, claimed_a, tols)
        aa = 0.0 if math.isinf(claimed_a) else claimed_a
        kx = float(np.linalg.norm(k.conj().T @ witness) ** 2)
        margin = aa * kx - pair_form(p, witness).real
        if math.isinf(claimed_a) and kx > 0:
            margin = math.inf
    elif not upper_valid:
        witness = upper_witness(h)
        margin = pair_form(p, witness).real - claimed_b * float(np.vdot(witness, witness).real)
    return ClaimedBoundCheck(claimed_a, claimed_b, lower, upper, bool(lower_valid),
                             bool(upper_valid), witness, margin)


def skew_witness(p: BiframePair) -> np.ndarray:
    """Unit vector where the mixed sum has the largest imaginary part."""
    return _skew_witness(biframe_operator(p))


def certify_with_claims(p: BiframePair, k, claimed: tuple[float, float] | None,
                        tols: Tolerances = DEFAULT) -> tuple[KBiframeCertificate,
                                                              ClaimedBoundCheck | None]:
    """Certify ``p`` and, if ``claimed = (A, B)`` is given, test those bounds too.

    A claimed bound that fails is recorded in the certificate's ``notes``
    with its PSD margin, e.g. ``min eig(H - A K K^*)`` for the lower bound.
    """
    cert = certify_k_biframe(p, k, tols)
    if claimed is None:
        return cert, None
    a, b = claimed
    chk = check_claimed_bounds(p, k, a, b, tols)
    if not chk.lower_valid:
        cert.notes.append(
            f"claimed lower bound {a!r} fails: min eig(H - A K K^*) = {chk.lower_margin!r}; "
            f"optimal lower bound is {cert.a_opt!r}")
    if not chk.upper_valid:
        cert.notes.append(
            f"claimed upper bound {b!r} fails: B - lambda_max(H) = {chk.upper_margin!r}; "
            f"optimal upper bound is {cert.b_opt!r}")
    return cert, chk
