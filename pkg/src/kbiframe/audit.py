"""One auditor per structural statement about K-biframes.

Each auditor checks the statement's hypotheses on a concrete instance,
instantiates the claimed bound formula with the *optimal* bounds certified
for the hypotheses, and tests the claim against the certifier. Hypothesis
failures never raise: the report comes back with ``hypotheses_ok = False``.
When a claim fails the report carries a witness vector and the size of the
violation, re-evaluated through :func:`kbiframe.frames.pair_form`.

Implication-style statements (surjectivity, invertibility) are also
searched for counterexamples over a fixed budget of random operators; a
clean search is reported as "no violation found in N trials", not as proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Sequence

import numpy as np

from . import linalg
from ._validation import check_matrix
from .certify import (
    KBiframeCertificate,
    certify_biframe,
    certify_k_biframe,
    certify_k_frame,
    check_claimed_bounds,
    lower_witness,
    skew_witness,
)
from .errors import DimensionMismatchError
from .frames import (
    BiframePair,
    FrameSequence,
    apply_operator_to_pair,
    biframe_operator,
    hermitian_part,
    pair_form,
)
from .instances import check_random_state, complex_normal, random_operator
from .operators import (
    DouglasReport,
    commutation_residual,
    douglas_check,
    is_coisometry,
    is_surjective,
    restrict_to_range,
)
from .tolerances import DEFAULT, Tolerances

STATEMENTS = (
    "swap",
    "sum",
    "linear_combination",
    "product",
    "norm_promotion",
    "operator_inequality",
    "sqrt_factorization",
    "range_transfer",
    "positive_perturbation",
    "invertibility_on_range",
    "surjectivity_necessity",
    "commuting_transfer",
    "two_sided_invertibility",
    "coisometry_transfer",
)

SAMPLE_TOL = 1e-8


@dataclass
class AuditReport:
    statement_id: str
    hypotheses_ok: bool
    hypotheses: dict[str, Any]
    claimed_a: float | None
    claimed_b: float | None
    claim_valid: bool
    certified: KBiframeCertificate | DouglasReport | None
    witness: np.ndarray | None = None
    witness_margin: float | None = None
    witness_note: str | None = None
    checks: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def claimed_bounds(self) -> tuple[float | None, float | None] | None:
        if self.claimed_a is None and self.claimed_b is None:
            return None
        return (self.claimed_a, self.claimed_b)


def _recip(a: float) -> float:
    if a == 0:
        return math.inf
    if math.isinf(a):
        return 0.0
    return 1.0 / a


def _div(a: float, d: float) -> float:
    """``a / d`` with ``x / 0 = inf`` (the bound is vacuous)."""
    if d == 0:
        return math.inf
    return a / d


def _bounds_claim(report: AuditReport, p: BiframePair, k, tols: Tolerances,
                  require_hermitian: bool = True) -> None:
    """Fill claim_valid, margins and witness from the claimed bounds of ``report``."""
    s = biframe_operator(p)
    herm_res = linalg.hermitian_residual(s) / max(1.0, linalg.spectral_norm(s))
    chk = check_claimed_bounds(p, k, report.claimed_a, report.claimed_b, tols)
    report.checks["lower_margin"] = chk.lower_margin
    report.checks["upper_margin"] = chk.upper_margin
    report.checks["lower_valid"] = chk.lower_valid
    report.checks["upper_valid"] = chk.upper_valid
    report.checks["conclusion_hermitian_residual"] = herm_res
    hermitian_ok = herm_res <= tols.herm_tol or not require_hermitian
    report.claim_valid = bool(chk.valid and hermitian_ok)
    if not chk.valid:
        report.witness = chk.witness
        report.witness_margin = chk.witness_margin
        report.witness_note = (
            "violates the claimed lower bound: A ||K^* x||^2 > Re sum <x,x_i><y_i,x>"
            if not chk.lower_valid
            else "violates the claimed upper bound: Re sum <x,x_i><y_i,x> > B ||x||^2"
        )
    elif not hermitian_ok:
        w = skew_witness(p)
        report.witness = w
        report.witness_margin = abs(pair_form(p, w).imag)
        report.witness_note = "mixed sum is not real at x: |Im sum <x,x_i><y_i,x>| > 0"


def _unit_samples(rng: np.random.Generator, q: np.ndarray, count: int) -> np.ndarray:
    """``count`` random unit vectors in the column span of ``q`` (rows of result)."""
    if q.shape[1] == 0 or count <= 0:
        return np.zeros((0, q.shape[0]), dtype=np.complex128)
    c = complex_normal(rng, (count, q.shape[1]))
    v = c @ q.T
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _sample_rng(seed, tag: int) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return check_random_state([int(seed), tag])


def _kx2(k: np.ndarray, x: np.ndarray) -> float:
    return float(np.linalg.norm(k.conj().T @ x) ** 2)


def _check_pair_k(p: BiframePair, k) -> np.ndarray:
    k = check_matrix(k, "k", square=True)
    if k.shape[0] != p.dim:
        raise DimensionMismatchError(f"k has size {k.shape[0]} but pair dim is {p.dim}")
    return k


def _check_op(p: BiframePair, t, name: str = "t") -> np.ndarray:
    t = check_matrix(t, name, square=True)
    if t.shape[0] != p.dim:
        raise DimensionMismatchError(f"{name} has size {t.shape[0]} but pair dim is {p.dim}")
    return t


# --------------------------------------------------------------------- swap

def audit_swap(p: BiframePair, k, tols: Tolerances = DEFAULT) -> AuditReport:
    """``(X, Y)`` is a K-biframe iff ``(Y, X)`` is, with the same bounds."""
    k = _check_pair_k(p, k)
    c_xy = certify_k_biframe(p, k, tols)
    c_yx = certify_k_biframe(p.swapped(), k, tols)
    same_flag = c_xy.is_k_biframe == c_yx.is_k_biframe
    da = 0.0 if c_xy.a_opt == c_yx.a_opt else abs(c_xy.a_opt - c_yx.a_opt)
    db = abs(c_xy.b_opt - c_yx.b_opt)
    valid = same_flag and da <= 2 * tols.bis_tol and db <= 2 * tols.bis_tol
    rep = AuditReport(
        "swap", True, {}, c_xy.a_opt, c_xy.b_opt, bool(valid), c_yx,
        checks={"a_opt_xy": c_xy.a_opt, "a_opt_yx": c_yx.a_opt,
                "b_opt_xy": c_xy.b_opt, "b_opt_yx": c_yx.b_opt,
                "is_k_biframe_xy": c_xy.is_k_biframe,
                "is_k_biframe_yx": c_yx.is_k_biframe},
    )
    if not valid:
        rep.witness = c_xy.witness_lower if c_xy.witness_lower is not None else c_yx.witness_lower
        rep.witness_note = "certificates of (X,Y) and (Y,X) disagree"
    return rep


# ---------------------------------------------------------------------- sum

def audit_sum(x: FrameSequence, y: FrameSequence, z: FrameSequence, k,
              tols: Tolerances = DEFAULT) -> AuditReport:
    """``(Z + X, Y + Z)`` with bounds summed from ``(X,Y)``, ``(Z,Y)``, ``(X,Z)``, ``Z``."""
    p_xy, p_zy, p_xz = BiframePair(x, y), BiframePair(z, y), BiframePair(x, z)
    k = _check_pair_k(p_xy, k)
    c_xy = certify_k_biframe(p_xy, k, tols)
    c_zy = certify_k_biframe(p_zy, k, tols)
    c_xz = certify_k_biframe(p_xz, k, tols)
    c_z = certify_k_frame(z, k, tols)
    certs = {"xy": c_xy, "zy": c_zy, "xz": c_xz, "z_frame": c_z}
    hyps = {f"{name}_is_k": c.is_k_biframe for name, c in certs.items()}
    hyps.update({f"{name}_hermitian_residual": c.hermitian_residual for name, c in certs.items()})
    hyp_ok = all(c.is_k_biframe for c in certs.values())

    summed = BiframePair(z + x, y + z)
    s_sum = biframe_operator(summed)
    expansion = (biframe_operator(p_zy) + biframe_operator(BiframePair(z, z))
                 + biframe_operator(p_xy) + biframe_operator(p_xz))
    exp_res = linalg.spectral_norm(s_sum - expansion)
    exp_ok = exp_res <= tols.ktol * max(1.0, linalg.spectral_norm(s_sum))

    claimed_a = sum(c.a_opt for c in certs.values())
    claimed_b = sum(c.b_opt for c in certs.values())
    cert_sum = certify_k_biframe(summed, k, tols)
    rep = AuditReport("sum", hyp_ok, hyps, claimed_a, claimed_b, False, cert_sum)
    _bounds_claim(rep, summed, k, tols)
    rep.checks["expansion_residual"] = exp_res
    rep.checks["a_opt"] = cert_sum.a_opt
    rep.checks["b_opt"] = cert_sum.b_opt
    rep.claim_valid = rep.claim_valid and exp_ok
    if not exp_ok and rep.witness is None:
        rep.witness_note = "operator expansion of the summed pair does not hold"
    return rep


# ------------------------------------------------------- linear combination

def audit_linear_combination(p: BiframePair, terms: Sequence[tuple[complex, Any]],
                             tols: Tolerances = DEFAULT) -> AuditReport:
    """``p`` against ``M = sum_j alpha_j K_j`` with lower bound
    ``(sum_j |alpha_j|^2 / A_j)^-1`` and upper bound ``min_j B_j``.

    The report also carries ``cauchy_schwarz_a = (sum_j |alpha_j| / sqrt(A_j))^-2``,
    which is always a valid lower bound; comparing the two shows how far
    the stated formula is from a provable one.
    """
    if not terms:
        raise ValueError("at least one (alpha, K_j) term is required")
    alphas = [complex(a) for a, _ in terms]
    ks = [_check_pair_k(p, kj) for _, kj in terms]
    certs = [certify_k_biframe(p, kj, tols) for kj in ks]
    hyps = {f"k{j + 1}_is_k": c.is_k_biframe for j, c in enumerate(certs)}
    hyp_ok = all(c.is_k_biframe for c in certs)

    inv = 0.0
    cs = 0.0
    for a, c in zip(alphas, certs):
        if abs(a) == 0:
            continue
        inv += abs(a) ** 2 * _recip(c.a_opt)
        cs += abs(a) * _recip(math.sqrt(c.a_opt)) if not math.isinf(c.a_opt) else 0.0
    claimed_a = _recip(inv)
    cs_a = _recip(cs * cs) if cs != math.inf else 0.0
    claimed_b = min(c.b_opt for c in certs)
    m = sum(a * kj for a, kj in zip(alphas, ks))

    rep = AuditReport("linear_combination", hyp_ok, hyps, claimed_a, claimed_b, False,
                      certify_k_biframe(p, m, tols))
    rep.checks["a_j"] = [c.a_opt for c in certs]
    rep.checks["b_j"] = [c.b_opt for c in certs]
    _bounds_claim(rep, p, m, tols)
    cs_chk = check_claimed_bounds(p, m, cs_a, None, tols)
    rep.checks["cauchy_schwarz_a"] = cs_a
    rep.checks["cauchy_schwarz_valid"] = cs_chk.lower_valid
    return rep


# ------------------------------------------------------------------ product

def audit_product(p: BiframePair, factors: Sequence[Any],
                  tols: Tolerances = DEFAULT) -> AuditReport:
    """``p`` against ``M = K_1 K_2 ... K_n`` with bounds
    ``A_1 / ||K_n^* ... K_2^*||^2`` and ``B_1``."""
    if not factors:
        raise ValueError("at least one factor is required")
    ks = [_check_pair_k(p, kj) for kj in factors]
    c1 = certify_k_biframe(p, ks[0], tols)
    tail = reduce(np.matmul, ks[1:], np.eye(p.dim, dtype=np.complex128))
    tail_norm = linalg.spectral_norm(tail.conj().T)
    m = ks[0] @ tail
    claimed_a = math.inf if math.isinf(c1.a_opt) else _div(c1.a_opt, tail_norm ** 2)
    rep = AuditReport("product", c1.is_k_biframe, {"k1_is_k": c1.is_k_biframe},
                      claimed_a, c1.b_opt, False, certify_k_biframe(p, m, tols))
    rep.checks["tail_norm"] = tail_norm
    if math.isinf(claimed_a):
        rep.notes.append("Unbounded: the product annihilates the relevant range")
    _bounds_claim(rep, p, m, tols)
    return rep


# ----------------------------------------------------------- norm promotion

def audit_norm_promotion(p: BiframePair, k, tols: Tolerances = DEFAULT) -> AuditReport:
    """A biframe with bounds ``A, B`` is a K-biframe with ``A / ||K||^2, B`` when ``||K|| >= 1``."""
    k = _check_pair_k(p, k)
    c_i = certify_biframe(p, tols)
    k_norm = linalg.spectral_norm(k)
    norm_ok = k_norm >= 1.0 - tols.ktol
    hyps = {"k_norm": k_norm, "k_norm_at_least_one": norm_ok,
            "is_biframe": c_i.is_k_biframe}
    claimed_a = _div(c_i.a_opt, k_norm ** 2)
    rep = AuditReport("norm_promotion", bool(norm_ok and c_i.is_k_biframe), hyps,
                      claimed_a, c_i.b_opt, False, certify_k_biframe(p, k, tols))
    _bounds_claim(rep, p, k, tols)
    return rep


# ------------------------------------------------------ operator inequality

def audit_operator_inequality(p: BiframePair, k, tols: Tolerances = DEFAULT,
                              seed=0, n_samples: int = 200) -> AuditReport:
    """Cross-check the inequality definition against ``H >= A K K^*``.

    The operator side is the certificate (bisection on PSD tests). The
    definition side evaluates the mixed sum directly: on random unit
    vectors when the certificate is positive, or on the certificate's
    witness (resp. a direction where the sum is not real) when it is not.
    ``claim_valid`` means the two sides agree.
    """
    k = _check_pair_k(p, k)
    cert = certify_k_biframe(p, k, tols)
    s = biframe_operator(p)
    h = hermitian_part(s)
    g = k @ k.conj().T
    h_norm = linalg.spectral_norm(h)
    rng = _sample_rng(seed, 5)

    op_holds = cert.is_k_biframe
    op_consistent = True
    if op_holds and not math.isinf(cert.a_opt):
        below = max(cert.a_opt - 2 * tols.bis_tol, 0.0)
        op_consistent = linalg.min_eig_hermitian(h - below * g, np.inf) >= -tols.ktol * h_norm

    witness = None
    margin = None
    if cert.reason == "non_hermitian":
        w = skew_witness(p)
        im = abs(pair_form(p, w).imag)
        def_holds = im <= tols.herm_tol * max(1.0, linalg.spectral_norm(s))
        witness, margin = w, im
    elif op_holds:
        a = 0.0 if math.isinf(cert.a_opt) else cert.a_opt
        worst = -math.inf
        def_holds = True
        for v in _unit_samples(rng, np.eye(p.dim), n_samples):
            phi = pair_form(p, v)
            lo_gap = a * _kx2(k, v) - phi.real
            hi_gap = phi.real - cert.b_opt
            gap = max(lo_gap, hi_gap, abs(phi.imag))
            if gap > worst:
                worst = gap
                if gap > SAMPLE_TOL:
                    witness, margin = v, gap
            if gap > SAMPLE_TOL:
                def_holds = False
    else:
        w = cert.witness_lower
        phi = pair_form(p, w).real
        margin = tols.bis_tol * _kx2(k, w) - phi
        def_holds = not margin > 0
        witness = w

    rep = AuditReport(
        "operator_inequality", True, {}, cert.a_opt, cert.b_opt,
        bool(def_holds == op_holds and op_consistent), cert,
        checks={"operator_side": op_holds, "definition_side": bool(def_holds),
                "operator_side_consistent": bool(op_consistent), "samples": n_samples},
    )
    if not def_holds:
        rep.checks["definition_witness"] = witness
        rep.checks["definition_witness_margin"] = margin
    if not rep.claim_valid:
        rep.witness, rep.witness_margin = witness, margin
        rep.witness_note = "definition and operator sides disagree at x"
    return rep


# ------------------------------------------------------- sqrt factorization

def audit_sqrt_factorization(p: BiframePair, k, tols: Tolerances = DEFAULT) -> AuditReport:
    """K-biframe iff ``K = H^{1/2} U`` for some ``U`` (``U = (H^{1/2})^+ K``)."""
    k = _check_pair_k(p, k)
    s = biframe_operator(p)
    herm_res = linalg.hermitian_residual(s) / max(1.0, linalg.spectral_norm(s))
    hyp_ok = herm_res <= tols.herm_tol
    cert = certify_k_biframe(p, k, tols)
    h = hermitian_part(s)
    try:
        root = linalg.psd_sqrt(h, tols.ktol)
    except Exception:  # NotPSDError: no square root, hence no factorization
        root = None
    if root is None:
        factor_ok, residual, u = False, math.inf, None
    else:
        u = linalg.pseudo_inverse(root, tols.rank_tol(root.shape)) @ k
        residual = linalg.spectral_norm(root @ u - k)
        factor_ok = residual <= tols.herm_tol * max(1.0, linalg.spectral_norm(k))
    rep = AuditReport(
        "sqrt_factorization", bool(hyp_ok), {"hermitian_residual": herm_res},
        cert.a_opt, cert.b_opt, bool(cert.is_k_biframe == factor_ok), cert,
        checks={"factorization_exists": bool(factor_ok), "factor_residual": residual,
                "h_is_psd": root is not None,
                "u_norm": None if u is None else linalg.spectral_norm(u)},
    )
    if not rep.claim_valid:
        rep.witness = cert.witness_lower
        rep.witness_note = "certificate and factorization disagree"
    return rep


# ----------------------------------------------------------- range transfer

def audit_range_transfer(p: BiframePair, k, t, tols: Tolerances = DEFAULT) -> AuditReport:
    """``R(T) ⊆ R(K)`` makes a K-biframe a T-biframe with lower bound ``A / alpha^2``."""
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    d = douglas_check(t, k, tols)
    cert_k = certify_k_biframe(p, k, tols)
    hyps = {"range_included": d.range_included, "projector_residual": d.projector_residual,
            "k_certificate": cert_k.is_k_biframe}
    hyp_ok = d.range_included and cert_k.is_k_biframe
    cert_t = certify_k_biframe(p, t, tols)
    claimed_a = None
    if d.lambda_min is not None and d.range_included:
        claimed_a = math.inf if math.isinf(cert_k.a_opt) else _div(cert_k.a_opt, d.lambda_min ** 2)
    rep = AuditReport("range_transfer", bool(hyp_ok), hyps, claimed_a, cert_k.b_opt, True, cert_t,
                      checks={"alpha": d.lambda_min, "t_is_k_biframe": cert_t.is_k_biframe})
    if claimed_a is None:
        rep.claimed_b = None
        rep.notes.append("range inclusion fails; no bound is claimed")
        if d.witness is not None:
            rep.checks["inclusion_witness"] = d.witness
        return rep
    _bounds_claim(rep, p, t, tols)
    return rep


# ---------------------------------------------------- positive perturbation

def audit_positive_perturbation(p: BiframePair, k, t, power: int = 1,
                                tols: Tolerances = DEFAULT) -> AuditReport:
    """``(X + T^n X, Y + T^n Y)`` for positive ``T``.

    Three checks are reported separately: the operator identity
    ``S_new = (I + T^n) S (I + T^n)^*``, the intermediate inequality
    ``S_new >= S`` (``intermediate_valid``) and the conclusion that the new
    pair is a K-biframe (``claim_valid``). The claimed lower bound is the
    original optimal ``A``.
    """
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    if int(power) != power or power < 1:
        raise ValueError(f"power must be a positive integer, got {power!r}")
    t_norm = linalg.spectral_norm(t)
    t_herm = linalg.hermitian_residual(t) <= tols.herm_tol * max(1.0, t_norm)
    t_psd = t_herm and linalg.min_eig_hermitian(hermitian_part(t), np.inf) >= -tols.ktol * t_norm
    cert = certify_k_biframe(p, k, tols)
    hyps = {"t_hermitian": bool(t_herm), "t_psd": bool(t_psd), "k_certificate": cert.is_k_biframe}
    hyp_ok = bool(t_psd and cert.is_k_biframe)

    tn = np.linalg.matrix_power(t, int(power))
    i_tn = np.eye(p.dim) + tn
    new = BiframePair(p.x + apply_operator_to_pair(tn, p).x, p.y + apply_operator_to_pair(tn, p).y)
    s = biframe_operator(p)
    s_new = biframe_operator(new)
    ident_res = linalg.spectral_norm(s_new - i_tn @ s @ i_tn.conj().T)
    ident_ok = ident_res <= tols.ktol * max(1.0, linalg.spectral_norm(s_new))
    diff = hermitian_part(s_new - s)
    w, v = linalg.hermitian_eigen(diff, np.inf)
    inter_margin = float(w[0]) if w.size else 0.0
    inter_ok = inter_margin >= -tols.ktol * max(1.0, linalg.spectral_norm(s_new))

    cert_new = certify_k_biframe(new, k, tols)
    claimed_a = cert.a_opt
    rep = AuditReport("positive_perturbation", hyp_ok, hyps, claimed_a, None,
                      cert_new.is_k_biframe, cert_new)
    rep.checks.update({
        "power": int(power),
        "identity_residual": ident_res,
        "identity_valid": bool(ident_ok),
        "intermediate_valid": bool(inter_ok),
        "intermediate_margin": inter_margin,
        "a_opt_new": cert_new.a_opt,
        "b_opt_new": cert_new.b_opt,
    })
    if not inter_ok:
        rep.checks["intermediate_witness"] = v[:, 0]
    if not cert_new.is_k_biframe:
        rep.witness, rep.witness_margin, rep.witness_note = _conclusion_witness(
            new, cert_new, k, claimed_a, tols)
    return rep


def _conclusion_witness(p: BiframePair, cert: KBiframeCertificate, k: np.ndarray,
                        a_claim: float, tols: Tolerances):
    """Witness that ``p`` is not a K-biframe, matched to the certificate's reason."""
    if cert.reason == "non_hermitian":
        w = skew_witness(p)
        return w, abs(pair_form(p, w).imag), "mixed sum is not real at x"
    h = hermitian_part(biframe_operator(p))
    if cert.reason == "not_psd":
        _, v = linalg.hermitian_eigen(h, np.inf)
        w = v[:, 0]
        return w, -pair_form(p, w).real, "mixed sum is negative at x"
    a_req = a_claim if 0 < a_claim < math.inf else tols.bis_tol
    w = lower_witness(h, k @ k.conj().T, k, a_req, tols)
    return (w, a_req * _kx2(k, w) - pair_form(p, w).real,
            "violates A ||K^* x||^2 <= Re sum <x,x_i><y_i,x> with the original optimal A")


# --------------------------------------------------- invertibility on R(K)

def audit_invertibility_on_range(p: BiframePair, k, tols: Tolerances = DEFAULT,
                                 seed=0, n_samples: int = 100) -> AuditReport:
    """On ``R(K)``: ``Re<Sx,x> >= kappa ||x||^2`` and ``||Sx|| >= kappa ||x||``
    with ``kappa = A ||K^+||^-2``."""
    k = _check_pair_k(p, k)
    cert = certify_k_biframe(p, k, tols)
    s = biframe_operator(p)
    h = hermitian_part(s)
    rtol = tols.rank_tol(k.shape)
    k_plus_norm = linalg.spectral_norm(linalg.pseudo_inverse(k, rtol))
    q = linalg.range_basis(k, rtol)
    rep = AuditReport("invertibility_on_range", cert.is_k_biframe,
                      {"k_certificate": cert.is_k_biframe}, None, cert.b_opt, True, cert)
    if q.shape[1] == 0 or math.isinf(cert.a_opt):
        rep.notes.append("R(K) = {0}; the statement is vacuous")
        return rep
    kappa = cert.a_opt / k_plus_norm ** 2
    rep.claimed_a = kappa
    rng = _sample_rng(seed, 10)
    worst, witness, wmargin = -math.inf, None, None
    for x in _unit_samples(rng, q, n_samples):
        re = pair_form(p, x).real
        sx = float(np.linalg.norm(s @ x))
        gap = max(kappa - re, kappa - sx)
        if gap > worst:
            worst = gap
            if gap > SAMPLE_TOL:
                witness, wmargin = x, gap
    _, sigma = restrict_to_range(s, k, tols)
    comp_min = linalg.min_eig_hermitian(q.conj().T @ h @ q, np.inf)
    rep.checks.update({
        "kappa": kappa, "k_plus_norm": k_plus_norm, "samples": n_samples,
        "worst_sample_gap": worst, "sigma_min_on_range": sigma,
        "compressed_min_eig": comp_min,
    })
    ok = (worst <= SAMPLE_TOL and sigma >= kappa - SAMPLE_TOL
          and comp_min >= kappa - SAMPLE_TOL)
    rep.claim_valid = bool(ok)
    if not ok:
        if witness is None:
            cw, cv = linalg.hermitian_eigen(q.conj().T @ h @ q, np.inf)
            witness = q @ cv[:, 0]
            wmargin = kappa - pair_form(p, witness).real
        rep.witness, rep.witness_margin = witness, wmargin
        rep.witness_note = "unit x in R(K) with Re<Sx,x> or ||Sx|| below kappa"
    return rep


# ------------------------------------------------ implication-style audits

def _null_witness_adj(t: np.ndarray, tols: Tolerances) -> np.ndarray | None:
    nb = linalg.null_basis(t.conj().T, tols.rank_tol(t.shape))
    return nb[:, 0] if nb.shape[1] else None


def _surjectivity_violation(p, k, t, tols):
    """Return (violated, transformed certificate, witness)."""
    new = apply_operator_to_pair(t, p)
    c = certify_k_biframe(new, k, tols)
    surj = is_surjective(t, tols)
    if c.is_k_biframe and not surj:
        return True, c, _null_witness_adj(t, tols)
    return False, c, None


def _falsification_ops(n: int, seed, trials: int, tag: int):
    for i in range(trials):
        rng = seed if isinstance(seed, np.random.Generator) else check_random_state([int(seed), tag, i])
        rank = int(rng.integers(0, n + 1))
        yield i, rank, random_operator(n, rank, rng)


def audit_surjectivity_necessity(p: BiframePair, k, t, tols: Tolerances = DEFAULT,
                                 seed=0, trials: int = 0) -> AuditReport:
    """If ``K`` is surjective and ``(TX, TY)`` is a K-biframe then ``T`` is surjective.

    Checked on ``t`` itself and on ``trials`` random operators of random
    rank applied to the same pair.
    """
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    k_surj = is_surjective(k, tols)
    cert = certify_k_biframe(p, k, tols)
    hyps = {"k_surjective": k_surj, "k_certificate": cert.is_k_biframe}
    violated, c_t, wit = _surjectivity_violation(p, k, t, tols)
    rep = AuditReport("surjectivity_necessity", bool(k_surj and cert.is_k_biframe), hyps,
                      None, None, not violated, c_t)
    rep.checks.update({"t_rank": linalg.numerical_rank(t, tols.rank_tol(t.shape)),
                       "transformed_is_k_biframe": c_t.is_k_biframe})
    if violated:
        rep.witness, rep.witness_note = wit, "T^* x = 0 yet (TX, TY) certified"
    found = 0
    for i, rank, ti in _falsification_ops(p.dim, seed, trials, 11):
        bad, _, w = _surjectivity_violation(p, k, ti, tols)
        if bad:
            found += 1
            if rep.witness is None:
                rep.witness = w
                rep.witness_note = f"falsification trial {i} (rank {rank}): T^* x = 0 yet certified"
    rep.checks["trials"] = trials
    rep.checks["violations"] = found
    rep.claim_valid = bool(rep.claim_valid and found == 0)
    rep.notes.append("dense range of K is tested as surjectivity (finite dimension)")
    if trials:
        rep.notes.append(f"no violation found in {trials} trials" if found == 0
                         else f"{found} violations in {trials} trials")
    return rep


def _two_sided_violation(p, k, t, tols):
    c1 = certify_k_biframe(apply_operator_to_pair(t, p), k, tols)
    c2 = certify_k_biframe(apply_operator_to_pair(t.conj().T, p), k, tols)
    inv = is_surjective(t, tols)
    if c1.is_k_biframe and c2.is_k_biframe and not inv:
        w = _null_witness_adj(t, tols)
        return True, c1, c2, w
    return False, c1, c2, None


def audit_two_sided_invertibility(p: BiframePair, k, t, tols: Tolerances = DEFAULT,
                                  seed=0, trials: int = 0) -> AuditReport:
    """If ``(TX, TY)`` and ``(T^*X, T^*Y)`` are both K-biframes then ``T`` is invertible."""
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    k_surj = is_surjective(k, tols)
    cert = certify_k_biframe(p, k, tols)
    hyps = {"k_surjective": k_surj, "k_certificate": cert.is_k_biframe}
    violated, c1, c2, wit = _two_sided_violation(p, k, t, tols)
    rep = AuditReport("two_sided_invertibility", bool(k_surj and cert.is_k_biframe), hyps,
                      None, None, not violated, c1)
    rep.checks.update({"t_rank": linalg.numerical_rank(t, tols.rank_tol(t.shape)),
                       "t_image_is_k_biframe": c1.is_k_biframe,
                       "t_adjoint_image_is_k_biframe": c2.is_k_biframe})
    if violated:
        rep.witness, rep.witness_note = wit, "T singular yet both transformed pairs certified"
    found = 0
    for i, rank, ti in _falsification_ops(p.dim, seed, trials, 12):
        bad, _, _, w = _two_sided_violation(p, k, ti, tols)
        if bad:
            found += 1
            if rep.witness is None:
                rep.witness = w
                rep.witness_note = f"falsification trial {i} (rank {rank})"
    rep.checks["trials"] = trials
    rep.checks["violations"] = found
    rep.claim_valid = bool(rep.claim_valid and found == 0)
    rep.notes.append("dense range of K is tested as surjectivity (finite dimension)")
    if trials:
        rep.notes.append(f"no violation found in {trials} trials" if found == 0
                         else f"{found} violations in {trials} trials")
    return rep


# -------------------------------------------------------- commuting transfer

def audit_commuting_transfer(p: BiframePair, k, t, tols: Tolerances = DEFAULT,
                             seed=0, n_samples: int = 100) -> AuditReport:
    """For ``TK = KT``: ``(TX, TY)`` is a K-biframe for ``R(T)`` with bounds
    ``A ||(T^+)^*||^-2`` and ``B ||T||^2``.

    Checked on random unit vectors of ``R(T)`` and, exactly, on the
    compression of the inequality to ``R(T)``.
    """
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    comm = commutation_residual(t, k)
    t_norm = linalg.spectral_norm(t)
    comm_ok = comm <= tols.herm_tol * max(1.0, t_norm * linalg.spectral_norm(k))
    cert = certify_k_biframe(p, k, tols)
    hyps = {"commutation_residual": comm, "commutes": bool(comm_ok),
            "k_certificate": cert.is_k_biframe}
    rtol = tols.rank_tol(t.shape)
    tp_norm = linalg.spectral_norm(linalg.pseudo_inverse(t, rtol).conj().T)
    claimed_a = math.inf if math.isinf(cert.a_opt) else cert.a_opt * _recip(tp_norm) ** 2 \
        if tp_norm > 0 else math.inf
    claimed_b = cert.b_opt * t_norm ** 2
    new = apply_operator_to_pair(t, p)
    cert_new = certify_k_biframe(new, k, tols)
    rep = AuditReport("commuting_transfer", bool(comm_ok and cert.is_k_biframe), hyps,
                      claimed_a, claimed_b, True, cert_new)
    q = linalg.range_basis(t, rtol)
    if q.shape[1] == 0:
        rep.notes.append("R(T) = {0}; the statement is vacuous")
        return rep
    h_new = hermitian_part(biframe_operator(new))
    g = k @ k.conj().T
    a_eval = 0.0 if math.isinf(claimed_a) else claimed_a
    rng = _sample_rng(seed, 13)
    worst, witness, wmargin, kind = -math.inf, None, None, None
    for x in _unit_samples(rng, q, n_samples):
        phi = pair_form(new, x).real
        lo_gap = a_eval * _kx2(k, x) - phi
        hi_gap = phi - claimed_b
        gap = max(lo_gap, hi_gap)
        if gap > worst:
            worst = gap
            if gap > SAMPLE_TOL:
                witness, wmargin = x, gap
                kind = "lower" if lo_gap >= hi_gap else "upper"
    scale = max(1.0, linalg.spectral_norm(h_new))
    lower_c = linalg.min_eig_hermitian(q.conj().T @ (h_new - a_eval * g) @ q, np.inf)
    upper_c = linalg.min_eig_hermitian(q.conj().T @ (claimed_b * np.eye(p.dim) - h_new) @ q,
                                       np.inf)
    if math.isinf(claimed_a) and linalg.spectral_norm(q.conj().T @ g @ q) > tols.ktol * scale:
        lower_c = -math.inf
    rep.checks.update({"samples": n_samples, "worst_sample_gap": worst,
                       "lower_margin_on_range": lower_c, "upper_margin_on_range": upper_c,
                       "t_plus_adjoint_norm": tp_norm})
    floor = -tols.herm_tol * scale
    ok = worst <= SAMPLE_TOL and lower_c >= floor and upper_c >= floor
    rep.claim_valid = bool(ok)
    if not ok:
        if witness is None:
            m = h_new - a_eval * g if lower_c < floor else claimed_b * np.eye(p.dim) - h_new
            _, cv = linalg.hermitian_eigen(q.conj().T @ m @ q, np.inf)
            witness = q @ cv[:, 0]
            kind = "lower" if lower_c < floor else "upper"
            phi = pair_form(new, witness).real
            wmargin = a_eval * _kx2(k, witness) - phi if kind == "lower" else phi - claimed_b
        rep.witness, rep.witness_margin = witness, wmargin
        rep.witness_note = f"x in R(T) violating the claimed {kind} bound for (TX, TY)"
    return rep


# ------------------------------------------------------ co-isometry transfer

def audit_coisometry_transfer(p: BiframePair, k, t, tols: Tolerances = DEFAULT) -> AuditReport:
    """Co-isometry ``T`` with ``TK = KT`` maps a K-biframe to one with bounds ``A, B ||T||^2``."""
    k = _check_pair_k(p, k)
    t = _check_op(p, t)
    coiso = is_coisometry(t, tols.herm_tol)
    comm = commutation_residual(t, k)
    comm_ok = comm <= tols.herm_tol * max(1.0, linalg.spectral_norm(t) * linalg.spectral_norm(k))
    cert = certify_k_biframe(p, k, tols)
    hyps = {"coisometry": bool(coiso), "commutation_residual": comm, "commutes": bool(comm_ok),
            "k_certificate": cert.is_k_biframe, "k_surjective": is_surjective(k, tols)}
    new = apply_operator_to_pair(t, p)
    rep = AuditReport("coisometry_transfer", bool(coiso and comm_ok and cert.is_k_biframe), hyps,
                      cert.a_opt, cert.b_opt * linalg.spectral_norm(t) ** 2, False,
                      certify_k_biframe(new, k, tols))
    _bounds_claim(rep, new, k, tols)
    return rep


# ---------------------------------------------------------------- dispatch

def run_audit(statement_id: str, instance, tols: Tolerances = DEFAULT, seed=0,
              trials: int | None = None) -> AuditReport:
    """Run the auditor ``statement_id`` on an :class:`~kbiframe.instances.Instance`.

    ``trials`` sets the sample count for sampling auditors and the
    falsification budget for implication auditors.
    """
    from .errors import SchemaError

    if statement_id not in STATEMENTS:
        raise ValueError(f"unknown statement {statement_id!r}; expected one of {STATEMENTS}")
    p, k, ex = instance.pair, instance.k, instance.extras

    def need(name):
        if ex.get(name) is None:
            raise SchemaError(name, f"statement {statement_id!r} requires field {name!r}")
        return ex[name]

    if statement_id == "swap":
        return audit_swap(p, k, tols)
    if statement_id == "sum":
        z = need("z")
        return audit_sum(p.x, p.y, z, k, tols)
    if statement_id == "linear_combination":
        factors = need("factors")
        alphas = ex.get("alphas") or [1.0] * len(factors)
        if len(alphas) != len(factors):
            raise SchemaError("alphas", "must have the same length as factors")
        return audit_linear_combination(p, list(zip(alphas, factors)), tols)
    if statement_id == "product":
        factors = ex.get("factors") or [k, need("t")]
        return audit_product(p, factors, tols)
    if statement_id == "norm_promotion":
        return audit_norm_promotion(p, k, tols)
    if statement_id == "operator_inequality":
        return audit_operator_inequality(p, k, tols, seed, trials or 200)
    if statement_id == "sqrt_factorization":
        return audit_sqrt_factorization(p, k, tols)
    if statement_id == "range_transfer":
        return audit_range_transfer(p, k, need("t"), tols)
    if statement_id == "positive_perturbation":
        return audit_positive_perturbation(p, k, need("t"), int(ex.get("power") or 1), tols)
    if statement_id == "invertibility_on_range":
        return audit_invertibility_on_range(p, k, tols, seed, trials or 100)
    if statement_id == "surjectivity_necessity":
        return audit_surjectivity_necessity(p, k, need("t"), tols, seed, trials or 0)
    if statement_id == "commuting_transfer":
        return audit_commuting_transfer(p, k, need("t"), tols, seed, trials or 100)
    if statement_id == "two_sided_invertibility":
        return audit_two_sided_invertibility(p, k, need("t"), tols, seed, trials or 0)
    return audit_coisometry_transfer(p, k, need("t"), tols)
