"""Seeded property batteries.

Each battery draws trial ``i`` from its own generator seeded with
``[seed, tag, i]``, so trials are independent of one another and of the
order batteries run in. A trial is *applicable* when the statement's
hypotheses hold on the drawn instance; only applicable trials count
towards pass/fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .audit import (
    audit_coisometry_transfer,
    audit_commuting_transfer,
    audit_invertibility_on_range,
    audit_linear_combination,
    audit_norm_promotion,
    audit_operator_inequality,
    audit_product,
    audit_range_transfer,
    audit_sqrt_factorization,
    audit_sum,
    audit_surjectivity_necessity,
    audit_swap,
    audit_two_sided_invertibility,
)
from .certify import BoundProblem, certify_k_biframe
from .frames import BiframePair, FrameSequence, biframe_operator
from .instances import (
    check_random_state,
    complex_normal,
    random_biframe,
    random_commuting_pair,
    random_operator,
    uniform,
)
from .operators import douglas_check
from .tolerances import DEFAULT, Tolerances

MAX_N = 6


@dataclass
class TrialOutcome:
    applicable: bool
    passed: bool
    detail: str = ""


@dataclass
class BatteryResult:
    name: str
    trials: int
    applicable: int = 0
    passed: int = 0
    failures: list[int] = field(default_factory=list)
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"name": self.name, "trials": self.trials, "applicable": self.applicable,
                "passed": self.passed, "failed": len(self.failures),
                "first_failures": self.failures[:5], "ok": self.ok}


def _rng(seed, tag: int, i: int) -> np.random.Generator:
    return check_random_state([int(seed), tag, i])


def _dim(rng) -> int:
    return int(rng.integers(1, MAX_N + 1))


def _spanning_pair(rng, n: int) -> BiframePair:
    m = n + int(rng.integers(0, 4))
    fam = "rescale" if rng.random() < 0.5 else "controlled"
    return random_biframe(n, m, fam, rng).pair


def _rand_op(rng, n: int, full: bool = False) -> np.ndarray:
    rank = n if full else int(rng.integers(0, n + 1))
    return random_operator(n, rank, rng)


# ------------------------------------------------------------------ trials

def _trial_douglas(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    t2 = _rand_op(rng, n)
    if rng.random() < 0.5:
        t1 = t2 @ _rand_op(rng, n)
    else:
        t1 = _rand_op(rng, n)
    d = douglas_check(t1, t2, tols)
    ok = d.consistent
    detail = "" if ok else f"criteria disagree: {d.range_included}/{d.majorization_holds}/{d.factorization_holds}"
    if ok and d.range_included:
        lam = d.lambda_min
        marg = linalg.min_eig_hermitian(lam * lam * (t2 @ t2.conj().T) - t1 @ t1.conj().T, np.inf)
        ok = d.factor_residual <= 1e-9 and marg >= -1e-9
        if not ok:
            detail = f"factor residual {d.factor_residual:.3e}, majorization margin {marg:.3e}"
    return TrialOutcome(True, ok, detail)


def _report_outcome(rep) -> TrialOutcome:
    detail = ""
    if rep.hypotheses_ok and not rep.claim_valid:
        detail = (f"claimed ({rep.claimed_a}, {rep.claimed_b}); "
                  f"margins {rep.checks.get('lower_margin')}, {rep.checks.get('upper_margin')}")
    return TrialOutcome(rep.hypotheses_ok, rep.claim_valid, detail)


def _trial_linear_combination(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    n_terms = int(rng.integers(2, 4))
    terms = [(complex(complex_normal(rng, ())), _rand_op(rng, n)) for _ in range(n_terms)]
    return _report_outcome(audit_linear_combination(p, terms, tols))


def _trial_product(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    factors = [_rand_op(rng, n) for _ in range(int(rng.integers(2, 4)))]
    return _report_outcome(audit_product(p, factors, tols))


def _trial_norm_promotion(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    k = _rand_op(rng, n)
    kn = linalg.spectral_norm(k)
    k = 1.5 * k / kn if kn > 0 else 1.5 * np.eye(n)
    return _report_outcome(audit_norm_promotion(p, k, tols))


def _trial_range_transfer(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    k = _rand_op(rng, n)
    contraction = _rand_op(rng, n) / 2.0
    return _report_outcome(audit_range_transfer(p, k, k @ contraction, tols))


def _trial_commuting_transfer(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    t_rank = int(rng.integers(0, n + 1))
    t, k = random_commuting_pair(n, rng, t_rank=t_rank)
    return _report_outcome(audit_commuting_transfer(p, k, t, tols, seed=rng))


def _trial_coisometry_transfer(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    t, k = random_commuting_pair(n, rng, unitary_t=True)
    return _report_outcome(audit_coisometry_transfer(p, k, t, tols))


def _trial_sum(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    m = n + int(rng.integers(0, 4))
    xv = complex_normal(rng, (m, n))
    c = uniform(rng, 0.5, 2.0, m)
    d = uniform(rng, 0.5, 2.0, m)
    x = FrameSequence(xv)
    y = FrameSequence(xv * c[:, None])
    z = FrameSequence(xv * d[:, None])
    return _report_outcome(audit_sum(x, y, z, _rand_op(rng, n), tols))


def _trial_swap(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    m = n + int(rng.integers(0, 4))
    fam = ("rescale", "controlled", "skew")[int(rng.integers(0, 3))]
    p = random_biframe(n, m, fam, rng).pair
    return _report_outcome(audit_swap(p, _rand_op(rng, n), tols))


def _trial_bisection(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    k = _rand_op(rng, n)
    cert = certify_k_biframe(p, k, tols)
    if not cert.is_k_biframe or math.isinf(cert.a_opt):
        return TrialOutcome(False, True)
    bp = BoundProblem.from_operator(biframe_operator(p), k)
    h_norm = linalg.spectral_norm(bp.h)

    def psd(a):
        return linalg.is_psd(bp.h - a * bp.g, tols.ktol, h_norm)

    below = psd(cert.a_opt - 2e-9)
    above = psd(cert.a_opt + 2e-9)
    return TrialOutcome(True, below and not above,
                        "" if below and not above else f"below={below} above={above}")


def _trial_invertibility(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    return _report_outcome(audit_invertibility_on_range(p, _rand_op(rng, n), tols, seed=rng))


def _trial_sqrt(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    r = int(rng.integers(0, n + 1))
    # pair spanning an r-dimensional subspace; certified iff R(K) lies in it
    basis = random_operator(n, n, rng)[:, :r]
    m = max(r, 1) + int(rng.integers(0, 3))
    xv = complex_normal(rng, (m, r)) @ basis.T if r else np.zeros((m, n))
    p = BiframePair(FrameSequence(xv, n), FrameSequence(xv * uniform(rng, 0.5, 2.0, m)[:, None], n))
    if rng.random() < 0.5 and r:
        k = basis @ complex_normal(rng, (r, n))
    else:
        k = _rand_op(rng, n)
    rep = audit_sqrt_factorization(p, k, tols)
    ok = rep.claim_valid
    if rep.certified.is_k_biframe:
        ok = ok and rep.checks["factor_residual"] <= 1e-8
    return TrialOutcome(True, ok, "" if ok else f"residual {rep.checks['factor_residual']}")


def _trial_surjectivity(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    rep = audit_surjectivity_necessity(p, _rand_op(rng, n, full=True), _rand_op(rng, n), tols)
    return _report_outcome(rep)


def _trial_two_sided(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    p = _spanning_pair(rng, n)
    rep = audit_two_sided_invertibility(p, _rand_op(rng, n, full=True), _rand_op(rng, n), tols)
    return _report_outcome(rep)


def _trial_operator_inequality(rng, tols) -> TrialOutcome:
    n = _dim(rng)
    m = n + int(rng.integers(0, 4))
    fam = ("rescale", "controlled", "skew")[int(rng.integers(0, 3))]
    p = random_biframe(n, m, fam, rng).pair
    return _report_outcome(audit_operator_inequality(p, _rand_op(rng, n), tols, seed=rng))


BATTERIES: dict[str, tuple[int, Callable]] = {
    "douglas_equivalence": (1, _trial_douglas),
    "linear_combination": (2, _trial_linear_combination),
    "product": (3, _trial_product),
    "norm_promotion": (4, _trial_norm_promotion),
    "range_transfer": (5, _trial_range_transfer),
    "commuting_transfer": (6, _trial_commuting_transfer),
    "coisometry_transfer": (7, _trial_coisometry_transfer),
    "sum": (8, _trial_sum),
    "swap": (9, _trial_swap),
    "bisection_soundness": (10, _trial_bisection),
    "invertibility_on_range": (11, _trial_invertibility),
    "sqrt_factorization": (12, _trial_sqrt),
    "surjectivity_necessity": (13, _trial_surjectivity),
    "two_sided_invertibility": (14, _trial_two_sided),
    "operator_inequality": (15, _trial_operator_inequality),
}


def run_battery(name: str, seed: int, trials: int, tols: Tolerances = DEFAULT) -> BatteryResult:
    tag, trial = BATTERIES[name]
    res = BatteryResult(name, trials)
    for i in range(trials):
        out = trial(_rng(seed, tag, i), tols)
        if not out.applicable:
            continue
        res.applicable += 1
        if out.passed:
            res.passed += 1
        else:
            res.failures.append(i)
            if len(res.details) < 5:
                res.details.append(f"trial {i}: {out.detail}")
    return res


def run_suite(seed: int, trials: int, tols: Tolerances = DEFAULT,
              names=None) -> list[BatteryResult]:
    """Run every battery (or ``names``) in a fixed order."""
    return [run_battery(name, seed, trials, tols) for name in (names or BATTERIES)]


def suite_summary(seed: int, trials: int, results: list[BatteryResult]) -> dict:
    return {"seed": int(seed), "trials": int(trials),
            "batteries": [r.as_dict() for r in results],
            "all_passed": all(r.ok for r in results)}


def format_table(results: list[BatteryResult]) -> str:
    lines = [f"{'battery':<26}{'trials':>7}{'applic':>8}{'passed':>8}  status"]
    for r in results:
        lines.append(f"{r.name:<26}{r.trials:>7}{r.applicable:>8}{r.passed:>8}  "
                     f"{'PASS' if r.ok else 'FAIL'}")
    return "\n".join(lines)
