import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbiframe import linalg
from kbiframe.certify import (
    UNBOUNDED,
    BoundProblem,
    certify_biframe,
    certify_frame,
    certify_k_biframe,
    certify_k_frame,
    certify_with_claims,
    check_claimed_bounds,
    optimal_lower_bound,
    optimal_upper_bound,
)
from kbiframe.errors import DimensionMismatchError, NotHermitianError
from kbiframe.frames import BiframePair, FrameSequence, basis, biframe_operator, hermitian_part, pair_form
from kbiframe.instances import gallery, random_biframe, random_operator
from kbiframe.tolerances import DEFAULT, Tolerances

from conftest import crandn

BIS = DEFAULT.bis_tol


def diag_ratio_oracle(h_diag, g_diag):
    return min(h / g for h, g in zip(h_diag, g_diag) if g > 0)


def power_iteration_max(h, iters=5000):
    shift = np.abs(h).sum()  # makes h + shift*I positive definite
    m = h + shift * np.eye(len(h))
    v = np.ones(len(h), dtype=complex)
    for _ in range(iters):
        v = m @ v
        v /= np.linalg.norm(v)
    return float(np.vdot(v, h @ v).real)


# ---------------------------------------------------------------- upper bound

def test_upper_bound_examples():
    assert optimal_upper_bound(np.diag([2.0, 2, 3, 0])) == pytest.approx(3.0, abs=1e-12)
    assert optimal_upper_bound(np.eye(3)) == pytest.approx(1.0)
    with pytest.raises(NotHermitianError):
        optimal_upper_bound([[0, 1], [0, 0]])


def test_upper_bound_against_rayleigh_quotients(rng):
    a = crandn(rng, 5, 5)
    h = (a + a.conj().T) / 2
    b = optimal_upper_bound(h)
    v = crandn(rng, 10_000, 5)
    rq = np.einsum("ij,jk,ik->i", v.conj(), h, v).real / np.einsum("ij,ij->i", v.conj(), v).real
    assert rq.max() <= b + 1e-12
    assert abs(power_iteration_max(h) - b) <= 1e-6


# ---------------------------------------------------------------- lower bound

def test_lower_bound_diagonal_example():
    bp = BoundProblem(np.diag([2.0, 2, 3, 0]), np.diag([2.0, 4, 9, 0]))
    a = optimal_lower_bound(bp)
    assert diag_ratio_oracle([2, 2, 3, 0], [2, 4, 9, 0]) == pytest.approx(1 / 3)
    assert abs(a - 1 / 3) <= BIS
    assert linalg.min_eig_hermitian(bp.h - 1.0 * bp.g) == pytest.approx(-6.0)


def test_lower_bound_trivial_cases():
    assert abs(optimal_lower_bound(BoundProblem(np.eye(3), np.eye(3))) - 1) <= BIS
    assert optimal_lower_bound(BoundProblem(np.eye(3), np.zeros((3, 3)))) is UNBOUNDED
    assert optimal_lower_bound(BoundProblem(np.diag([1.0, -1]), np.eye(2))) == 0.0


def test_lower_bound_rejects_bad_input():
    with pytest.raises(NotHermitianError):
        optimal_lower_bound(BoundProblem(np.array([[0, 1], [0, 0]]), np.eye(2)))
    with pytest.raises(ValueError):
        optimal_lower_bound(BoundProblem(np.eye(2), np.eye(2)), bis_tol=0)
    with pytest.raises(DimensionMismatchError):
        BoundProblem(np.eye(2), np.eye(3))


def test_lower_bound_zero_when_null_direction_is_seen_by_k():
    # H = v v^*, v = (2, 1); K^* does not annihilate the null vector (1, -2)
    v = np.array([2.0, 1.0])
    bp = BoundProblem(np.outer(v, v), np.diag([1.0, 0.0]))
    assert optimal_lower_bound(bp) == 0.0


# ---------------------------------------------------------------- certificates

def test_c4_example():
    inst = gallery("ex_c4")
    cert, chk = certify_with_claims(inst.pair, inst.k, inst.claimed_bounds)
    assert cert.is_k_biframe and cert.reason == "ok"
    assert abs(cert.b_opt - 3) <= 1e-9
    assert abs(cert.a_opt - 1 / 3) <= 1e-8
    assert not chk.lower_valid and chk.upper_valid
    assert chk.lower_margin == pytest.approx(-6.0)
    assert any("claimed lower bound" in n for n in cert.notes)
    # the witness violates A = 1 and re-evaluates through the mixed sum
    w = chk.witness
    assert 1.0 * np.linalg.norm(inst.k.conj().T @ w) ** 2 - pair_form(inst.pair, w).real > 10 * DEFAULT.herm_tol


@pytest.mark.parametrize("n", [4, 6, 8, 16])
def test_parseval_example(n):
    inst = gallery("parseval", n)
    cert = certify_k_biframe(inst.pair, inst.k)
    assert cert.is_parseval and cert.is_tight and cert.is_k_biframe
    assert abs(cert.a_opt - 1) <= 1e-10 and abs(cert.b_opt - 1) <= 1e-10


def test_rank_one_tight_example():
    e1 = np.array([1.0, 0.0])
    x = FrameSequence([e1])
    cert = certify_k_biframe(BiframePair(x, x), np.outer(e1, e1))
    assert cert.is_k_biframe and cert.is_tight
    assert abs(cert.a_opt - 1) <= BIS


def test_k_frame_examples():
    c = certify_k_frame(basis(3), np.eye(3))
    assert abs(c.a_opt - 1) <= BIS and c.b_opt == pytest.approx(1)
    inst = gallery("ex_c4")
    assert certify_k_frame(inst.pair.x, inst.k).is_k_biframe
    empty = certify_k_frame(FrameSequence.empty(3), np.eye(3))
    assert not empty.is_k_biframe and empty.a_opt == 0.0
    assert certify_frame(basis(2)).is_k_biframe


def test_biframe_examples():
    c = certify_biframe(gallery("ex_s_singular").pair)
    assert not c.is_k_biframe and c.a_opt == 0.0 and c.reason == "no_lower_bound"
    # witness: <H w, w> < bis_tol * ||w||^2
    h = np.diag([2.0, 1, 1, 0])
    w = c.witness_lower
    assert np.vdot(w, h @ w).real < BIS * np.linalg.norm(w) ** 2
    assert certify_biframe(BiframePair(basis(3), basis(3))).is_k_biframe
    assert certify_biframe(random_biframe(4, 6, "rescale", 3).pair).is_k_biframe


def test_non_hermitian_pair_is_rejected_without_witness():
    inst = random_biframe(4, 6, "skew", 1)
    c = certify_biframe(inst.pair)
    assert c.hermitian_residual > DEFAULT.herm_tol
    assert not c.is_k_biframe and c.reason == "non_hermitian" and c.witness_lower is None


def test_not_psd_witness():
    x = FrameSequence([[1.0, 0]])
    y = FrameSequence([[-1.0, 0]])
    c = certify_biframe(BiframePair(x, y))
    assert c.reason == "not_psd"
    w = c.witness_lower
    assert pair_form(BiframePair(x, y), w).real < 0


def test_zero_k_gives_unbounded():
    c = certify_k_biframe(BiframePair(basis(2), basis(2)), np.zeros((2, 2)))
    assert c.is_k_biframe and c.a_unbounded and math.isinf(c.a_opt)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        certify_k_biframe(BiframePair(basis(2), basis(2)), np.eye(3))


def test_herm_tol_from_environment():
    t = Tolerances.from_env({"KBIFRAME_TOL": "1e-6"})
    assert t.herm_tol == 1e-6 and t.ktol == DEFAULT.ktol
    assert Tolerances.from_env({}) == DEFAULT
    with pytest.raises(ValueError):
        Tolerances.from_env({"KBIFRAME_TOL": "abc"})


def test_claimed_upper_failure_witness():
    p = BiframePair(basis(2), FrameSequence([[2.0, 0], [0, 1]]))
    chk = check_claimed_bounds(p, np.eye(2), 0.5, 1.5)
    assert chk.lower_valid and not chk.upper_valid
    w = chk.witness
    assert pair_form(p, w).real - 1.5 * np.linalg.norm(w) ** 2 == pytest.approx(0.5)


# ---------------------------------------------------------------- properties

seeds = st.integers(0, 2**32 - 1)


def draw_case(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    fam = ("rescale", "controlled")[int(rng.integers(0, 2))]
    inst = random_biframe(n, n + int(rng.integers(0, 3)), fam, [seed, 1])
    k = random_operator(n, int(rng.integers(0, n + 1)), [seed, 2])
    return inst.pair, k, rng


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_bisection_brackets_the_optimum(seed):
    p, k, _ = draw_case(seed)
    cert = certify_k_biframe(p, k)
    if not cert.is_k_biframe or cert.a_unbounded:
        return
    h = hermitian_part(biframe_operator(p))
    g = k @ k.conj().T
    floor = -DEFAULT.ktol * np.linalg.norm(h, 2)
    assert linalg.min_eig_hermitian(h - (cert.a_opt - 2 * BIS) * g, np.inf) >= floor
    assert linalg.min_eig_hermitian(h - (cert.a_opt + 2 * BIS) * g, np.inf) < floor


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_definition_inequality_on_samples(seed):
    p, k, rng = draw_case(seed)
    cert = certify_k_biframe(p, k)
    a = 0.0 if cert.a_unbounded else cert.a_opt
    for _ in range(100):
        v = crandn(rng, p.dim)
        v /= np.linalg.norm(v)
        phi = pair_form(p, v).real
        assert a * np.linalg.norm(k.conj().T @ v) ** 2 <= phi + 1e-8
        assert phi <= cert.b_opt + 1e-8


@settings(max_examples=80, deadline=None)
@given(seeds, st.floats(0.1, 10))
def test_swap_and_scaling(seed, c):
    p, k, _ = draw_case(seed)
    c1 = certify_k_biframe(p, k)
    c2 = certify_k_biframe(p.swapped(), k)
    assert c1.is_k_biframe == c2.is_k_biframe
    assert c1.a_opt == c2.a_opt or abs(c1.a_opt - c2.a_opt) <= 2 * BIS
    assert abs(c1.b_opt - c2.b_opt) <= 2 * BIS
    cs = certify_k_biframe(BiframePair(p.x, p.y.scaled(c)), k)
    if not c1.a_unbounded:
        assert abs(cs.a_opt - c * c1.a_opt) <= 2 * BIS * max(1, c)
    assert abs(cs.b_opt - c * c1.b_opt) <= 1e-9 * max(1, c * c1.b_opt)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_shrinking_range_of_k_never_decreases_a_opt(seed):
    p, k, rng = draw_case(seed)
    k2 = k.copy()
    k2[:, int(rng.integers(0, p.dim))] = 0
    a1 = certify_k_biframe(p, k).a_opt
    a2 = certify_k_biframe(p, k2).a_opt
    assert a2 >= a1 - 2 * BIS


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certificate_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    fam = ("rescale", "controlled", "skew")[int(rng.integers(0, 3))]
    p = random_biframe(n, n + int(rng.integers(0, 3)), fam, seed).pair
    k = random_operator(n, int(rng.integers(0, n + 1)), [seed, 9])
    c = certify_k_biframe(p, k)
    if c.is_k_biframe:
        assert c.hermitian_residual <= c.herm_tol and c.a_opt > 0 and math.isfinite(c.b_opt)
    if c.is_parseval:
        assert c.is_tight
    if c.is_tight:
        assert c.is_k_biframe
    assert (c.witness_lower is not None) == (not c.is_k_biframe and c.reason != "non_hermitian")
    if c.witness_lower is not None:
        w = c.witness_lower
        h = hermitian_part(biframe_operator(p))
        assert np.vdot(w, h @ w).real < BIS * np.linalg.norm(k.conj().T @ w) ** 2
