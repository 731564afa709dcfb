"""Worked-example gallery and seeded random instance families.

Randomness
----------
All generators draw from numpy's PCG64 bit generator, seeded either with an
integer or with a sequence of integers (``np.random.SeedSequence`` entropy).
Uniform doubles come from ``Generator.random``; complex standard normals
(``E|z|^2 = 1``) are produced from pairs of uniforms by the polar
Box-Muller recipe ``z = sqrt(-log(1 - u1)) * exp(2 pi i u2)``. Both steps are
platform independent, so a seed fixes every instance entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import BadParametersError, UnknownNameError
from .frames import BiframePair, FrameSequence, biframe_operator

GALLERY_NAMES = ("ex_c4", "parseval", "shift", "ex_s_singular", "perturbation_counterexample")
FAMILIES = ("rescale", "controlled", "skew")
DEFAULT_TRUNCATION = 8


def check_random_state(seed) -> np.random.Generator:
    """Turn ``seed`` (int, sequence of ints, or Generator) into a PCG64 Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise BadParametersError("a seed is required; instances must be reproducible")
    return np.random.Generator(np.random.PCG64(seed))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    u1 = rng.random(shape)
    u2 = rng.random(shape)
    return np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2)


def uniform(rng: np.random.Generator, low: float, high: float, shape=None) -> np.ndarray:
    return low + (high - low) * rng.random(shape)


@dataclass
class Instance:
    name: str
    pair: BiframePair
    k: np.ndarray
    extras: dict[str, Any] = field(default_factory=dict)
    provenance: str = "paper_gallery"
    seed: Any = None
    truncation_dim: int | None = None
    claimed_bounds: tuple[float, float] | None = None

    @property
    def dim(self) -> int:
        return self.pair.dim

    @property
    def s(self) -> np.ndarray:
        return biframe_operator(self.pair)

    @property
    def t(self) -> np.ndarray | None:
        return self.extras.get("t")


def _e(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    return v


def right_shift(n: int) -> np.ndarray:
    """``e_i -> e_{i+1}``, ``e_n -> 0`` (truncated unilateral shift)."""
    return np.eye(n, k=-1, dtype=np.complex128)


def left_shift(n: int) -> np.ndarray:
    """``e_i -> e_{i-1}``, ``e_1 -> 0``."""
    return np.eye(n, k=1, dtype=np.complex128)


def _operator_from_images(images: list[np.ndarray]) -> np.ndarray:
    # column j is the image of e_j
    return np.stack(images, axis=1)


def gallery(name: str, n: int | None = None) -> Instance:
    """Named worked examples.

    ``ex_c4``
        Four vectors in C^4 with ``K e1 = e1, K e2 = e1, K e3 = 2 e2,
        K e4 = 3 e3``; stated bounds 1 and 3.
    ``parseval``
        ``x_i = i e_i``, ``y_i = e_i / i``, ``K = I``, truncated to ``n``.
    ``shift``
        ``({K e_i / 2}, {2 K e_i})`` with ``K`` the right shift, and the left
        shift as ``extras['t']``; truncated to ``n``.
    ``ex_s_singular``
        Pair whose biframe operator is ``diag(2, 1, 1, 0)``.
    ``perturbation_counterexample``
        ``X = Y = {e1}`` in C^2, ``K = e1 e1^*``, ``T = (e1 + e2)(e1 + e2)^*``,
        power 1.
    """
    if name == "ex_c4":
        d = 4
        e = [_e(d, i) for i in range(d)]
        k = _operator_from_images([e[0], e[0], 2 * e[1], 3 * e[2]])
        x = FrameSequence([e[0], e[0], 2 * e[1], 3 * e[2]])
        y = FrameSequence([e[0], e[0], e[1], e[2]])
        return Instance(name, BiframePair(x, y), k, claimed_bounds=(1.0, 3.0))
    if name == "ex_s_singular":
        d = 4
        e = [_e(d, i) for i in range(d)]
        k = _operator_from_images([e[0], e[0], e[1], e[2]])
        x = FrameSequence([e[0], e[0], 2 * e[1], 3 * e[2]])
        y = FrameSequence([e[0], e[0], e[1] / 2, e[2] / 3])
        return Instance(name, BiframePair(x, y), k)
    if name == "parseval":
        d = DEFAULT_TRUNCATION if n is None else _check_n(n)
        idx = np.arange(1, d + 1, dtype=float)
        x = FrameSequence(np.diag(idx))
        y = FrameSequence(np.diag(1.0 / idx))
        return Instance(name, BiframePair(x, y), np.eye(d, dtype=np.complex128),
                        truncation_dim=d, claimed_bounds=(1.0, 1.0))
    if name == "shift":
        d = DEFAULT_TRUNCATION if n is None else _check_n(n)
        k = right_shift(d)
        images = FrameSequence.from_columns(k)
        pair = BiframePair(images.scaled(0.5), images.scaled(2.0))
        return Instance(name, pair, k, extras={"t": left_shift(d)}, truncation_dim=d)
    if name == "perturbation_counterexample":
        e1, e2 = _e(2, 0), _e(2, 1)
        x = FrameSequence([e1])
        f = e1 + e2
        return Instance(name, BiframePair(x, x), np.outer(e1, e1.conj()),
                        extras={"t": np.outer(f, f.conj()), "power": 1},
                        provenance="derived")
    raise UnknownNameError(f"unknown gallery instance {name!r}; expected one of {GALLERY_NAMES}")


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise BadParametersError(f"n must be a positive integer, got {n!r}")
    return int(n)


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Gaussian with phase fix)."""
    _check_n(n)
    rng = check_random_state(seed)
    q, r = np.linalg.qr(complex_normal(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_operator(n: int, rank: int, seed) -> np.ndarray:
    """``U diag(s) V^*`` with exactly ``rank`` singular values in [0.5, 2]."""
    _check_n(n)
    if int(rank) != rank or not 0 <= rank <= n:
        raise BadParametersError(f"rank must be in [0, {n}], got {rank!r}")
    rng = check_random_state(seed)
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    s = np.zeros(n)
    s[:rank] = uniform(rng, 0.5, 2.0, rank)
    return (u * s) @ v.conj().T


def random_psd(n: int, seed, rank: int | None = None) -> np.ndarray:
    """``V diag(d) V^*`` with ``d`` uniform in [0, 2] (trailing ``n - rank`` zeroed)."""
    _check_n(n)
    rng = check_random_state(seed)
    v = random_unitary(n, rng)
    d = uniform(rng, 0.0, 2.0, n)
    if rank is not None:
        if not 0 <= rank <= n:
            raise BadParametersError(f"rank must be in [0, {n}], got {rank!r}")
        d[rank:] = 0.0
    h = (v * d) @ v.conj().T
    return (h + h.conj().T) / 2


def random_commuting_pair(n: int, seed, unitary_t: bool = False,
                          t_rank: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(t, k) = (V D1 V^*, V D2 V^*)`` sharing the unitary eigenbasis ``V``.

    ``D1`` holds unit-modulus phases when ``unitary_t`` is set, otherwise
    complex Gaussians with all but ``t_rank`` entries zeroed (when given).
    ``D2`` is complex Gaussian.
    """
    _check_n(n)
    rng = check_random_state(seed)
    v = random_unitary(n, rng)
    if unitary_t:
        d1 = np.exp(2j * np.pi * rng.random(n))
    else:
        d1 = complex_normal(rng, n)
        if t_rank is not None:
            if not 0 <= t_rank <= n:
                raise BadParametersError(f"t_rank must be in [0, {n}], got {t_rank!r}")
            d1[t_rank:] = 0.0
    d2 = complex_normal(rng, n)
    vh = v.conj().T
    return (v * d1) @ vh, (v * d2) @ vh


def random_biframe(n: int, m: int, family: str, seed, k=None) -> Instance:
    """Seeded random pair from one of three families.

    ``rescale``
        Random spanning ``X`` (``m >= n``), ``y_i = c_i x_i`` with ``c_i``
        uniform in [0.5, 2]; the biframe operator is Hermitian positive
        definite.
    ``controlled``
        ``y_i = C x_i`` with ``C = V D V^*`` sharing the eigenbasis of the
        frame operator of ``X`` and ``D`` uniform in [0.5, 2], so
        ``S = C S_X`` is Hermitian positive definite.
    ``skew``
        ``y_i = W x_i`` for a complex Gaussian ``W``; ``S`` is generically
        not Hermitian (negative control).

    ``k`` defaults to the identity.
    """
    _check_n(n)
    if int(m) != m or m < 1:
        raise BadParametersError(f"m must be a positive integer, got {m!r}")
    if family not in FAMILIES:
        raise BadParametersError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family in ("rescale", "controlled") and m < n:
        raise BadParametersError(f"family {family!r} needs m >= n (got m={m}, n={n})")
    rng = check_random_state(seed)
    xv = complex_normal(rng, (m, n))
    if family == "rescale":
        yv = xv * uniform(rng, 0.5, 2.0, m)[:, None]
    elif family == "controlled":
        sx = xv.T @ xv.conj()
        _, v = np.linalg.eigh((sx + sx.conj().T) / 2)
        c = (v * uniform(rng, 0.5, 2.0, n)) @ v.conj().T
        yv = xv @ c.T
    else:
        w = complex_normal(rng, (n, n))
        yv = xv @ w.T
    k = np.eye(n, dtype=np.complex128) if k is None else np.asarray(k, dtype=np.complex128)
    pair = BiframePair(FrameSequence(xv), FrameSequence(yv))
    return Instance(f"{family}_{n}x{m}", pair, k, provenance="random_family", seed=seed)
