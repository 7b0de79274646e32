"""Seeded random operands: Hermitian matrices with prescribed spectra, contractions, maps."""
from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .hermitian import HermitianMatrix, Interval, hermitize
from .means import PositiveLinearMap, gram_schmidt, make_map, random_unital_map
from .rng import CounterRNG, derive_seed

# Margin kept between sampled spectra and the ends of their interval.
EPS_DOM = 1e-3

MAP_KINDS = ("identity", "compression", "pinching", "normalized_trace", "random_unital")


def random_unitary(dim: int, rng: CounterRNG) -> np.ndarray:
    return gram_schmidt(rng.complex_normal((dim, dim)))


def random_hermitian(dim: int, interval: Interval, seed: int) -> HermitianMatrix:
    """``U diag(w) U*`` with ``w`` uniform in ``interval`` shrunk by ``EPS_DOM`` at both ends.

    A closed degenerate interval ``[x, x]`` yields ``x I``.
    """
    if dim < 1:
        raise ParameterError(f"dimension must be positive, got {dim}")
    if not interval.bounded:
        raise ParameterError(f"cannot sample from unbounded interval {interval}")
    inner = interval.shrink(EPS_DOM)
    if inner.lo == inner.hi:
        return inner.lo * HermitianMatrix.identity(dim)
    rng = CounterRNG(seed)
    w = rng.uniform(dim, inner.lo, inner.hi)
    if dim == 1:
        return HermitianMatrix.diag(w)
    u = random_unitary(dim, rng)
    return hermitize((u * w) @ u.conj().T)


def random_contraction(dim: int, seed: int) -> HermitianMatrix:
    """Positive contraction with spectrum in ``[EPS_DOM, 1 - EPS_DOM]``."""
    return random_hermitian(dim, Interval.open(0.0, 1.0), seed)


def random_map(kind: str, n: int, seed: int) -> PositiveLinearMap:
    """A unital map of the given family on ``n x n`` inputs with randomized shape."""
    rng = CounterRNG(seed)
    if kind == "identity":
        return make_map("identity", n)
    if kind == "compression":
        k = rng.integers(1, n)
        order = np.argsort(rng.uniform(n), kind="stable")
        return make_map("compression", n, coords=sorted(int(i) for i in order[:k]))
    if kind == "pinching":
        cuts = [i for i in range(1, n) if rng.uniform() < 0.5]
        edges = [0, *cuts, n]
        blocks = [list(range(edges[j], edges[j + 1])) for j in range(len(edges) - 1)]
        return make_map("pinching", n, blocks=blocks)
    if kind == "normalized_trace":
        return make_map("normalized_trace", n, rng.integers(1, n))
    if kind == "random_unital":
        m = rng.integers(1, 3)
        k = rng.integers(1, min(m * n, 6))
        return random_unital_map(n, k, m, derive_seed(seed, 1))
    raise ParameterError(f"unknown map kind {kind!r}")
