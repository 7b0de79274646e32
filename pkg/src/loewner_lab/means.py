"""Operator arithmetic/harmonic means and unital positive maps in Kraus form."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, ParameterError
from .hermitian import DEFAULT_TOL, HermitianMatrix, Tolerances, eig, hermitize, inverse

UNITAL_ATOL = 1e-10


def _check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"mean weight must lie in [0, 1], got {lam!r}")


def arithmetic_mean(a: HermitianMatrix, b: HermitianMatrix, lam: float) -> HermitianMatrix:
    """``(1 - lam) A + lam B``."""
    _check_lambda(lam)
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return (1.0 - lam) * a + lam * b


def _require_positive_definite(h, tol, name):
    lo = float(eig(h, tol).eigenvalues[0])
    if not lo > tol.psd_slack:
        raise DomainError(f"{name} is not positive definite (smallest eigenvalue {lo!r})", lo)


def harmonic_mean(a: HermitianMatrix, b: HermitianMatrix, lam: float, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """``(A^-1 (1 - lam) + B^-1 lam)^-1`` for positive definite ``A``, ``B``."""
    _check_lambda(lam)
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    _require_positive_definite(a, tol, "A")
    _require_positive_definite(b, tol, "B")
    return inverse(arithmetic_mean(inverse(a, tol), inverse(b, tol), lam), tol)


@dataclass(frozen=True, eq=False)
class PositiveLinearMap:
    """``Phi(A) = sum_i K_i A K_i*`` with ``K_i`` of shape ``(out_dim, in_dim)``.

    Kraus form makes the map completely positive by construction.  Pass
    ``unital=True`` to have the constructor verify ``sum_i K_i K_i* = I``.
    """

    kraus: np.ndarray
    unital: bool = False

    def __post_init__(self):
        k = np.array(self.kraus, dtype=np.complex128, copy=True)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[0] < 1 or k.shape[1] < 1 or k.shape[2] < 1:
            raise DimensionError(f"Kraus operators must stack to shape (m, k, n), got {k.shape}")
        k.flags.writeable = False
        object.__setattr__(self, "kraus", k)
        if self.unital and not is_unital(self):
            raise ParameterError("Kraus operators do not satisfy sum K K* = I")

    @property
    def in_dim(self) -> int:
        return self.kraus.shape[2]

    @property
    def out_dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    def __call__(self, a: HermitianMatrix) -> HermitianMatrix:
        return apply_map(self, a)

    def __repr__(self):
        return f"PositiveLinearMap(in_dim={self.in_dim}, out_dim={self.out_dim}, n_kraus={self.n_kraus})"


def apply_map(phi: PositiveLinearMap, a: HermitianMatrix) -> HermitianMatrix:
    if a.dim != phi.in_dim:
        raise DimensionError(f"map expects dimension {phi.in_dim}, got {a.dim}")
    k = phi.kraus
    out = np.matmul(np.matmul(k, a.entries), k.conj().transpose(0, 2, 1)).sum(axis=0)
    return hermitize(out)


def is_unital(phi: PositiveLinearMap, atol: float = UNITAL_ATOL) -> bool:
    """True iff ``||Phi(I_n) - I_k||_F <= atol``."""
    image = apply_map(phi, HermitianMatrix.identity(phi.in_dim))
    return float(np.linalg.norm(image.entries - np.eye(phi.out_dim))) <= atol


def make_map(
    kind: str,
    n: int,
    k: int | None = None,
    coords: Sequence[int] | None = None,
    blocks: Sequence[Sequence[int]] | None = None,
) -> PositiveLinearMap:
    """Build one of the standard unital maps.

    ``kind`` is ``identity``, ``compression`` (needs ``coords``), ``pinching``
    (needs ``blocks`` partitioning ``range(n)``) or ``normalized_trace``
    (``A -> tr(A)/n * I_k``).  Indices are zero-based.
    """
    if n < 1:
        raise ParameterError(f"input dimension must be positive, got {n}")
    eye = np.eye(n, dtype=np.complex128)
    if kind == "identity":
        if k not in (None, n):
            raise ParameterError("identity map needs k == n")
        kraus = eye[None]
    elif kind == "compression":
        if coords is None or len(coords) == 0:
            raise ParameterError("compression needs a non-empty coordinate list")
        coords = list(coords)
        if len(set(coords)) != len(coords) or not all(0 <= c < n for c in coords):
            raise ParameterError(f"bad compression coordinates {coords} for n={n}")
        if k not in (None, len(coords)):
            raise ParameterError("compression needs k == len(coords)")
        kraus = eye[coords][None]
    elif kind == "pinching":
        if blocks is None:
            raise ParameterError("pinching needs blocks")
        flat = sorted(i for blk in blocks for i in blk)
        if flat != list(range(n)) or any(len(blk) == 0 for blk in blocks):
            raise ParameterError(f"blocks {blocks} do not partition range({n})")
        if k not in (None, n):
            raise ParameterError("pinching needs k == n")
        kraus = np.stack([np.diag(np.isin(np.arange(n), blk).astype(np.complex128)) for blk in blocks])
    elif kind == "normalized_trace":
        k = 1 if k is None else k
        if k < 1:
            raise ParameterError(f"output dimension must be positive, got {k}")
        kraus = np.zeros((n * k, k, n), dtype=np.complex128)
        scale = 1.0 / math.sqrt(n)
        for i in range(n):
            for j in range(k):
                kraus[i * k + j, j, i] = scale
    else:
        raise ParameterError(f"unknown map kind {kind!r}")
    return PositiveLinearMap(kraus, unital=True)


def gram_schmidt(z: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of ``z`` (classical Gram-Schmidt, two passes)."""
    q = np.array(z, dtype=np.complex128, copy=True)
    rows, cols = q.shape
    if cols > rows:
        raise ParameterError(f"cannot orthonormalize {cols} columns in dimension {rows}")
    for j in range(cols):
        v = q[:, j]
        for _ in range(2):
            if j:
                v = v - q[:, :j] @ (q[:, :j].conj().T @ v)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ParameterError("rank-deficient input to Gram-Schmidt")
        q[:, j] = v / norm
    return q


def random_unital_map(n: int, k: int, m: int, seed: int) -> PositiveLinearMap:
    """Random unital map with ``m`` Kraus operators, deterministic in ``seed``.

    A complex Gaussian ``(m n) x k`` matrix is orthonormalized into an
    isometry ``W``; its ``n x k`` blocks, conjugate-transposed, are the Kraus
    operators, so ``sum K K* = W* W = I_k``.
    """
    from .rng import CounterRNG

    if min(n, k, m) < 1:
        raise ParameterError("n, k and m must be positive")
    if m * n < k:
        raise ParameterError(f"no isometry exists: m*n = {m * n} < k = {k}")
    w = gram_schmidt(CounterRNG(seed).complex_normal((m * n, k)))
    kraus = w.reshape(m, n, k).conj().transpose(0, 2, 1)
    return PositiveLinearMap(kraus, unital=True)
