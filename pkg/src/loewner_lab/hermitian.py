"""Hermitian matrices, Jacobi eigendecomposition and spectral functional calculus.

Everything downstream reduces to one question: is ``X - Y`` positive
semidefinite?  This module answers it with a cyclic complex Jacobi
eigensolver whose inner sweep runs in a compiled kernel when available.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _jacobi_py
from .errors import ConvergenceError, DimensionError, DomainError, ParameterError

MAX_SWEEPS = 100


def _load_kernels():
    kernels = {"python": _jacobi_py.jacobi_sweeps}
    try:
        from ._jacobi import jacobi_sweeps
    except ImportError:
        pass
    else:
        kernels["cython"] = jacobi_sweeps
    return kernels


KERNELS = _load_kernels()
_requested = os.environ.get("LOEWNER_LAB_BACKEND", "").strip().lower()
if _requested and _requested not in KERNELS:
    raise ImportError(f"LOEWNER_LAB_BACKEND={_requested!r} is not available; have {sorted(KERNELS)}")
BACKEND = _requested or ("cython" if "cython" in KERNELS else "python")


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by the eigensolver and the Loewner checks."""

    eig_offdiag: float = 1e-13
    psd_slack: float = 1e-8
    equality_slack: float = 1e-9

    def __post_init__(self):
        for name in ("eig_offdiag", "psd_slack", "equality_slack"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = Tolerances()


class HermitianMatrix:
    """Immutable dense complex Hermitian matrix.

    The constructor symmetrizes its input, so ``entries[i, j]`` is always the
    exact conjugate of ``entries[j, i]``.
    """

    __slots__ = ("_a", "_eig_cache")

    def __init__(self, entries):
        a = np.array(entries, dtype=np.complex128, copy=True)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionError("dimension must be at least 1")
        a = (a + a.conj().T) / 2
        self._set(a)

    def _set(self, a):
        a.flags.writeable = False
        self._a = a
        self._eig_cache = {}

    @classmethod
    def _trusted(cls, a):
        # Caller guarantees exact Hermitian symmetry.
        obj = cls.__new__(cls)
        obj._set(np.ascontiguousarray(a, dtype=np.complex128))
        return obj

    @classmethod
    def identity(cls, n: int) -> "HermitianMatrix":
        return cls._trusted(np.eye(n, dtype=np.complex128))

    @classmethod
    def zeros(cls, n: int) -> "HermitianMatrix":
        return cls._trusted(np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def diag(cls, values: Sequence[float]) -> "HermitianMatrix":
        values = np.asarray(values, dtype=np.float64).ravel()
        return cls._trusted(np.diag(values).astype(np.complex128))

    @classmethod
    def scalar(cls, value: float) -> "HermitianMatrix":
        return cls.diag([value])

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the underlying ``complex128`` array."""
        return self._a

    def to_numpy(self) -> np.ndarray:
        return self._a.copy()

    def frobenius(self) -> float:
        return float(np.linalg.norm(self._a))

    def trace(self) -> float:
        return float(np.trace(self._a).real)

    def _check_dim(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return None

    def __add__(self, other):
        if self._check_dim(other) is NotImplemented:
            return NotImplemented
        return HermitianMatrix._trusted(self._a + other._a)

    def __sub__(self, other):
        if self._check_dim(other) is NotImplemented:
            return NotImplemented
        return HermitianMatrix._trusted(self._a - other._a)

    def __neg__(self):
        return HermitianMatrix._trusted(-self._a)

    def __mul__(self, alpha):
        if isinstance(alpha, (complex, np.complexfloating)):
            raise ParameterError("Hermitian matrices only scale by real numbers")
        if not isinstance(alpha, (int, float, np.integer, np.floating)):
            return NotImplemented
        return HermitianMatrix._trusted(float(alpha) * self._a)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim}, entries={self._a.tolist()!r})"


def _as_square(m) -> np.ndarray:
    if isinstance(m, HermitianMatrix):
        return m.entries
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitize(m) -> HermitianMatrix:
    """Return ``(M + M*) / 2`` as a :class:`HermitianMatrix`."""
    return HermitianMatrix(_as_square(m))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and a unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        u = self.vectors
        return (u * self.eigenvalues) @ u.conj().T


def eig(h: HermitianMatrix, tol: Tolerances = DEFAULT_TOL, backend: str | None = None) -> SpectralDecomposition:
    """Eigendecomposition by the cyclic complex Jacobi method.

    Sweeps stop once the off-diagonal Frobenius norm drops to
    ``tol.eig_offdiag * ||H||_F``.

    Raises:
        ConvergenceError: if :data:`MAX_SWEEPS` sweeps are not enough.
    """
    if not isinstance(h, HermitianMatrix):
        h = hermitize(h)
    backend = backend or BACKEND
    key = (tol.eig_offdiag, backend)
    cached = h._eig_cache.get(key)
    if cached is not None:
        return cached
    try:
        kernel = KERNELS[backend]
    except KeyError:
        raise ParameterError(f"unknown eigensolver backend {backend!r}") from None

    a = np.array(h.entries, dtype=np.complex128, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol.eig_offdiag * h.frobenius()
    sweeps, off = kernel(a, v, threshold, MAX_SWEEPS)
    if off > threshold:
        raise ConvergenceError(
            f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {off:.3e})", off
        )
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    w.flags.writeable = False
    v.flags.writeable = False
    dec = SpectralDecomposition(w, v, sweeps)
    h._eig_cache[key] = dec
    return dec


def eigvalsh(h: HermitianMatrix, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    return eig(h, tol).eigenvalues


@dataclass(frozen=True)
class Interval:
    """Real interval with independently open or closed ends (infinite ends are open)."""

    lo: float
    hi: float
    open_lo: bool = False
    open_hi: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ParameterError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ParameterError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and (self.open_lo or self.open_hi):
            raise ParameterError("a degenerate interval must be closed at both ends")
        if math.isinf(self.lo) and not self.open_lo or math.isinf(self.hi) and not self.open_hi:
            raise ParameterError("infinite endpoints must be open")

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, False, False)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, hi, True, True)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        if self.open_lo:
            if not x > self.lo:
                return False
        elif x < self.lo - slack:
            return False
        if self.open_hi:
            return x < self.hi
        return x <= self.hi + slack

    def shrink(self, eps: float) -> "Interval":
        """Closed interval ``[lo + eps, hi - eps]``; a closed degenerate interval is kept as is."""
        if self.lo == self.hi:
            return self
        lo, hi = self.lo + eps, self.hi - eps
        if not lo <= hi:
            raise ParameterError(f"interval {self} is empty after shrinking by {eps}")
        return Interval.closed(lo, hi)

    def clip(self, x: np.ndarray) -> np.ndarray:
        lo = -np.inf if self.open_lo else self.lo
        hi = np.inf if self.open_hi else self.hi
        return np.clip(x, lo, hi)

    def __str__(self):
        left = "(" if self.open_lo else "["
        right = ")" if self.open_hi else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


_INF = math.inf
POSITIVE_REALS = Interval(0.0, _INF, True, True)
NONNEGATIVE_REALS = Interval(0.0, _INF, False, True)
REALS = Interval(-_INF, _INF, True, True)


@dataclass(frozen=True)
class FunctionSpec:
    """A real function applied through the functional calculus.

    ``square`` is deliberately not operator concave; it exists to produce
    counterexamples.
    """

    kind: str
    r: float | None = None

    KINDS = ("power", "log", "neg_t_log_t", "one_minus_t_power", "identity", "square")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown function kind {self.kind!r}")
        needs_r = self.kind in ("power", "one_minus_t_power")
        if needs_r:
            if self.r is None or not math.isfinite(self.r):
                raise ParameterError(f"{self.kind} needs a finite real exponent")
            object.__setattr__(self, "r", float(self.r))
        elif self.r is not None:
            raise ParameterError(f"{self.kind} takes no exponent")

    @classmethod
    def power(cls, r):
        return cls("power", r)

    @classmethod
    def log(cls):
        return cls("log")

    @classmethod
    def neg_t_log_t(cls):
        return cls("neg_t_log_t")

    @classmethod
    def one_minus_t_power(cls, r):
        return cls("one_minus_t_power", r)

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def square(cls):
        return cls("square")

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        """Parse ``power:0.5``, ``log``, ``negtlogt``, ``one_minus_t_power:0.5``, ``square``..."""
        name, _, arg = text.strip().lower().partition(":")
        name = {"negtlogt": "neg_t_log_t", "entropy": "neg_t_log_t", "id": "identity"}.get(name, name)
        if name in ("power", "one_minus_t_power"):
            if not arg:
                raise ParameterError(f"{name} needs an exponent, e.g. {name}:0.5")
            try:
                num, _, den = arg.partition("/")
                r = float(num) / float(den) if den else float(num)
            except ValueError:
                raise ParameterError(f"bad exponent {arg!r}") from None
            return cls(name, r)
        if arg:
            raise ParameterError(f"{name} takes no exponent")
        return cls(name)

    @property
    def domain(self) -> Interval:
        if self.kind == "power":
            return NONNEGATIVE_REALS if self.r >= 0 else POSITIVE_REALS
        if self.kind in ("log", "neg_t_log_t"):
            return POSITIVE_REALS
        if self.kind == "one_minus_t_power":
            return Interval(-_INF, 1.0, True, self.r < 0)
        return REALS

    @property
    def is_operator_concave(self) -> bool:
        if self.kind in ("power", "one_minus_t_power"):
            return 0.0 <= self.r <= 1.0
        return self.kind in ("log", "neg_t_log_t", "identity")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "power":
            return np.power(t, self.r)
        if self.kind == "log":
            return np.log(t)
        if self.kind == "neg_t_log_t":
            return -t * np.log(t)
        if self.kind == "one_minus_t_power":
            return np.power(1.0 - t, self.r)
        if self.kind == "identity":
            return t.copy()
        return t * t

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r": self.r}

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionSpec":
        return cls(d["kind"], d.get("r"))

    def __str__(self):
        return self.kind if self.r is None else f"{self.kind}:{self.r!r}"


def _domain_slack(h: HermitianMatrix, tol: Tolerances) -> float:
    return tol.psd_slack * max(1.0, h.frobenius())


def spectrum_in(h: HermitianMatrix, interval: Interval, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff every eigenvalue of ``h`` lies in ``interval``.

    Closed ends get ``psd_slack * max(1, ||H||_F)`` of grace; open ends are strict.
    """
    slack = _domain_slack(h, tol)
    return all(interval.contains(float(x), slack) for x in eig(h, tol).eigenvalues)


def apply_fn(h: HermitianMatrix, f: FunctionSpec, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    """``f(H) = U f(Lambda) U*`` computed from the Jacobi decomposition."""
    dec = eig(h, tol)
    dom = f.domain
    slack = _domain_slack(h, tol)
    for x in dec.eigenvalues:
        if not dom.contains(float(x), slack):
            raise DomainError(f"eigenvalue {float(x)!r} lies outside the domain {dom} of {f}", float(x))
    values = f(dom.clip(dec.eigenvalues))
    u = dec.vectors
    return hermitize((u * values) @ u.conj().T)


def inverse(h: HermitianMatrix, tol: Tolerances = DEFAULT_TOL) -> HermitianMatrix:
    return apply_fn(h, FunctionSpec.power(-1.0), tol)


@dataclass
class CheckResult:
    """Outcome of one Loewner comparison ``lhs >= rhs``.

    ``chain`` holds the adjacent comparisons of a multi-step proof chain and
    ``anomalies`` any consistency probes that disagreed.
    """

    passed: bool
    min_gap_eigenvalue: float
    gap: HermitianMatrix
    lhs: HermitianMatrix
    rhs: HermitianMatrix
    label: str = ""
    scale: float = 1.0
    expected_violation: bool = False
    chain: tuple = ()
    anomalies: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def chain_passed(self) -> bool:
        return all(step.passed for step in self.chain)

    @property
    def ok(self) -> bool:
        return self.passed and self.chain_passed and not self.anomalies

    @property
    def outcome(self) -> str:
        if self.ok:
            return "pass"
        return "expected-violation" if self.expected_violation else "fail"


def loewner_geq(x: HermitianMatrix, y: HermitianMatrix, tol: Tolerances = DEFAULT_TOL, label: str = "") -> CheckResult:
    """Check ``x >= y`` in the Loewner order.

    Passes iff the smallest eigenvalue of ``x - y`` is at least
    ``-psd_slack * max(1, ||x||_F, ||y||_F)``.
    """
    if x.dim != y.dim:
        raise DimensionError(f"dimension mismatch: {x.dim} vs {y.dim}")
    gap = x - y
    min_gap = float(eig(gap, tol).eigenvalues[0])
    scale = max(1.0, x.frobenius(), y.frobenius())
    return CheckResult(
        passed=min_gap >= -tol.psd_slack * scale,
        min_gap_eigenvalue=min_gap,
        gap=gap,
        lhs=x,
        rhs=y,
        label=label,
        scale=scale,
    )
