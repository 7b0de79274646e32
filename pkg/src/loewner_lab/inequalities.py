"""One Loewner-order predicate per operator inequality, plus the scalar Bellman bridges.

Every checker returns a :class:`~loewner_lab.hermitian.CheckResult` for
``lhs >= rhs``.  ``expect_violation=True`` switches on counterexample mode:
hypotheses such as operator concavity or ``0 <= r <= 1`` are no longer
enforced, and a failing comparison is reported as an expected violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError, PreconditionError
from .hermitian import (
    DEFAULT_TOL,
    CheckResult,
    FunctionSpec,
    HermitianMatrix,
    Interval,
    Tolerances,
    apply_fn,
    eig,
    hermitize,
    inverse,
    loewner_geq,
    spectrum_in,
)
from .means import (
    PositiveLinearMap,
    _require_positive_definite,
    apply_map,
    arithmetic_mean,
    harmonic_mean,
    is_unital,
)

ENTROPY_AGREEMENT = 1e-9

UNIT_INTERVAL = Interval.closed(0.0, 1.0)


def _require_unital(phi):
    if not is_unital(phi):
        raise PreconditionError("the map is not unital: Phi(I) != I")


def _check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"mean weight must lie in [0, 1], got {lam!r}")


def _require_concave(f, expect_violation):
    if not expect_violation and not f.is_operator_concave:
        raise ParameterError(f"{f} is not operator concave; use expect_violation=True for counterexamples")


def _require_spectrum(h, interval, tol, name):
    if not spectrum_in(h, interval, tol):
        w = eig(h, tol).eigenvalues
        slack = tol.psd_slack * max(1.0, h.frobenius())
        bad = next(float(x) for x in w if not interval.contains(float(x), slack))
        raise PreconditionError(f"{name} has eigenvalue {bad!r} outside {interval}", bad)


def _chain(terms, tol, label):
    return tuple(
        loewner_geq(terms[i][1], terms[i + 1][1], tol, label=f"{label}: {terms[i][0]} >= {terms[i + 1][0]}")
        for i in range(len(terms) - 1)
    )


def _finish(result, label, expect_violation, chain=(), anomalies=()):
    result.label = label
    result.expected_violation = expect_violation
    result.chain = chain
    result.anomalies = tuple(anomalies)
    return result


def check_jensen(
    phi: PositiveLinearMap,
    a: HermitianMatrix,
    f: FunctionSpec,
    tol: Tolerances = DEFAULT_TOL,
    expect_violation: bool = False,
) -> CheckResult:
    """Davis-Choi-Jensen: ``f(Phi(A)) >= Phi(f(A))``."""
    _require_unital(phi)
    _require_concave(f, expect_violation)
    lhs = apply_fn(apply_map(phi, a), f, tol)
    rhs = apply_map(phi, apply_fn(a, f, tol))
    return _finish(loewner_geq(lhs, rhs, tol), "jensen", expect_violation)


def check_holder_mccarthy(
    phi: PositiveLinearMap,
    a: HermitianMatrix,
    r: float,
    tol: Tolerances = DEFAULT_TOL,
    expect_violation: bool = False,
) -> CheckResult:
    """``Phi(A)^r >= Phi(A^r)`` for positive definite ``A`` and ``0 <= r <= 1``."""
    _require_unital(phi)
    if not expect_violation and not 0.0 <= r <= 1.0:
        raise ParameterError(f"exponent must lie in [0, 1], got {r!r}")
    lo = float(eig(a, tol).eigenvalues[0])
    if not lo > tol.psd_slack:
        raise PreconditionError(f"A is not positive definite (smallest eigenvalue {lo!r})", lo)
    g = FunctionSpec.power(r)
    lhs = apply_fn(apply_map(phi, a), g, tol)
    rhs = apply_map(phi, apply_fn(a, g, tol))
    return _finish(loewner_geq(lhs, rhs, tol), "holder_mccarthy", expect_violation)


def check_mean_jensen(
    phi: PositiveLinearMap,
    a: HermitianMatrix,
    b: HermitianMatrix,
    lam: float,
    f: FunctionSpec,
    tol: Tolerances = DEFAULT_TOL,
    expect_violation: bool = False,
    label: str = "mean_jensen",
) -> CheckResult:
    """``f(Phi(A) mean Phi(B)) >= Phi(f(A)) mean Phi(f(B))`` for the weighted arithmetic mean.

    ``chain`` records the three adjacent comparisons of
    ``LHS >= Phi(f(A mean B)) >= Phi(f(A) mean f(B)) = RHS``.
    """
    _require_unital(phi)
    _check_lambda(lam)
    _require_concave(f, expect_violation)
    pa, pb = apply_map(phi, a), apply_map(phi, b)
    fa, fb = apply_fn(a, f, tol), apply_fn(b, f, tol)

    lhs = apply_fn(arithmetic_mean(pa, pb, lam), f, tol)
    rhs = arithmetic_mean(apply_map(phi, fa), apply_map(phi, fb), lam)
    jensen_step = apply_map(phi, apply_fn(arithmetic_mean(a, b, lam), f, tol))
    concavity_step = apply_map(phi, arithmetic_mean(fa, fb, lam))

    chain = _chain(
        [
            ("f(Phi(A) mean Phi(B))", lhs),
            ("Phi(f(A mean B))", jensen_step),
            ("Phi(f(A) mean f(B))", concavity_step),
            ("Phi(f(A)) mean Phi(f(B))", rhs),
        ],
        tol,
        label,
    )
    return _finish(loewner_geq(lhs, rhs, tol), label, expect_violation, chain)


def check_operator_bellman(
    phi: PositiveLinearMap,
    a: HermitianMatrix,
    b: HermitianMatrix,
    lam: float,
    p: float,
    tol: Tolerances = DEFAULT_TOL,
) -> CheckResult:
    """``Phi(I - A mean B)^(1/p) >= Phi((I - A)^(1/p) mean (I - B)^(1/p))`` for contractions.

    The intermediate ``Phi(I - A)^(1/p) mean Phi(I - B)^(1/p)`` must sit
    between the two sides; both comparisons are kept in ``chain``.
    """
    _require_unital(phi)
    _check_lambda(lam)
    if not p > 1.0:
        raise ParameterError(f"p must exceed 1, got {p!r}")
    if a.dim != b.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    _require_spectrum(a, UNIT_INTERVAL, tol, "A")
    _require_spectrum(b, UNIT_INTERVAL, tol, "B")

    root = FunctionSpec.power(1.0 / p)
    eye = HermitianMatrix.identity(a.dim)
    lhs = apply_fn(apply_map(phi, eye - arithmetic_mean(a, b, lam)), root, tol)
    middle = arithmetic_mean(
        apply_fn(apply_map(phi, eye - a), root, tol),
        apply_fn(apply_map(phi, eye - b), root, tol),
        lam,
    )
    rhs = apply_map(phi, arithmetic_mean(apply_fn(eye - a, root, tol), apply_fn(eye - b, root, tol), lam))
    chain = _chain([("LHS", lhs), ("intermediate", middle), ("RHS", rhs)], tol, "operator_bellman")
    return _finish(loewner_geq(lhs, rhs, tol), "operator_bellman", False, chain)


def check_log_mean(
    phi: PositiveLinearMap,
    a: HermitianMatrix,
    b: HermitianMatrix,
    lam: float,
    tol: Tolerances = DEFAULT_TOL,
) -> CheckResult:
    """``log(Phi(A) mean Phi(B)) >= Phi(log A) mean Phi(log B)`` for positive definite contractions."""
    for h, name in ((a, "A"), (b, "B")):
        w = eig(h, tol).eigenvalues
        slack = tol.psd_slack * max(1.0, h.frobenius())
        if float(w[-1]) > 1.0 + slack:
            raise PreconditionError(f"{name} is not a contraction (eigenvalue {float(w[-1])!r})", float(w[-1]))
    # Singular operands surface as DomainError from the logarithm.
    return check_mean_jensen(phi, a, b, lam, FunctionSpec.log(), tol, label="log_mean")


def check_entropy_mean(
    a: HermitianMatrix,
    b: HermitianMatrix,
    lam: float,
    tol: Tolerances = DEFAULT_TOL,
) -> CheckResult:
    """``(A mean B) log(A^-1 hmean B^-1) >= (A log A^-1) mean (B log B^-1)``.

    Since ``A^-1 hmean B^-1 = (A mean B)^-1`` the two factors on the left
    commute and the product equals ``-X log X`` with ``X = A mean B``.  The
    literal product is computed as well; a Frobenius disagreement above
    ``1e-9 * max(1, ||LHS||_F)`` is recorded as an anomaly.
    """
    _check_lambda(lam)
    entropy = FunctionSpec.neg_t_log_t()
    mean = arithmetic_mean(a, b, lam)
    lhs = apply_fn(mean, entropy, tol)
    rhs = arithmetic_mean(apply_fn(a, entropy, tol), apply_fn(b, entropy, tol), lam)

    hm = harmonic_mean(_inv(a, tol), _inv(b, tol), lam, tol)
    literal = hermitize(mean.entries @ apply_fn(hm, FunctionSpec.log(), tol).entries)
    disagreement = float(np.linalg.norm(literal.entries - lhs.entries))
    anomalies = []
    if disagreement > ENTROPY_AGREEMENT * max(1.0, lhs.frobenius()):
        anomalies.append(f"product formulation differs from -X log X by {disagreement:.3e}")
    result = _finish(loewner_geq(lhs, rhs, tol), "entropy_mean", False, (), anomalies)
    result.details["formulation_disagreement"] = disagreement
    return result


def _inv(h, tol):
    _require_positive_definite(h, tol, "operand")
    return inverse(h, tol)


# --- scalar Bellman inequalities -------------------------------------------------


@dataclass(frozen=True)
class ScalarBellmanInstance:
    """Data for the scalar Bellman inequalities.

    The normalized form uses ``lam`` with ``sum a^p <= 1`` and
    ``sum b^p <= 1``; the classical form uses ``m1``, ``m2`` with
    ``m1^p >= sum a^p`` and ``m2^p >= sum b^p``.
    """

    p: float
    a: tuple
    b: tuple
    lam: float | None = None
    m1: float | None = None
    m2: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))

    @property
    def n(self) -> int:
        return len(self.a)

    def validate(self, mode: str) -> None:
        if not self.p > 1.0:
            raise PreconditionError(f"p must exceed 1, got {self.p!r}")
        if self.n < 1 or len(self.b) != self.n:
            raise PreconditionError("a and b must be non-empty and of equal length")
        if not all(x > 0 for x in self.a + self.b):
            raise PreconditionError("entries of a and b must be positive")
        sa, sb = power_sum(self.a, self.p), power_sum(self.b, self.p)
        if mode == "mp3":
            if self.lam is None or not 0.0 <= self.lam <= 1.0:
                raise PreconditionError(f"normalized form needs lam in [0, 1], got {self.lam!r}")
            if sa > 1.0 or sb > 1.0:
                raise PreconditionError(f"normalized form needs sum a^p, sum b^p <= 1 (got {sa!r}, {sb!r})")
        elif mode == "mp1":
            if self.m1 is None or self.m2 is None or not (self.m1 > 0 and self.m2 > 0):
                raise PreconditionError("classical form needs positive m1, m2")
            if self.m1**self.p < sa or self.m2**self.p < sb:
                raise PreconditionError("classical form needs m1^p >= sum a^p and m2^p >= sum b^p")
        else:
            raise ParameterError(f"unknown Bellman mode {mode!r}")

    def to_dict(self) -> dict:
        return {"p": self.p, "a": list(self.a), "b": list(self.b), "lam": self.lam, "m1": self.m1, "m2": self.m2}

    @classmethod
    def from_dict(cls, d: dict) -> "ScalarBellmanInstance":
        return cls(d["p"], tuple(d["a"]), tuple(d["b"]), d.get("lam"), d.get("m1"), d.get("m2"))


def power_sum(xs: Sequence[float], p: float) -> float:
    return math.fsum(x**p for x in xs)


def _root(x, p):
    # Guards against -1e-17 style rounding below zero.
    return max(x, 0.0) ** (1.0 / p)


def scalar_bellman_sides(inst: ScalarBellmanInstance, mode: str) -> tuple[float, float]:
    """``(lhs, rhs)`` of the chosen scalar inequality ``lhs <= rhs``."""
    inst.validate(mode)
    p = inst.p
    sa, sb = power_sum(inst.a, p), power_sum(inst.b, p)
    if mode == "mp3":
        lam = inst.lam
        lhs = (1.0 - lam) * _root(1.0 - sa, p) + lam * _root(1.0 - sb, p)
        mixed = power_sum([(1.0 - lam) * x + lam * y for x, y in zip(inst.a, inst.b)], p)
        return lhs, _root(1.0 - mixed, p)
    lhs = _root(inst.m1**p - sa, p) + _root(inst.m2**p - sb, p)
    joint = power_sum([x + y for x, y in zip(inst.a, inst.b)], p)
    return lhs, _root((inst.m1 + inst.m2) ** p - joint, p)


def scalar_bellman_gap(inst: ScalarBellmanInstance, mode: str) -> float:
    """``rhs - lhs``; nonnegative whenever the inequality holds.

    ``mode`` is ``"mp3"`` (normalized, weighted form) or ``"mp1"`` (classical form).
    """
    lhs, rhs = scalar_bellman_sides(inst, mode)
    return rhs - lhs


def convexity_step(inst: ScalarBellmanInstance) -> tuple[float, float]:
    """``(sum (a^p mean b^p), sum (a mean b)^p)``; the first dominates for ``p > 1``."""
    lam, p = inst.lam, inst.p
    left = math.fsum((1.0 - lam) * x**p + lam * y**p for x, y in zip(inst.a, inst.b))
    right = power_sum([(1.0 - lam) * x + lam * y for x, y in zip(inst.a, inst.b)], p)
    return left, right


def embed_scalars(a: Sequence[float], b: Sequence[float], p: float) -> tuple[HermitianMatrix, HermitianMatrix]:
    """``diag(sum a^p, 1)`` and ``diag(sum b^p, 1)``, positive contractions in M_2."""
    if not p > 1.0:
        raise ParameterError(f"p must exceed 1, got {p!r}")
    if len(a) == 0 or len(b) == 0 or not all(x > 0 for x in list(a) + list(b)):
        raise PreconditionError("a and b must be non-empty positive vectors")
    sa, sb = power_sum(a, p), power_sum(b, p)
    if sa > 1.0 or sb > 1.0:
        raise PreconditionError(f"power sums must not exceed 1 (got {sa!r}, {sb!r})")
    return HermitianMatrix.diag([sa, 1.0]), HermitianMatrix.diag([sb, 1.0])


def transform_mp3_to_mp1(m1: float, m2: float, a: Sequence[float], b: Sequence[float], p: float) -> ScalarBellmanInstance:
    """Rescale classical data into the normalized form used to derive the classical inequality.

    Sets ``lam = m2 / (m1 + m2)``, ``a -> a / m1``, ``b -> b / m2``.  The
    gaps satisfy ``(m1 + m2) * gap_normalized = gap_classical``.
    """
    if not (m1 > 0 and m2 > 0):
        raise ParameterError(f"m1 and m2 must be positive, got {m1!r}, {m2!r}")
    ScalarBellmanInstance(p, tuple(a), tuple(b), m1=m1, m2=m2).validate("mp1")
    return ScalarBellmanInstance(
        p,
        tuple(x / m1 for x in a),
        tuple(y / m2 for y in b),
        lam=m2 / (m1 + m2),
    )


def transform_mp1_to_mp3(inst: ScalarBellmanInstance) -> ScalarBellmanInstance:
    """Reverse substitution: ``m1 = 1 - lam``, ``m2 = lam``, ``a -> (1 - lam) a``, ``b -> lam b``.

    Needs ``0 < lam < 1`` so that both weights are positive.
    """
    inst.validate("mp3")
    lam = inst.lam
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"reverse substitution needs 0 < lam < 1, got {lam!r}")
    return ScalarBellmanInstance(
        inst.p,
        tuple((1.0 - lam) * x for x in inst.a),
        tuple(lam * y for y in inst.b),
        m1=1.0 - lam,
        m2=lam,
    )


def check_scalar_bellman(inst: ScalarBellmanInstance, mode: str, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    """Scalar inequality as a 1x1 Loewner check of ``rhs >= lhs``."""
    lhs, rhs = scalar_bellman_sides(inst, mode)
    return _finish(
        loewner_geq(HermitianMatrix.scalar(rhs), HermitianMatrix.scalar(lhs), tol),
        f"scalar_{mode}",
        False,
    )
