"""Suite registry: how each inequality draws a random instance and checks it.

An instance is a plain record of operands.  It serializes to JSON and back
bit-exactly, so any recorded trial can be re-evaluated later.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .generators import random_contraction, random_hermitian, random_map
from .hermitian import CheckResult, FunctionSpec, HermitianMatrix, Interval, Tolerances
from .inequalities import (
    ScalarBellmanInstance,
    check_entropy_mean,
    check_holder_mccarthy,
    check_jensen,
    check_log_mean,
    check_mean_jensen,
    check_operator_bellman,
    check_scalar_bellman,
    power_sum,
    scalar_bellman_gap,
    scalar_bellman_sides,
    transform_mp1_to_mp3,
    transform_mp3_to_mp1,
)
from .means import PositiveLinearMap
from .rng import CounterRNG, derive_seed

SUITES = (
    "jensen",
    "holder_mccarthy",
    "mean_jensen",
    "operator_bellman",
    "log_mean",
    "entropy_mean",
    "scalar_mp3",
    "scalar_mp1",
    "equivalence_roundtrip",
)

SCALAR_SUITES = ("scalar_mp3", "scalar_mp1", "equivalence_roundtrip")

# Relative tolerance of the gap identity and of the reverse-substitution round trip.
IDENTITY_RTOL = 1e-12

_POSITIVE_BOX = Interval.open(0.0, 4.0)
_UNIT_BOX = Interval.open(0.0, 1.0)


def sampling_interval(f: FunctionSpec) -> Interval:
    """Interval the operands' spectra are drawn from when checking ``f``."""
    if f.kind in ("neg_t_log_t", "one_minus_t_power", "identity", "square"):
        return _UNIT_BOX
    return _POSITIVE_BOX


@dataclass
class TrialInstance:
    suite: str
    dim: int
    a: HermitianMatrix | None = None
    b: HermitianMatrix | None = None
    phi: PositiveLinearMap | None = None
    lam: float | None = None
    p: float | None = None
    fn: FunctionSpec | None = None
    r: float | None = None
    scalar: ScalarBellmanInstance | None = None
    extra: dict = field(default_factory=dict)


# --- serialization ---------------------------------------------------------------


def matrix_to_json(h: HermitianMatrix) -> dict:
    a = h.entries
    return {"dim": h.dim, "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def matrix_from_json(d: dict) -> HermitianMatrix:
    n = d["dim"]
    a = np.array(d["re"], dtype=np.float64) + 1j * np.array(d["im"], dtype=np.float64)
    return HermitianMatrix._trusted(a.reshape(n, n))


def map_to_json(phi: PositiveLinearMap) -> dict:
    k = phi.kraus
    return {
        "in_dim": phi.in_dim,
        "out_dim": phi.out_dim,
        "kraus": [{"rows": phi.out_dim, "cols": phi.in_dim, "re": m.real.ravel().tolist(), "im": m.imag.ravel().tolist()} for m in k],
    }


def map_from_json(d: dict) -> PositiveLinearMap:
    mats = [
        (np.array(m["re"], dtype=np.float64) + 1j * np.array(m["im"], dtype=np.float64)).reshape(m["rows"], m["cols"])
        for m in d["kraus"]
    ]
    return PositiveLinearMap(np.stack(mats))


def instance_to_json(inst: TrialInstance) -> dict:
    return {
        "suite": inst.suite,
        "dim": inst.dim,
        "A": None if inst.a is None else matrix_to_json(inst.a),
        "B": None if inst.b is None else matrix_to_json(inst.b),
        "phi": None if inst.phi is None else map_to_json(inst.phi),
        "lambda": inst.lam,
        "p": inst.p,
        "f": None if inst.fn is None else inst.fn.to_dict(),
        "r": inst.r,
        "scalar": None if inst.scalar is None else inst.scalar.to_dict(),
    }


def instance_from_json(d: dict) -> TrialInstance:
    return TrialInstance(
        suite=d["suite"],
        dim=d["dim"],
        a=None if d.get("A") is None else matrix_from_json(d["A"]),
        b=None if d.get("B") is None else matrix_from_json(d["B"]),
        phi=None if d.get("phi") is None else map_from_json(d["phi"]),
        lam=d.get("lambda"),
        p=d.get("p"),
        fn=None if d.get("f") is None else FunctionSpec.from_dict(d["f"]),
        r=d.get("r"),
        scalar=None if d.get("scalar") is None else ScalarBellmanInstance.from_dict(d["scalar"]),
    )


# --- generation ------------------------------------------------------------------


def sample_lambda(sampling: str, index: int, rng: CounterRNG) -> float:
    """``grid:k`` cycles through ``k`` evenly spaced points of [0, 1]; ``uniform`` draws;
    ``mixed:k`` alternates the two, starting with the grid."""
    kind, _, arg = sampling.partition(":")
    if kind == "uniform":
        return rng.uniform()
    k = int(arg) if arg else 5
    if kind == "mixed":
        if index % 2:
            return rng.uniform()
        index //= 2
    return (index % k) / (k - 1) if k > 1 else 0.5


def _scaled_vector(rng, n, p, target):
    raw = rng.uniform(n, 0.05, 1.0)
    return tuple(float(x) for x in raw * (target / power_sum(raw, p)) ** (1.0 / p))


def _normalized_instance(rng, n, p, lam):
    a = _scaled_vector(rng, n, p, rng.uniform(low=1e-3, high=1.0 - 1e-3))
    b = _scaled_vector(rng, n, p, rng.uniform(low=1e-3, high=1.0 - 1e-3))
    return ScalarBellmanInstance(p, a, b, lam=lam)


def _classical_instance(rng, n, p):
    m1 = rng.uniform(low=0.1, high=3.0)
    m2 = rng.uniform(low=0.1, high=3.0)
    a = _scaled_vector(rng, n, p, rng.uniform(low=1e-3, high=1.0 - 1e-3) * m1**p)
    b = _scaled_vector(rng, n, p, rng.uniform(low=1e-3, high=1.0 - 1e-3) * m2**p)
    return ScalarBellmanInstance(p, a, b, m1=m1, m2=m2)


def generate(cfg, dim: int, index: int) -> TrialInstance:
    """Draw the operands of trial ``index`` at ``dim``; pure in ``(cfg, dim, index)``."""
    sub_seed = trial_seed(cfg.seed, dim, index)
    seeds = [derive_seed(sub_seed, j) for j in range(4)]
    rng = CounterRNG(seeds[3])
    lam = sample_lambda(cfg.lambda_sampling, index, rng)
    p = cfg.p_values[index % len(cfg.p_values)]
    suite = cfg.suite
    inst = TrialInstance(suite, dim)

    if suite in ("jensen", "mean_jensen", "holder_mccarthy"):
        f = cfg.function if suite != "holder_mccarthy" else FunctionSpec.power(cfg.r)
        box = sampling_interval(f)
        inst.a = random_hermitian(dim, box, seeds[0])
        inst.phi = random_map(cfg.map_kind, dim, seeds[2])
        if suite == "holder_mccarthy":
            inst.r = cfg.r
        else:
            inst.fn = f
        if suite == "mean_jensen":
            inst.b = random_hermitian(dim, box, seeds[1])
            inst.lam = lam
    elif suite in ("operator_bellman", "log_mean"):
        inst.a = random_contraction(dim, seeds[0])
        inst.b = random_contraction(dim, seeds[1])
        inst.phi = random_map(cfg.map_kind, dim, seeds[2])
        inst.lam = lam
        if suite == "operator_bellman":
            inst.p = p
    elif suite == "entropy_mean":
        inst.a = random_hermitian(dim, Interval.open(0.0, 2.0), seeds[0])
        inst.b = random_hermitian(dim, Interval.open(0.0, 2.0), seeds[1])
        inst.lam = lam
    elif suite == "scalar_mp3":
        inst.scalar = _normalized_instance(rng, dim, p, lam)
        inst.lam, inst.p = lam, p
    elif suite in ("scalar_mp1", "equivalence_roundtrip"):
        inst.scalar = _classical_instance(rng, dim, p)
        inst.p = p
    else:
        raise ConfigError(f"unknown suite {suite!r}")
    return inst


def trial_seed(seed: int, dim: int, index: int) -> int:
    return derive_seed(seed, dim, index)


# --- evaluation ------------------------------------------------------------------


def _rel_close(x, y, scale, rtol=IDENTITY_RTOL):
    return abs(x - y) <= rtol * scale


def _equivalence(inst: ScalarBellmanInstance, tol: Tolerances) -> CheckResult:
    result = check_scalar_bellman(inst, "mp1", tol)
    lhs1, rhs1 = scalar_bellman_sides(inst, "mp1")
    gap1 = rhs1 - lhs1
    normalized = transform_mp3_to_mp1(inst.m1, inst.m2, inst.a, inst.b, inst.p)
    gap3 = scalar_bellman_gap(normalized, "mp3")
    scaled = (inst.m1 + inst.m2) * gap3
    anomalies = []
    # The gaps are differences of O(rhs) quantities, so their rounding noise scales with rhs.
    if not _rel_close(scaled, gap1, max(abs(gap1), rhs1)):
        anomalies.append(f"gap identity off: (m1+m2)*gap_mp3={scaled!r} vs gap_mp1={gap1!r}")
    back = transform_mp3_to_mp1(*_mp1_args(transform_mp1_to_mp3(normalized)))
    if not (
        _rel_close(back.lam, normalized.lam, abs(normalized.lam))
        and all(_rel_close(x, y, abs(y)) for x, y in zip(back.a + back.b, normalized.a + normalized.b))
    ):
        anomalies.append("reverse substitution does not round-trip")
    result.label = "equivalence_roundtrip"
    result.chain = (check_scalar_bellman(normalized, "mp3", tol),)
    result.anomalies = tuple(anomalies)
    result.details.update(gap_mp1=gap1, gap_mp3=gap3, identity_residual=scaled - gap1)
    return result


def _mp1_args(inst):
    return inst.m1, inst.m2, inst.a, inst.b, inst.p


def evaluate(cfg, inst: TrialInstance) -> CheckResult:
    tol = cfg.tolerances
    cm = cfg.counterexample_mode
    suite = inst.suite
    if suite == "jensen":
        return check_jensen(inst.phi, inst.a, inst.fn, tol, expect_violation=cm)
    if suite == "holder_mccarthy":
        return check_holder_mccarthy(inst.phi, inst.a, inst.r, tol, expect_violation=cm)
    if suite == "mean_jensen":
        return check_mean_jensen(inst.phi, inst.a, inst.b, inst.lam, inst.fn, tol, expect_violation=cm)
    if suite == "operator_bellman":
        return check_operator_bellman(inst.phi, inst.a, inst.b, inst.lam, inst.p, tol)
    if suite == "log_mean":
        return check_log_mean(inst.phi, inst.a, inst.b, inst.lam, tol)
    if suite == "entropy_mean":
        return check_entropy_mean(inst.a, inst.b, inst.lam, tol)
    if suite == "scalar_mp3":
        return check_scalar_bellman(inst.scalar, "mp3", tol)
    if suite == "scalar_mp1":
        return check_scalar_bellman(inst.scalar, "mp1", tol)
    if suite == "equivalence_roundtrip":
        return _equivalence(inst.scalar, tol)
    raise ConfigError(f"unknown suite {suite!r}")
