"""Randomized suite execution and counterexample search."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

from .errors import ConfigError, LoewnerLabError
from .generators import MAP_KINDS
from .hermitian import FunctionSpec, Tolerances
from .suites import SUITES, evaluate, generate, instance_from_json, instance_to_json, trial_seed

MAX_DIM = 16
DEFAULT_FN = FunctionSpec.power(0.5)


@dataclass(frozen=True)
class TrialConfig:
    suite: str
    dims: tuple = (2, 3, 4)
    trials_per_dim: int = 100
    seed: int = 0
    p_values: tuple = (1.5, 2.0, 3.0)
    lambda_sampling: str = "mixed:5"
    tolerances: Tolerances = field(default_factory=Tolerances)
    map_kind: str = "random_unital"
    counterexample_mode: bool = False
    fn: FunctionSpec | None = None
    r: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not self.dims or not all(1 <= d <= MAX_DIM for d in self.dims):
            raise ConfigError(f"dims must be non-empty and within 1..{MAX_DIM}, got {self.dims}")
        if self.trials_per_dim < 1:
            raise ConfigError(f"trials_per_dim must be at least 1, got {self.trials_per_dim}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.p_values or not all(p > 1.0 for p in self.p_values):
            raise ConfigError(f"p values must all exceed 1, got {self.p_values}")
        if self.map_kind not in MAP_KINDS:
            raise ConfigError(f"unknown map kind {self.map_kind!r}; choose from {', '.join(MAP_KINDS)}")
        kind, _, arg = self.lambda_sampling.partition(":")
        if kind not in ("grid", "uniform", "mixed") or (kind == "uniform" and arg):
            raise ConfigError(f"bad lambda sampling {self.lambda_sampling!r}")
        if arg and not (arg.isdigit() and int(arg) >= 2):
            raise ConfigError(f"grid size must be an integer >= 2, got {arg!r}")
        if (
            self.suite in ("jensen", "mean_jensen")
            and not self.counterexample_mode
            and not self.function.is_operator_concave
        ):
            raise ConfigError(f"{self.function} is not operator concave; enable counterexample mode")
        if self.suite == "holder_mccarthy" and not self.counterexample_mode and not 0.0 <= self.r <= 1.0:
            raise ConfigError(f"exponent r={self.r} outside [0, 1]; enable counterexample mode")

    @property
    def function(self) -> FunctionSpec:
        return self.fn or DEFAULT_FN

    @property
    def total_trials(self) -> int:
        return len(self.dims) * self.trials_per_dim

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["p_values"] = list(self.p_values)
        d["fn"] = self.function.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrialConfig":
        d = dict(d)
        d["tolerances"] = Tolerances(**d["tolerances"])
        d["fn"] = FunctionSpec.from_dict(d["fn"]) if d.get("fn") else None
        return cls(**d)


@dataclass(frozen=True)
class TrialRecord:
    index: int
    dim: int
    sub_seed: int
    lam: float | None
    p: float | None
    min_gap: float
    passed: bool
    outcome: str

    def to_json(self) -> dict:
        return {
            "sub_seed": self.sub_seed,
            "dim": self.dim,
            "index": self.index,
            "lambda": self.lam,
            "p": self.p,
            "min_gap": self.min_gap,
            "passed": self.passed,
            "outcome": self.outcome,
        }


@dataclass
class SuiteReport:
    config: TrialConfig | None
    trials: list = field(default_factory=list)
    worst_trial: dict | None = None
    runtime_ms: float = 0.0

    @property
    def total(self) -> int:
        return len(self.trials)

    @property
    def n_passed(self) -> int:
        return sum(t.passed for t in self.trials)

    @property
    def n_failed(self) -> int:
        return self.total - self.n_passed

    @property
    def unexpected_failures(self) -> int:
        return sum(t.outcome == "fail" for t in self.trials)

    @property
    def worst_gap(self) -> float | None:
        return min((t.min_gap for t in self.trials), default=None)

    def aggregate(self) -> dict:
        return {
            "total": self.total,
            "passed": self.n_passed,
            "failed": self.n_failed,
            "unexpected_failures": self.unexpected_failures,
            "worst_gap": self.worst_gap,
            "worst_trial": self.worst_trial,
        }


def _run_one(cfg: TrialConfig, dim: int, index: int) -> TrialRecord:
    inst = generate(cfg, dim, index)
    result = evaluate(cfg, inst)
    return TrialRecord(
        index=index,
        dim=dim,
        sub_seed=trial_seed(cfg.seed, dim, index),
        lam=inst.lam,
        p=inst.p,
        min_gap=result.min_gap_eigenvalue,
        passed=result.ok,
        outcome=result.outcome,
    )


def _run_chunk(cfg: TrialConfig, tasks: list) -> list:
    return [_run_one(cfg, dim, index) for dim, index in tasks]


def _chunks(tasks, n):
    size = -(-len(tasks) // n)
    return [tasks[i : i + size] for i in range(0, len(tasks), size)]


def worst_trial_json(cfg: TrialConfig, record: TrialRecord) -> dict:
    """Operands of ``record``'s trial, regenerated from its seed path."""
    inst = generate(cfg, record.dim, record.index)
    return {**record.to_json(), "operands": instance_to_json(inst)}


def run_suite(cfg: TrialConfig, workers: int = 1) -> SuiteReport:
    """Run every ``(dim, index)`` trial of ``cfg``.

    Each trial draws from its own sub-seed, so the report does not depend on
    ``workers`` or on scheduling.
    """
    start = time.perf_counter()
    tasks = [(dim, index) for dim in cfg.dims for index in range(cfg.trials_per_dim)]
    if workers <= 1:
        records = _run_chunk(cfg, tasks)
    else:
        chunks = _chunks(tasks, 4 * workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, [cfg] * len(chunks), chunks) for r in part]
    report = SuiteReport(cfg, records)
    if records:
        worst = min(records, key=lambda t: t.min_gap)
        report.worst_trial = worst_trial_json(cfg, worst)
    report.runtime_ms = (time.perf_counter() - start) * 1000.0
    return report


@dataclass
class Counterexample:
    suite: str
    config: dict
    dim: int
    index: int
    sub_seed: int
    operands: dict
    min_gap_eigenvalue: float

    def recheck(self) -> float:
        """Re-run the checker on the serialized operands and return the new gap."""
        cfg = TrialConfig.from_dict(self.config)
        return evaluate(cfg, instance_from_json(self.operands)).min_gap_eigenvalue

    def to_json(self) -> dict:
        return asdict(self)


def search_counterexample(cfg: TrialConfig):
    """First trial whose main comparison fails, or ``None`` within the trial budget.

    The budget is ``cfg.total_trials``; counterexample mode is switched on.
    """
    cfg = replace(cfg, counterexample_mode=True)
    for dim in cfg.dims:
        for index in range(cfg.trials_per_dim):
            inst = generate(cfg, dim, index)
            result = evaluate(cfg, inst)
            if not result.passed:
                return Counterexample(
                    suite=cfg.suite,
                    config=cfg.to_dict(),
                    dim=dim,
                    index=index,
                    sub_seed=trial_seed(cfg.seed, dim, index),
                    operands=instance_to_json(inst),
                    min_gap_eigenvalue=result.min_gap_eigenvalue,
                )
    return None


__all__ = [
    "Counterexample",
    "LoewnerLabError",
    "SuiteReport",
    "TrialConfig",
    "TrialRecord",
    "run_suite",
    "search_counterexample",
]
