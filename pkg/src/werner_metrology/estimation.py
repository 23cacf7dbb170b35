"""Seeded outcome sampling, two-step (eta then phi) estimation and the
Monte Carlo comparison against the Cramer-Rao bound.

Random streams are numpy ``PCG64`` generators.  Every trial gets its own
stream seeded by ``SeedSequence([seed, trial_index])``, so results do not
depend on the order in which trials run.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import (
    DomainError,
    FlatLikelihoodError,
    InfeasibleCountsError,
    NoBoundError,
    NotIdentifiableError,
)
from .fisher import classical_fisher
from .measurements import (
    STRATEGY_LABELS,
    OutcomeDistribution,
    VisibilityModelParams,
    check_strategy,
    model_probs,
)

PHI_MIN = 0.0
PHI_MAX = math.pi / 2.0
GRID_POINTS = 1024
GOLDEN_WIDTH = 1e-9
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

REPORT_FIELDS = (
    "strategy", "eta_true", "phi_true", "visibility", "shots", "trials", "seed",
    "variance", "bias", "crb", "ratio",
)

Counts = dict[str, int]


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for ``(seed, index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


@dataclass(frozen=True)
class ExperimentConfig:
    eta_true: float
    phi_true: float
    visibility: float = 1.0
    shots: int = 10_000
    trials: int = 300
    strategy: str = "bell"
    seed: int = 0

    def __post_init__(self) -> None:
        check_strategy(self.strategy)
        for name in ("eta_true", "visibility"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not PHI_MIN <= self.phi_true <= PHI_MAX:
            raise DomainError(f"phi_true must lie in [0, pi/2], got {self.phi_true}")
        if self.shots < 1 or self.trials < 1:
            raise DomainError("shots and trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ExperimentConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class TrialResult:
    counts: Counts
    eta_hat: float
    phi_hat: float


@dataclass(frozen=True)
class CrbReport:
    config: ExperimentConfig
    variance: float
    bias: float
    crb: float
    ratio: float
    trial_results: tuple[TrialResult, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        row = asdict(self.config)
        row.update(variance=self.variance, bias=self.bias, crb=self.crb, ratio=self.ratio)
        return {k: row[k] for k in REPORT_FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerow(self.to_dict())
        return buf.getvalue()


def counts_to_json(strategy: str, counts: Mapping[str, int]) -> str:
    return json.dumps({"strategy": strategy, "counts": dict(counts)})


def counts_from_json(text: str) -> tuple[str, Counts]:
    data = json.loads(text)
    strategy = check_strategy(data["strategy"])
    counts = {str(k): int(v) for k, v in data["counts"].items()}
    _validated_counts(counts, strategy)
    return strategy, counts


def _validated_counts(counts: Mapping[str, int], strategy: str) -> np.ndarray:
    labels = STRATEGY_LABELS[strategy]
    unknown = set(counts) - set(labels)
    if unknown:
        raise DomainError(f"labels {sorted(unknown)} do not belong to strategy {strategy!r}")
    n = np.array([counts.get(lab, 0) for lab in labels], dtype=np.int64)
    if np.any(n < 0):
        raise DomainError("counts must be non-negative")
    if n.sum() < 1:
        raise DomainError("counts are empty")
    return n


def sample_counts(dist: OutcomeDistribution, shots: int, rng: np.random.Generator) -> Counts:
    """Multinomial draw of ``shots`` outcomes from ``dist``."""
    if shots < 1:
        raise DomainError("shots must be positive")
    p = dist.probabilities / dist.probabilities.sum()
    draws = rng.multinomial(shots, p)
    return {lab: int(n) for lab, n in zip(dist.labels, draws)}


def estimate_eta(counts: Mapping[str, int], strategy: str) -> float:
    """Noise estimate from the phase-independent Bell outcomes, clamped to [0, 1]."""
    check_strategy(strategy)
    if strategy == "local":
        raise NotIdentifiableError(
            "eta is not identifiable from local counts alone; it is confounded with phi"
        )
    n = _validated_counts(counts, strategy)
    if strategy == "bell":
        null = counts.get("B01", 0) + counts.get("B11", 0)
    else:
        null = counts.get("group_B01_B11", 0)
    eta = 1.0 - 2.0 * null / n.sum()
    return min(max(eta, 0.0), 1.0)


def _prob_table(strategy: str, phis: np.ndarray, eta: float, visibility: float) -> np.ndarray:
    """Model probabilities, shape (len(phis), n_outcomes), vectorized over phi."""
    c = visibility * eta * np.cos(2.0 * phis)
    if strategy == "local":
        same, diff = (1.0 + c) / 4.0, (1.0 - c) / 4.0
        return np.stack([same, diff, diff, same], axis=1)
    base = np.full_like(phis, (1.0 + eta) / 4.0)
    null = np.full_like(phis, (1.0 - eta) / 4.0)
    cols = [base + c / 2.0, base - c / 2.0]
    cols += [null, null] if strategy == "bell" else [2.0 * null]
    return np.clip(np.stack(cols, axis=1), 0.0, None)


def log_likelihood(
    counts: Mapping[str, int], strategy: str, phis: np.ndarray | float, eta: float, visibility: float
) -> np.ndarray:
    """sum_x n_x ln p_x(phi); -inf where an observed outcome is impossible."""
    check_strategy(strategy)
    n = _validated_counts(counts, strategy).astype(float)
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    p = _prob_table(strategy, phis, eta, visibility)
    observed = n > 0
    with np.errstate(divide="ignore"):
        logs = np.log(p[:, observed])
    return logs @ n[observed]


def golden_section_max(f, lo: float, hi: float, width: float = GOLDEN_WIDTH) -> float:
    """Maximize a unimodal ``f`` on [lo, hi]; the bracket endpoints are candidates too."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > width:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    mid = 0.5 * (a + b)
    best_x, best_f = lo, f(lo)
    for x in (mid, hi):
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x


def mle_phi(counts: Mapping[str, int], strategy: str, eta: float, visibility: float = 1.0) -> float:
    """Maximum-likelihood phase on [0, pi/2] given plug-in eta and visibility.

    A 1024-point grid scan locates the best cell (first maximum wins, i.e.
    ties go to the smaller phase); golden-section search then refines within
    the neighbouring grid cells down to a bracket width of 1e-9.

    Raises
    ------
    FlatLikelihoodError
        If ``eta * visibility == 0``; the counts then carry no phase information.
    InfeasibleCountsError
        If some observed outcome has zero probability for every phase.
    """
    check_strategy(strategy)
    if not (0.0 <= eta <= 1.0 and 0.0 <= visibility <= 1.0):
        raise DomainError("eta and visibility must lie in [0, 1]")
    if eta * visibility == 0.0:
        raise FlatLikelihoodError("eta * visibility = 0: the likelihood is flat in phi")

    grid = np.linspace(PHI_MIN, PHI_MAX, GRID_POINTS)
    ll = log_likelihood(counts, strategy, grid, eta, visibility)
    if not np.any(np.isfinite(ll)):
        raise InfeasibleCountsError("observed counts have zero likelihood for every phase")
    i = int(np.argmax(ll))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, GRID_POINTS - 1)]

    def f(x: float) -> float:
        return float(log_likelihood(counts, strategy, x, eta, visibility)[0])

    refined = golden_section_max(f, lo, hi)
    # The refinement never returns something worse than the grid point.
    return float(refined if f(refined) >= ll[i] else grid[i])


def crb(fisher: float, shots: int) -> float:
    """Cramer-Rao variance bound 1 / (N F)."""
    if not fisher > 0.0:
        raise NoBoundError(f"Fisher information {fisher} gives no finite bound")
    if shots < 1:
        raise DomainError("shots must be positive")
    return 1.0 / (shots * fisher)


def run_trial(config: ExperimentConfig, index: int) -> TrialResult:
    params = VisibilityModelParams(config.eta_true, config.visibility)
    dist = model_probs(config.strategy, config.phi_true, params)
    counts = sample_counts(dist, config.shots, substream(config.seed, index))
    if config.strategy == "local":
        # eta is known a priori for the local strategy.
        eta_hat = config.eta_true
    else:
        eta_hat = estimate_eta(counts, config.strategy)
    phi_hat = mle_phi(counts, config.strategy, eta_hat, config.visibility)
    return TrialResult(counts, eta_hat, phi_hat)


def run_trials(config: ExperimentConfig) -> list[TrialResult]:
    return [run_trial(config, i) for i in range(config.trials)]


def run_monte_carlo(config: ExperimentConfig) -> CrbReport:
    """Repeat the estimation ``config.trials`` times and compare with the bound."""
    params = VisibilityModelParams(config.eta_true, config.visibility)
    if config.eta_true * config.visibility == 0.0:
        raise FlatLikelihoodError("eta * visibility = 0: no phase information")
    fisher = classical_fisher(model_probs(config.strategy, config.phi_true, params))
    bound = crb(fisher, config.shots)
    results = run_trials(config)
    phis = np.array([r.phi_hat for r in results])
    variance = float(np.var(phis, ddof=1)) if phis.size > 1 else 0.0
    bias = float(phis.mean() - config.phi_true)
    return CrbReport(config, variance, bias, bound, variance / bound, tuple(results))
