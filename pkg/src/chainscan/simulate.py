"""Monte Carlo harness: error-rate estimation and alarm calibration.

Trials are batched through the vectorized kernels; a rejection is the union
event "longest run above its cut OR scan statistic above its cut", which is
exactly the two-step detector's rejection region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .detectability import DEFAULT_DELTA2, DEFAULT_EPSILON, DEFAULT_X_STAR
from .detector import DetectorConfig, _scan_cap, _thresholds_for, make_config
from .grid import ChainPath, generate_chain

__all__ = [
    "LengthLaw",
    "ExperimentSpec",
    "ErrorEstimate",
    "estimate_type1",
    "estimate_power",
    "calibrate_alarms",
]

_LAW_KINDS = ("linear", "sqrt", "log", "fixed")
# trial chunking keeps the working set near 2e7 grid cells
_CHUNK_CELLS = int(2e7)


@dataclass(frozen=True)
class LengthLaw:
    """Embedded-chain length as a function of the column count."""

    kind: str
    coef: float

    def __post_init__(self):
        if self.kind not in _LAW_KINDS:
            raise ValueError(f"unknown length law {self.kind!r}, expected one of {_LAW_KINDS}")
        if self.coef <= 0:
            raise ValueError(f"length-law coefficient must be positive, got {self.coef}")

    def realize(self, n: int) -> int:
        if self.kind == "linear":
            raw = self.coef * n
        elif self.kind == "sqrt":
            raw = self.coef * math.sqrt(n)
        elif self.kind == "log":
            raw = self.coef * math.log(n)
        else:
            raw = self.coef
        length = max(1, int(round(raw)))
        if length > n:
            raise ValueError(f"length law {self.kind}({self.coef:g}) gives {length} > n = {n}")
        return length


@dataclass(frozen=True)
class ExperimentSpec:
    """One Monte Carlo experiment: grid geometry, detector knobs, signal, trials."""

    m: int
    n: int
    C: int = 1
    x_star: float = DEFAULT_X_STAR
    epsilon: float = DEFAULT_EPSILON
    delta2: float = DEFAULT_DELTA2
    length_law: LengthLaw = field(default_factory=lambda: LengthLaw("linear", 0.1))
    mu: float = 0.0
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 2:
            raise ValueError(f"need m >= 1 and n >= 2, got {self.m}x{self.n}")
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if self.mu < 0:
            raise ValueError(f"need mu >= 0, got {self.mu}")


@dataclass(frozen=True)
class ErrorEstimate:
    """Binomial rate estimate with its standard error."""

    rate: float
    stderr: float
    trials: int
    kind: str


def _estimate(rate_sum: int, trials: int, kind: str) -> ErrorEstimate:
    rate = rate_sum / trials
    stderr = math.sqrt(rate * (1.0 - rate) / trials)
    return ErrorEstimate(rate, stderr, trials, kind)


def _config_for(spec: ExperimentSpec) -> DetectorConfig:
    return make_config(
        spec.m, spec.C, spec.x_star, spec.epsilon, spec.delta2, seed=spec.seed
    )


def _chunks(trials: int, m: int, n: int):
    size = max(1, min(trials, _CHUNK_CELLS // (m * n) + 1))
    done = 0
    while done < trials:
        t = min(size, trials - done)
        yield t
        done += t


def _reject_counts(x: np.ndarray, config: DetectorConfig, step1: float, step2: float,
                   cap: int, C: int) -> int:
    z = x > config.x_star
    lengths = _kernels.chain_lengths(z, C)
    values = _kernels.scan_values(x, z, C, cap)
    return int(((lengths > step1) | (values > step2)).sum())


def estimate_type1(spec: ExperimentSpec) -> ErrorEstimate:
    """Fraction of pure-noise grids the detector rejects (``spec.mu`` is ignored)."""
    if spec.trials < 50:
        raise ValueError(f"need trials >= 50 for a rate estimate, got {spec.trials}")
    config = _config_for(spec)
    thr = _thresholds_for(config, spec.m, spec.n)
    cap = _scan_cap(config, spec.m, spec.n)
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1]))
    hits = 0
    for t in _chunks(spec.trials, spec.m, spec.n):
        x = rng.standard_normal((t, spec.m, spec.n))
        hits += _reject_counts(x, config, thr.step1, thr.step2, cap, spec.C)
    return _estimate(hits, spec.trials, "type1")


def estimate_power(spec: ExperimentSpec, fixed_chain: ChainPath | None = None) -> ErrorEstimate:
    """Fraction of signal grids the detector rejects.

    Each trial plants a fresh random chain of the law's length with mean
    ``spec.mu`` added on its nodes (the composite alternative); pass
    ``fixed_chain`` to hold the placement constant for variance reduction.
    ``mu = 0`` degenerates to the null and is allowed for cross-checks.
    """
    if spec.trials < 50:
        raise ValueError(f"need trials >= 50 for a rate estimate, got {spec.trials}")
    length = spec.length_law.realize(spec.n)
    if fixed_chain is not None:
        fixed_chain.validate(spec.m, spec.n, spec.C)
    config = _config_for(spec)
    thr = _thresholds_for(config, spec.m, spec.n)
    cap = _scan_cap(config, spec.m, spec.n)
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 2]))
    hits = 0
    trial_index = 0
    for t in _chunks(spec.trials, spec.m, spec.n):
        x = rng.standard_normal((t, spec.m, spec.n))
        for k in range(t):
            chain = fixed_chain
            if chain is None:
                chain = generate_chain(
                    spec.m, spec.n, spec.C, length,
                    seed=np.random.SeedSequence([spec.seed, 3, trial_index]),
                )
            rows = np.asarray(chain.rows) - 1
            cols = np.arange(chain.start_col - 1, chain.end_col)
            x[k, rows, cols] += spec.mu
            trial_index += 1
        hits += _reject_counts(x, config, thr.step1, thr.step2, cap, spec.C)
    return _estimate(hits, spec.trials, "power")


def calibrate_alarms(
    m: int,
    n: int,
    C: int,
    x_star: float,
    alpha: float,
    trials: int,
    seed: int,
    config: DetectorConfig | None = None,
) -> tuple[float, float]:
    """Empirical alarm cuts with union false-alarm level about alpha.

    Each statistic gets its empirical (1 - alpha/2)-quantile over null
    frames, so the two-sided union alarm has level <= alpha up to Monte
    Carlo error. Pass the detector ``config`` that will score the frames so
    calibration and deployment share the same scan cap.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0,1], got {alpha}")
    needed = math.ceil(50.0 / alpha)
    if trials < needed:
        raise ValueError(f"need at least {needed} trials for alpha={alpha:g}, got {trials}")
    if config is None:
        config = make_config(m, C, x_star, seed=seed)
    cap = _scan_cap(config, m, n)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 4]))
    lengths = []
    values = []
    for t in _chunks(trials, m, n):
        x = rng.standard_normal((t, m, n))
        z = x > x_star
        lengths.append(_kernels.chain_lengths(z, C))
        values.append(_kernels.scan_values(x, z, C, cap))
    lengths = np.concatenate(lengths)
    values = np.concatenate(values)
    q = 1.0 - alpha / 2.0
    return float(np.quantile(lengths, q)), float(np.quantile(values, q))
