"""Two-step chain detector and the per-frame anomaly mode.

Step I rejects when the longest significant chain exceeds its threshold;
otherwise Step II rejects when the capped normalized scan statistic exceeds
its threshold. The growing-lattice regime swaps the Step I cut for one based
on the joint-growth rate constant.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .detectability import (
    DEFAULT_DELTA2,
    DEFAULT_EPSILON,
    DEFAULT_X_STAR,
    Thresholds,
    decision_thresholds,
    normal_cdf,
)
from .grid import ChainPath, ImageGrid, significance_map
from .rates import RunRate, estimate_area_rate, resolve_run_rate
from .runs import longest_run_length
from .scan import UNREACHABLE, scan_statistic

__all__ = ["DetectorConfig", "DetectionResult", "FrameStat", "make_config", "detect",
           "detect_frames"]

FIXED_ROWS = "fixed-m"
GROWING_ROWS = "growing-m"

_DEFAULT_AREA_SIZES = ((96, 96), (192, 192))


@dataclass(frozen=True)
class DetectorConfig:
    """Resolved detector parameters.

    ``run_rate`` carries its (m, C, p) provenance; :func:`detect` refuses
    grids whose geometry disagrees with it. ``area_rate`` is only consulted
    in the growing-rows regime.
    """

    C: int
    x_star: float
    epsilon: float
    delta2: float
    run_rate: RunRate
    U_override: int | None = None
    regime: str = FIXED_ROWS
    area_rate: float | None = None

    def __post_init__(self):
        if self.regime not in (FIXED_ROWS, GROWING_ROWS):
            raise ValueError(f"unknown regime {self.regime!r}")
        p = self.p
        bound = 1.0 / (2 * self.C + 1)
        if not (p < bound):
            raise ValueError(
                f"significance threshold too low: p = {p:.4f} must stay below "
                f"1/(2C+1) = {bound:.4f}"
            )
        if abs(self.run_rate.p - p) > 1e-9 or self.run_rate.C != self.C:
            raise ValueError("run_rate provenance disagrees with the configuration")
        if self.regime == GROWING_ROWS and self.area_rate is None:
            raise ValueError("growing-m regime needs an area_rate")
        if self.U_override is not None and self.U_override < 1:
            raise ValueError(f"U_override must be >= 1, got {self.U_override}")

    @property
    def p(self) -> float:
        """Per-node significance probability under the null."""
        return 1.0 - normal_cdf(self.x_star)


def make_config(
    m: int,
    C: int = 1,
    x_star: float = DEFAULT_X_STAR,
    epsilon: float = DEFAULT_EPSILON,
    delta2: float = DEFAULT_DELTA2,
    run_rate: RunRate | None = None,
    regime: str = FIXED_ROWS,
    U_override: int | None = None,
    area_rate: float | None = None,
    seed: int = 0,
) -> DetectorConfig:
    """Resolve a configuration for m-row grids.

    The run rate is computed exactly when the row count permits, by Monte
    Carlo otherwise (seeded). In the growing-rows regime a missing
    ``area_rate`` is estimated on a fixed ladder of lattice sizes.
    """
    p = 1.0 - normal_cdf(x_star)
    if p <= 0.0:
        raise ValueError(
            f"x_star = {x_star:g} leaves no pixel significant under the standard "
            "normal null; standardize intensities or lower the threshold"
        )
    if run_rate is None:
        run_rate = resolve_run_rate(m, C, p, seed=seed)
    if regime == GROWING_ROWS and area_rate is None:
        area_rate = estimate_area_rate(p, C, _DEFAULT_AREA_SIZES, trials=24, seed=seed)
    return DetectorConfig(
        C=C,
        x_star=x_star,
        epsilon=epsilon,
        delta2=delta2,
        run_rate=run_rate,
        U_override=U_override,
        regime=regime,
        area_rate=area_rate,
    )


@dataclass(frozen=True)
class FrameStat:
    """Both statistics for one frame and whether an alarm fired."""

    index: int
    l0_length: int
    x_star_s: float
    alarm: bool


@dataclass(frozen=True)
class DetectionResult:
    """Decision, the stage that fired, both statistics, and a witness chain.

    ``x_star_s`` is None when Step I already rejected (the scan never ran)
    and the -inf sentinel when the scan ran over an empty significance map.
    """

    reject_null: bool
    deciding_stage: str  # "step1" | "step2" | "none"
    l0_length: int
    x_star_s: float | None
    thresholds: Thresholds
    witness: ChainPath | None


def _thresholds_for(config: DetectorConfig, m: int, n: int) -> Thresholds:
    if config.regime == GROWING_ROWS:
        step1 = (1.0 + config.epsilon / 2.0) * math.log(m * n) / config.area_rate
        step2 = math.sqrt(2.0 * (1.0 + config.delta2) * math.log(m * n))
        return Thresholds(step1, step2, config.x_star, config.epsilon, config.delta2)
    return decision_thresholds(
        n, m, config.run_rate.value, config.epsilon, config.delta2, config.x_star
    )


def _scan_cap(config: DetectorConfig, m: int, n: int) -> int:
    if config.U_override is not None:
        if config.U_override > n:
            raise ValueError(f"U_override {config.U_override} exceeds n = {n}")
        return config.U_override
    if config.regime == GROWING_ROWS:
        cap = math.ceil(3.0 * math.log(m * n) / config.area_rate)
    else:
        cap = math.ceil(3.0 * config.run_rate.log_columns(n))
    return max(1, min(n, cap))


def _check_geometry(config: DetectorConfig, grid: ImageGrid) -> None:
    if config.regime == FIXED_ROWS and grid.m != config.run_rate.m:
        raise ValueError(
            f"configuration was resolved for m = {config.run_rate.m}, grid has m = {grid.m}"
        )


def detect(grid: ImageGrid, config: DetectorConfig) -> DetectionResult:
    """Run the two-step detector on one grid.

    Deterministic: identical grid and configuration give identical results.
    The witness is the chain behind whichever statistic decided.
    """
    _check_geometry(config, grid)
    thr = _thresholds_for(config, grid.m, grid.n)
    sig = significance_map(grid, config.x_star)
    run = longest_run_length(sig, config.C, witness=False)
    if run.length > thr.step1:
        witness = longest_run_length(sig, config.C, witness=True).witness
        return DetectionResult(True, "step1", run.length, None, thr, witness)
    scan = scan_statistic(grid, sig, config.C, _scan_cap(config, grid.m, grid.n))
    if scan.value > thr.step2:
        return DetectionResult(True, "step2", run.length, scan.value, thr, scan.arg_chain)
    return DetectionResult(False, "none", run.length, scan.value, thr, None)


def _frame_stats(grid: ImageGrid, config: DetectorConfig) -> tuple[int, float]:
    sig = significance_map(grid, config.x_star)
    length = longest_run_length(sig, config.C, witness=False).length
    value = scan_statistic(
        grid, sig, config.C, _scan_cap(config, grid.m, grid.n), witness=False
    ).value
    return length, value


def detect_frames(
    frames,
    config: DetectorConfig,
    l0_alarm: float,
    scan_alarm: float,
    threads: int = 1,
) -> list[FrameStat]:
    """Per-frame statistics with alarms at fixed cuts.

    Frames are independent; an alarm fires when either statistic strictly
    exceeds its cut. Order of the output follows the input sequence.
    """
    frames = list(frames)
    if not frames:
        return []
    shape = (frames[0].m, frames[0].n)
    for k, frame in enumerate(frames):
        if (frame.m, frame.n) != shape:
            raise ValueError(
                f"frame {k} is {frame.m}x{frame.n}, expected {shape[0]}x{shape[1]}"
            )
    _check_geometry(config, frames[0])
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(lambda g: _frame_stats(g, config), frames))
    else:
        stats = [_frame_stats(g, config) for g in frames]
    out = []
    for k, (length, value) in enumerate(stats):
        alarm = (length > l0_alarm) or (value != UNREACHABLE and value > scan_alarm)
        out.append(FrameStat(k, length, value, alarm))
    return out
