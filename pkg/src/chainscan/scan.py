"""Normalized scan statistic over significant chains, capped at length U.

The statistic is the maximum over significant chains L (1 <= |L| <= U) of
sum of intensities over L divided by sqrt(|L|), so each candidate term is
standard normal under an i.i.d. N(0,1) field. Unreachable cells carry an
explicit -inf sentinel; a grid with no significant node scores -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from ._kernels import NEG_INF
from .errors import CapacityError
from .grid import ChainPath, ImageGrid, SignificanceMap

__all__ = ["UNREACHABLE", "ScanResult", "scan_statistic", "scan_bruteforce"]

UNREACHABLE = NEG_INF

_BRUTE_MAX_ROWS = 4
_BRUTE_MAX_COLS = 12


@dataclass(frozen=True)
class ScanResult:
    """Scan maximum, the chain achieving it, and that chain's length."""

    value: float
    arg_chain: ChainPath | None
    arg_length: int | None


def _check_pair(grid: ImageGrid, sig_map: SignificanceMap) -> None:
    if (grid.m, grid.n) != (sig_map.m, sig_map.n):
        raise ValueError(
            f"significance map {sig_map.m}x{sig_map.n} does not match grid {grid.m}x{grid.n}"
        )


def scan_statistic(
    grid: ImageGrid,
    sig_map: SignificanceMap,
    C: int,
    U: int,
    witness: bool = True,
) -> ScanResult:
    """Exact capped scan statistic via the length-indexed recursion.

    Layer u holds the best length-u significant-chain sum ending at each
    node; cells where no such chain exists are unreachable. Runs in
    O(C*m*n*U) worst case but stops early once every cell of a layer is
    unreachable (no longer chain can exist).
    """
    _check_pair(grid, sig_map)
    if C < 0:
        raise ValueError(f"drift bound C must be >= 0, got {C}")
    if not (1 <= U <= grid.n):
        raise ValueError(f"length cap U={U} outside [1, n={grid.n}]")
    value, i0, j0, u = _kernels.scan_best_single(grid.values, sig_map.bits, C, U)
    if value == UNREACHABLE:
        return ScanResult(UNREACHABLE, None, None)
    if not witness:
        return ScanResult(value, None, u)
    rows0 = _kernels.scan_backtrack(grid.values, sig_map.bits, C, i0, j0, u)
    chain = ChainPath(j0 - u + 2, tuple(r + 1 for r in rows0))
    return ScanResult(value, chain, u)


def scan_bruteforce(grid: ImageGrid, sig_map: SignificanceMap, C: int) -> float:
    """Exhaustive normalized maximum over every significant chain (no cap).

    Test oracle with the same enumeration guard style as the run oracle.
    """
    _check_pair(grid, sig_map)
    m, n = grid.m, grid.n
    if m > _BRUTE_MAX_ROWS or n > _BRUTE_MAX_COLS:
        raise CapacityError(
            f"brute force guarded to m <= {_BRUTE_MAX_ROWS} and n <= {_BRUTE_MAX_COLS}, "
            f"got {m}x{n}"
        )
    if C < 0:
        raise ValueError(f"drift bound C must be >= 0, got {C}")
    bits = sig_map.bits
    x = grid.values
    best = UNREACHABLE

    def extend(i: int, j: int, total: float, length: int) -> None:
        nonlocal best
        score = total / math.sqrt(length)
        if score > best:
            best = score
        if j + 1 >= n:
            return
        for i2 in range(max(0, i - C), min(m - 1, i + C) + 1):
            if bits[i2, j + 1]:
                extend(i2, j + 1, total + x[i2, j + 1], length + 1)

    for j in range(n):
        for i in range(m):
            if bits[i, j]:
                extend(i, j, x[i, j], 1)
    return best
