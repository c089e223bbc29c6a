"""Longest significant chain: exact dynamic program and exhaustive oracle.

The recursion advances one column per step; a chain ending at (i, j) extends
any chain ending in column j-1 at a row within C of i. Cost is O(C*m*n).
"""

from __future__ import annotations

from dataclasses import dataclass


from . import _kernels
from .errors import CapacityError
from .grid import ChainPath, SignificanceMap

__all__ = ["RunResult", "longest_run_length", "longest_run_bruteforce"]

_BRUTE_MAX_CELLS = 64
_BRUTE_MAX_COLS = 12


@dataclass(frozen=True)
class RunResult:
    """Longest-run length (node count) and, when requested, a witness chain."""

    length: int
    witness: ChainPath | None


def longest_run_length(sig_map: SignificanceMap, C: int, witness: bool = True) -> RunResult:
    """Exact longest significant chain length under drift bound C.

    With ``witness=True`` a maximal chain is reconstructed by backtracking
    (ties toward the smallest row). ``witness=False`` skips reconstruction
    and uses a layer-propagation engine whose cost scales with the answer
    rather than with the cap, which is much faster on large sparse maps.
    """
    if C < 0:
        raise ValueError(f"drift bound C must be >= 0, got {C}")
    if not witness:
        return RunResult(_kernels.chain_length_single(sig_map.bits, C), None)
    length, start0, rows0 = _kernels.longest_chain_with_witness(sig_map.bits, C)
    if length == 0:
        return RunResult(0, None)
    return RunResult(length, ChainPath(start0 + 1, tuple(r + 1 for r in rows0)))


def longest_run_bruteforce(sig_map: SignificanceMap, C: int) -> int:
    """Exhaustive maximum over every start node and drift sequence.

    Test oracle: enumerates all significant chains directly. Guarded to
    m*n <= 64 and n <= 12 since the chain count grows like (2C+1)^n.
    """
    m, n = sig_map.m, sig_map.n
    if m * n > _BRUTE_MAX_CELLS or n > _BRUTE_MAX_COLS:
        raise CapacityError(
            f"brute force guarded to m*n <= {_BRUTE_MAX_CELLS} and n <= {_BRUTE_MAX_COLS}, "
            f"got {m}x{n}"
        )
    if C < 0:
        raise ValueError(f"drift bound C must be >= 0, got {C}")
    bits = sig_map.bits
    best = 0

    def extend(i: int, j: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
        if j + 1 >= n:
            return
        for i2 in range(max(0, i - C), min(m - 1, i + C) + 1):
            if bits[i2, j + 1]:
                extend(i2, j + 1, length + 1)

    for j in range(n):
        for i in range(m):
            if bits[i, j]:
                extend(i, j, 1)
    return best
