"""
Fusing values: the integer lambdas at which adjacent variables merge.

The solution at ``lam`` is summarised by a group bit array (the bit flips
whenever two neighbours differ). Groups only coarsen as ``lam`` grows, so a
recursive bisection between ``0`` and ``lambda_max`` finds every change with
O(n log lambda_max) fixed-lambda solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cut import solve_fixed_lambda
from .instance import ProblemInstance


def compute_group(solution: Sequence) -> tuple:
    """Group bits of ``solution``: the first bit is 1 and a bit flips at each value change.

    >>> compute_group([1, 3, 3, 5, 3])
    (1, 0, 0, 1, 0)
    """
    if len(solution) == 0:
        raise ValueError("empty solution")
    bits = [1]
    for prev, cur in zip(solution, solution[1:]):
        bits.append(bits[-1] if cur == prev else 1 - bits[-1])
    return tuple(bits)


def fused_pairs(group: Sequence[int]) -> frozenset:
    """Indices ``i`` with ``x_i == x_{i+1}`` under ``group``."""
    return frozenset(i for i in range(len(group) - 1) if group[i] == group[i + 1])


def lambda_max(inst: ProblemInstance) -> int:
    """A lambda at which every variable takes the same value.

    ``ceil(gap / a_min) + 1`` where ``gap = sum f_i(0) - sum min f_i`` and
    ``a_min`` is the smallest positive distance between breakpoint values.
    With a single distinct breakpoint value the answer is 1.
    """
    grid = inst.grid
    if len(grid) < 2:
        return 1
    a_min = min(b - a for a, b in zip(grid, grid[1:]))
    return math.ceil(inst.value_gap() / a_min) + 1


@dataclass
class FusingSchedule:
    """Sorted ``(lambda, group)`` pairs; ``entries[0]`` is at lambda 0."""

    entries: list
    lambda_max: int = 0
    n_solves: int = 0
    solutions: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return len(self.entries) - 1

    @property
    def lambdas(self) -> list:
        return [lam for lam, _ in self.entries]

    @property
    def groups(self) -> list:
        return [g for _, g in self.entries]

    def segment(self, j: int) -> tuple:
        """``(lo, hi)`` lambda range of segment ``j``; ``hi`` is None for the last one."""
        lo = self.entries[j][0]
        hi = self.entries[j + 1][0] - 1 if j + 1 < len(self.entries) else None
        return lo, hi


def search_fusing_values(lam_l: int, g_l: tuple, lam_u: int, g_u: tuple, acc: dict,
                         solve: Callable[[int], tuple]) -> dict:
    """Record every group change strictly inside ``(lam_l, lam_u]``.

    ``acc`` maps lambda to group and must already hold ``lam_u -> g_u``.
    When the midpoint group matches ``g_u`` the ``lam_u`` entry is moved down
    to the midpoint. ``solve(lam)`` returns the group at ``lam``.
    """
    if lam_u - lam_l <= 1 or g_l == g_u:
        return acc
    lam_m = (lam_l + lam_u) // 2
    g_m = solve(lam_m)
    if g_m != g_l and g_m != g_u:
        acc[lam_m] = g_m
        search_fusing_values(lam_l, g_l, lam_m, g_m, acc, solve)
        search_fusing_values(lam_m, g_m, lam_u, g_u, acc, solve)
    elif g_m == g_l:
        search_fusing_values(lam_m, g_m, lam_u, g_u, acc, solve)
    else:
        del acc[lam_u]
        acc[lam_m] = g_u
        search_fusing_values(lam_l, g_l, lam_m, g_m, acc, solve)
    return acc


def find_all_fusing_values(inst: ProblemInstance, solver=solve_fixed_lambda) -> FusingSchedule:
    """Every fusing lambda with its group, starting from lambda 0."""
    lmax = lambda_max(inst)
    solutions = {}

    def solve(lam: int) -> tuple:
        x = solver(inst, lam)
        solutions[lam] = x
        return compute_group(x)

    g0 = solve(0)
    acc = {0: g0}
    if g0 != tuple([1] * inst.n):
        g_max = solve(lmax)
        acc[lmax] = g_max
        search_fusing_values(0, g0, lmax, g_max, acc, solve)
    entries = sorted(acc.items())
    return FusingSchedule(entries, lmax, len(solutions), solutions)


def solve_bound(p: int, lmax: int) -> int:
    """Generous bound on the solves used by :func:`find_all_fusing_values`."""
    return 4 * (p + 2) * (math.ceil(math.log2(max(lmax, 2))) + 1)

