"""
Brute-force ground truth for the fused lasso on the breakpoint grid.

Optimal solutions can be taken from the set of breakpoint values, so every
routine here minimises over that grid directly, without cuts:

- ``full``: enumerate all ``G**n`` grid vectors (tiny instances only) and
  return the componentwise maximum of the optimal set, checking that it is
  itself optimal.
- ``maximal``: forward and backward min-sum dynamic programming; node ``i``
  takes the largest grid value whose max-marginal equals the optimum.
- ``objective``: forward dynamic programming only, for larger instances
  where just the optimal value is compared.

Costs are scaled to integers so all comparisons are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import TooLarge
from .fusing import compute_group
from .instance import ProblemInstance
from .pwl import evaluate

FULL_MAX_N = 5
FULL_MAX_Q = 10
MODES = ("full", "maximal", "objective")


class LatticeViolation(AssertionError):
    """The componentwise maximum of the optimal set is not optimal."""


def _grid_costs(inst: ProblemInstance, grid: tuple, lam: int):
    """Integer unary table ``U[i, b]``, pairwise table ``P[a, b]`` and the scale."""
    table = [[evaluate(f, g) for g in grid] for f in inst.losses]
    return _scaled_tables(table, grid, lam)


def _scaled_tables(table: list, grid: tuple, lam: int):
    scale = 1
    for row in table:
        for v in row:
            scale = math.lcm(scale, Fraction(v).denominator)
    for g in grid:
        scale = math.lcm(scale, g.denominator)
    U = [[int(v * scale) for v in row] for row in table]
    gs = [int(g * scale) for g in grid]
    P = [[lam * abs(a - b) for b in gs] for a in gs]
    big = (max((abs(v) for row in U for v in row), default=0)
           + max((max(r) for r in P), default=0)) * len(table)
    dtype = np.int64 if big < 2 ** 60 else object
    return np.array(U, dtype=dtype), np.array(P, dtype=dtype), scale


def _forward(U, P):
    n = U.shape[0]
    F = np.empty_like(U)
    F[0] = U[0]
    for i in range(1, n):
        F[i] = U[i] + (F[i - 1][:, None] + P).min(axis=0)
    return F


def _backward(U, P):
    n = U.shape[0]
    B = np.empty_like(U)
    B[-1] = U[-1]
    for i in range(n - 2, -1, -1):
        B[i] = U[i] + (P + B[i + 1][None, :]).min(axis=1)
    return B


def brute_force_fixed(inst: ProblemInstance, lam: int, mode: str = "full"):
    """Minimum objective and a canonical minimiser over the breakpoint grid.

    Parameters
    ----------
    mode : {"full", "maximal", "objective"}
        ``objective`` returns ``(value, None)``.

    Returns
    -------
    (Fraction, list or None)

    Raises
    ------
    TooLarge
        ``full`` mode on an instance with ``n > 5`` or ``q > 10``.
    LatticeViolation
        The componentwise maximum of the optimal set is not optimal.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    grid = inst.grid
    if mode == "full":
        if inst.n > FULL_MAX_N or inst.q > FULL_MAX_Q:
            raise TooLarge(f"full enumeration needs n <= {FULL_MAX_N} and q <= {FULL_MAX_Q}")
        return _enumerate(inst, lam, grid)[:2]
    if mode == "objective":
        U, P, scale = _grid_costs(inst, grid, lam)
        return Fraction(int(_forward(U, P)[-1].min()), scale), None
    table = [[evaluate(f, g) for g in grid] for f in inst.losses]
    value, x = grid_minimize(table, grid, lam)
    if inst.objective(x, lam) != value:
        raise LatticeViolation(f"componentwise max {x} is not optimal at lambda {lam}")
    return value, x


def grid_minimize(table: list, grid, lam: int):
    """Minimise ``sum_i table[i][b_i] + lam * sum_i |grid[b_i] - grid[b_{i+1}]|``.

    ``table[i][b]`` is the exact loss of node ``i`` at ``grid[b]`` (any
    convex or non-convex values). Returns the optimum and the componentwise
    largest optimal grid vector.
    """
    grid = tuple(Fraction(g) for g in grid)
    U, P, scale = _scaled_tables(table, grid, lam)
    F = _forward(U, P)
    best = F[-1].min()
    marg = F + _backward(U, P) - U
    x = [grid[int(np.flatnonzero(row == best).max())] for row in marg]
    return Fraction(int(best), scale), x


def _enumerate(inst: ProblemInstance, lam: int, grid: tuple):
    U, P, scale = _grid_costs(inst, grid, lam)
    U = U.tolist()
    P = P.tolist()
    best = None
    optimal = []
    for combo in itertools.product(range(len(grid)), repeat=inst.n):
        c = sum(U[i][b] for i, b in enumerate(combo))
        c += sum(P[a][b] for a, b in zip(combo, combo[1:]))
        if best is None or c < best:
            best, optimal = c, [combo]
        elif c == best:
            optimal.append(combo)
    top = tuple(max(col) for col in zip(*optimal))
    if top not in optimal:
        raise LatticeViolation(f"componentwise max is not optimal at lambda {lam}")
    return Fraction(best, scale), [grid[b] for b in top], [[grid[b] for b in o] for o in optimal]


def optimal_set(inst: ProblemInstance, lam: int) -> list:
    """Every optimal grid vector (tiny instances only)."""
    if inst.n > FULL_MAX_N or inst.q > FULL_MAX_Q:
        raise TooLarge(f"full enumeration needs n <= {FULL_MAX_N} and q <= {FULL_MAX_Q}")
    return _enumerate(inst, lam, inst.grid)[2]


def midpoint_check(inst: ProblemInstance, lam: int) -> bool:
    """True when adding midpoints between breakpoints does not lower the optimum."""
    grid = inst.grid
    fine = sorted(set(grid) | {(a + b) / 2 for a, b in zip(grid, grid[1:])})
    U, P, scale = _grid_costs(inst, tuple(fine), lam)
    fine_best = Fraction(int(_forward(U, P)[-1].min()), scale)
    return fine_best >= brute_force_fixed(inst, lam, "objective")[0]


@dataclass
class OracleEntry:
    lam: int
    objective: Fraction
    solution: Optional[list]
    group: Optional[tuple]
    optimal_count: Optional[int] = None


@dataclass
class Mismatch:
    lam: int
    node: Optional[int]
    expected: object
    got: object

    def __str__(self):
        where = "objective" if self.node is None else f"x[{self.node}]"
        return f"lambda={self.lam} {where}: expected {self.expected}, got {self.got}"


@dataclass
class OracleReport:
    """Per-lambda oracle results and, after :func:`verify_path`, the mismatches."""

    mode: str
    entries: list
    fusing_events: list
    mismatches: list = field(default_factory=list)
    persistence_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def solutions(self) -> dict:
        return {e.lam: e.solution for e in self.entries}


def persistence_violations(groups: list) -> list:
    """``(lam, i)`` where pair ``(i, i+1)`` is fused at ``lam - 1`` but not at ``lam``.

    ``groups`` is a list of ``(lam, group)`` in increasing lambda order.
    """
    out = []
    for (_, g0), (lam, g1) in zip(groups, groups[1:]):
        for i in range(len(g0) - 1):
            if g0[i] == g0[i + 1] and g1[i] != g1[i + 1]:
                out.append((lam, i))
    return out


def sweep(inst: ProblemInstance, lambda_hi: int, mode: str = "maximal") -> OracleReport:
    """Oracle solutions for every integer lambda in ``[0, lambda_hi]``."""
    if lambda_hi < 0:
        raise ValueError("lambda_hi must be non-negative")
    entries = []
    for lam in range(lambda_hi + 1):
        if mode == "full":
            obj, x, opt = _check_full(inst, lam)
            entries.append(OracleEntry(lam, obj, x, compute_group(x), len(opt)))
        else:
            obj, x = brute_force_fixed(inst, lam, mode)
            entries.append(OracleEntry(lam, obj, x, compute_group(x) if x else None))
    events = [e.lam for prev, e in zip(entries, entries[1:])
              if e.group is not None and e.group != prev.group]
    report = OracleReport(mode, entries, events)
    if mode != "objective":
        report.persistence_violations = persistence_violations([(e.lam, e.group) for e in entries])
    return report


def _check_full(inst, lam):
    if inst.n > FULL_MAX_N or inst.q > FULL_MAX_Q:
        raise TooLarge(f"full enumeration needs n <= {FULL_MAX_N} and q <= {FULL_MAX_Q}")
    return _enumerate(inst, lam, inst.grid)


def verify_path(path, baseline: OracleReport) -> OracleReport:
    """Compare ``path`` against ``baseline`` at every swept lambda.

    Solutions are compared node by node when the baseline has them,
    otherwise objectives are compared.
    """
    from .path import eval_path

    inst = path.inst
    mismatches = []
    for e in baseline.entries:
        x = eval_path(path, e.lam)
        if e.solution is None:
            got = inst.objective(x, e.lam)
            if got != e.objective:
                mismatches.append(Mismatch(e.lam, None, e.objective, got))
            continue
        for i, (a, b) in enumerate(zip(e.solution, x)):
            if a != b:
                mismatches.append(Mismatch(e.lam, i, a, b))
    return OracleReport(baseline.mode, baseline.entries, baseline.fusing_events,
                        mismatches, baseline.persistence_violations)
