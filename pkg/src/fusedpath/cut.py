"""
Fixed-lambda solver: ascending breakpoint scan over parametric minimum cuts.

For a fixed integer ``lam`` the chain graph has source arcs ``c_{s,i}``,
sink arcs ``c_{i,t}`` taken from the right slope of ``f_i`` at the current
breakpoint, and arcs of capacity ``lam`` between neighbours. The scan starts
with every node on the source side and visits the global breakpoints in
ascending order. Crossing breakpoint ``k`` only changes the terminal arcs of
its owner ``i_k``; the nodes that then leave the source side form one
interval around ``i_k`` and all take the value of that breakpoint. Ties are
resolved toward the larger source set, which yields the componentwise
largest optimal solution.

Capacities are kept as integers in units of ``1 / inst.slope_unit``.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UnassignedNode
from .instance import ProblemInstance

_INT64_SAFE = 2 ** 62


def _check_lambda(lam) -> int:
    if isinstance(lam, bool) or not isinstance(lam, (int, np.integer)):
        if isinstance(lam, Fraction) and lam.denominator == 1:
            lam = lam.numerator
        else:
            raise ValueError(f"lambda must be a non-negative integer, got {lam!r}")
    lam = int(lam)
    if lam < 0:
        raise ValueError(f"lambda must be a non-negative integer, got {lam}")
    return lam


@dataclass
class CutState:
    """Minimum-cut state of one scan.

    ``status[i]`` is True while node ``i`` is on the source side. ``cap_s``
    and ``cap_t`` are the scaled terminal capacities; ``smt = cap_s - cap_t``.
    ``sinks`` lists the sink-side nodes in ascending order.
    """

    status: np.ndarray
    cap_s: np.ndarray
    cap_t: np.ndarray
    smt: np.ndarray
    lam: int
    unit: int
    assigned: list
    sinks: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.status)

    @property
    def scaled_lambda(self) -> int:
        return self.lam * self.unit

    def source_set(self) -> frozenset:
        return frozenset(int(i) for i in np.flatnonzero(self.status))

    def source_capacities(self) -> list:
        return [Fraction(int(c), self.unit) for c in self.cap_s]

    def sink_capacities(self) -> list:
        return [Fraction(int(c), self.unit) for c in self.cap_t]


def init_cut_state(inst: ProblemInstance, lam) -> CutState:
    """All nodes on the source side with ``c_{s,i} = -w_{i,0}`` and ``c_{i,t} = 0``."""
    lam = _check_lambda(lam)
    first = inst.int_first_slopes
    bound = sum(abs(w) for w in first) + sum(abs(e[2]) for e in inst.int_events)
    bound += 2 * lam * inst.slope_unit
    dtype = np.int64 if bound < _INT64_SAFE else object
    cap_s = np.array([-w for w in first], dtype=dtype)
    return CutState(
        status=np.ones(inst.n, dtype=bool),
        cap_s=cap_s,
        cap_t=np.zeros(inst.n, dtype=dtype),
        smt=cap_s.copy(),
        lam=lam,
        unit=inst.slope_unit,
        assigned=[None] * inst.n,
    )


def apply_breakpoint(state: CutState, k: int, inst: ProblemInstance) -> CutState:
    """Move the terminal arcs of the owner of breakpoint ``k`` to its next slope.

    Only node ``i_k`` changes: ``(c_s, c_t)`` becomes ``(max(0, -w), max(0, w))``
    for the slope ``w`` right of the breakpoint. Mutates and returns ``state``.
    """
    node, w, _ = inst.int_events[k]
    state.cap_s[node] = -w if w < 0 else 0
    state.cap_t[node] = w if w > 0 else 0
    state.smt[node] = -w
    return state


def _run_bounds(state: CutState, node: int) -> tuple:
    pos = bisect_left(state.sinks, node)
    left = state.sinks[pos - 1] if pos > 0 else -1
    right = state.sinks[pos] if pos < len(state.sinks) else state.n
    return left, right, pos


def _best_side(values: np.ndarray, lam: int, edge: int):
    """Cheapest one-sided extension of the moved interval.

    ``values`` holds the per-node ``smt`` ordered outward from the pivot,
    over the rest of the source run. Extending by ``t`` nodes costs their
    sum plus the arc to the next node out: ``+lam`` while that node is still
    a source, ``edge`` once the run is exhausted (``-lam`` for a sink
    neighbour, 0 at the end of the chain). Returns ``(cost, t)``; ties keep
    the shorter extension.
    """
    m = len(values)
    cost = np.empty(m + 1, dtype=values.dtype)
    cost[0] = 0
    if m:
        cost[1:] = np.cumsum(values)
    cost[:m] += lam
    cost[m] += edge
    t = int(np.argmin(cost))
    return cost[t], t


def best_shift_interval(state: CutState, node: int):
    """Interval ``(l, r)`` of source nodes that must switch to the sink side.

    Considers every sub-interval of the source run around ``node`` that
    contains ``node`` and returns the one with the most negative change in
    cut capacity (the smallest such interval on ties), or ``None`` when no
    change is strictly negative or ``node`` is already a sink.
    """
    if not state.status[node]:
        return None
    left, right, _ = _run_bounds(state, node)
    lam = state.scaled_lambda
    left_edge = -lam if left >= 0 else 0
    right_edge = -lam if right < state.n else 0
    # the change splits into left part + pivot + right part
    a, nl = _best_side(state.smt[left + 1:node][::-1], lam, left_edge)
    b, nr = _best_side(state.smt[node + 1:right], lam, right_edge)
    if a + b + state.smt[node] < 0:
        return node - nl, node + nr
    return None


def shift_delta(state: CutState, l: int, r: int):
    """Scaled change in cut capacity if nodes ``l..r`` switch to the sink side."""
    lam = state.scaled_lambda
    total = sum(state.smt[l:r + 1])
    for nb in (l - 1, r + 1):
        if 0 <= nb < state.n:
            total += lam if state.status[nb] else -lam
    return total


def _flip(state: CutState, l: int, r: int, value) -> None:
    state.status[l:r + 1] = False
    for i in range(l, r + 1):
        state.assigned[i] = value
    pos = bisect_left(state.sinks, l)
    state.sinks[pos:pos] = range(l, r + 1)


def scan(inst: ProblemInstance, lam, on_step=None) -> CutState:
    """Run the full breakpoint scan and return the final state.

    ``on_step(k, state, shifted)`` is called after every breakpoint, with
    ``shifted`` the interval moved to the sink side (or ``None``).
    """
    state = init_cut_state(inst, lam)
    events = inst.events
    for k, (node, _, _) in enumerate(inst.int_events):
        apply_breakpoint(state, k, inst)
        shifted = best_shift_interval(state, node) if state.status[node] else None
        if shifted is not None:
            _flip(state, shifted[0], shifted[1], events[k].value)
        if on_step is not None:
            on_step(k, state, shifted)
    return state


def solve_fixed_lambda(inst: ProblemInstance, lam) -> list:
    """Componentwise-largest minimizer for one integer ``lam``.

    Raises
    ------
    UnassignedNode
        A node never left the source side (non-coercive input).
    """
    state = scan(inst, lam)
    missing = [i for i, v in enumerate(state.assigned) if v is None]
    if missing:
        raise UnassignedNode(f"nodes {missing} still on the source side after the last breakpoint")
    return list(state.assigned)
