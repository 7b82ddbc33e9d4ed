"""
Integer-lambda solution path.

Between consecutive fusing values the fused groups are fixed, so the chain
collapses to super-nodes that never merge. Scanning the breakpoints once
with lambda left symbolic, each step can only move the super-node that owns
the breakpoint, and the set of lambdas for which it is on the sink side is
an interval computed from its ``smt = c_s - c_t`` and its neighbours' sink
intervals. Every interval that joins the sink side at step ``k`` gets the
breakpoint value ``a_k``.

Sink thresholds follow the tie rule of the fixed-lambda solver (a zero cut
change keeps the node on the source side): an interior super-node with both
neighbours on the sink side moves when ``2 * lam > smt``, i.e. from
``floor(smt / 2) + 1``; with both neighbours on the source side it moves
while ``2 * lam < tms``, i.e. up to ``ceil(tms / 2) - 1``. End super-nodes
use the same rules without the factor 2. ``rounding="ceil_floor"`` switches
to ``ceil(smt / 2)`` and ``floor(tms / 2)`` with neighbour sink intervals
assumed to start at the segment's lower end; that variant disagrees with
the maximal solution whenever ``smt / 2`` or ``tms / 2`` is an integer and
is kept only to demonstrate the difference.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import OverlappingInsert, UncoveredLambda
from .fusing import FusingSchedule, compute_group, find_all_fusing_values
from .instance import ProblemInstance

def _le(a: int, b: Optional[int]) -> bool:
    return b is None or a <= b


@dataclass(frozen=True)
class LambdaInterval:
    """Closed integer interval ``[lo, hi]``; ``hi=None`` means unbounded.

    Empty intervals are encoded as ``lo == hi + 1``.
    """

    lo: int
    hi: Optional[int]

    @property
    def empty(self) -> bool:
        return self.hi is not None and self.lo > self.hi

    def __contains__(self, lam: int) -> bool:
        return self.lo <= lam and _le(lam, self.hi)

    @classmethod
    def empty_at(cls, lo: int) -> "LambdaInterval":
        return cls(lo, lo - 1)


class IntervalMap:
    """Disjoint integer intervals with values, kept sorted for point location.

    Inserts are checked against existing intervals and raise
    :class:`OverlappingInsert` on any intersection.
    """

    def __init__(self):
        self.los: list = []
        self.his: list = []
        self.values: list = []

    def __len__(self):
        return len(self.los)

    def __iter__(self):
        return iter(zip(self.los, self.his, self.values))

    def items(self) -> list:
        return list(self)

    def insert(self, lo: int, hi: Optional[int], value) -> None:
        if not _le(lo, hi):
            raise ValueError(f"empty interval [{lo}, {hi}]")
        pos = bisect_left(self.los, lo)
        if pos > 0 and _le(lo, self.his[pos - 1]):
            raise OverlappingInsert(f"[{lo}, {hi}] overlaps [{self.los[pos - 1]}, {self.his[pos - 1]}]")
        if pos < len(self.los) and _le(self.los[pos], hi):
            raise OverlappingInsert(f"[{lo}, {hi}] overlaps [{self.los[pos]}, {self.his[pos]}]")
        self.los.insert(pos, lo)
        self.his.insert(pos, hi)
        self.values.insert(pos, value)

    def locate(self, lam: int):
        """``(lo, hi, value)`` of the interval containing ``lam``, or None."""
        pos = bisect_right(self.los, lam) - 1
        if pos >= 0 and _le(lam, self.his[pos]):
            return self.los[pos], self.his[pos], self.values[pos]
        return None

    def covers(self, lo: int, hi: Optional[int]) -> bool:
        """True when the intervals tile ``[lo, hi]`` without gaps."""
        if not self.los or self.los[0] > lo:
            return False
        reach = lo - 1
        for a, b in zip(self.los, self.his):
            if a > reach + 1:
                return False
            if b is None:
                return True
            reach = max(reach, b)
            if hi is not None and reach >= hi:
                return True
        return hi is not None and reach >= hi

    def extend_last(self, old_hi: int, new_hi: Optional[int]) -> None:
        if self.his and self.his[-1] == old_hi:
            self.his[-1] = new_hi

    def merged(self) -> list:
        """Maximal constant intervals: neighbours with equal values joined."""
        out = []
        for lo, hi, v in self:
            if out and out[-1][2] == v and out[-1][1] is not None and out[-1][1] + 1 == lo:
                out[-1] = (out[-1][0], hi, v)
            else:
                out.append((lo, hi, v))
        return out


def group_table(group) -> list:
    """Node to super-node table (0-based): one entry per node, constant on fused runs."""
    tb = [0]
    for prev, cur in zip(group, group[1:]):
        tb.append(tb[-1] if cur == prev else tb[-1] + 1)
    return tb


@dataclass
class ReducedProblem:
    """The chain of super-nodes valid on ``[lambda_lo, lambda_hi]``.

    ``lambda_hi`` is None for the last segment.
    """

    j: int
    lambda_lo: int
    lambda_hi: Optional[int]
    group: tuple
    tb: list

    @property
    def n_super(self) -> int:
        return self.tb[-1] + 1

    def members(self) -> list:
        """``(first, last)`` node of every super-node."""
        out = []
        for i, t in enumerate(self.tb):
            if t == len(out):
                out.append([i, i])
            else:
                out[-1][1] = i
        return [tuple(m) for m in out]


def build_reduced_problem(inst: ProblemInstance, entry: tuple, next_lambda: Optional[int],
                          j: int = 0) -> ReducedProblem:
    lam, group = entry
    if len(group) != inst.n:
        raise ValueError(f"group has {len(group)} bits for {inst.n} nodes")
    hi = None if next_lambda is None else next_lambda - 1
    return ReducedProblem(j, lam, hi, tuple(group), group_table(group))


def init_smt(reduced: ReducedProblem, inst: ProblemInstance) -> list:
    """Scaled ``c_s`` of every super-node: its members' negated first slopes, summed."""
    sa = inst.source_prefix
    return [sa[b + 1] - sa[a] for a, b in reduced.members()]


@dataclass
class Insertion:
    """One interval added to a super-node's tree at scan step ``k``."""

    k: int
    node: int
    lo: int
    hi: Optional[int]
    value: Fraction


@dataclass
class ScanState:
    """Per-super-node scan data for one reduced problem.

    ``smt`` is scaled by ``unit``. ``sink`` holds the current sink interval,
    ``trees`` the value intervals, ``events[k]`` the insertions made at step
    ``k``, and ``boundaries`` every ``t`` for which a threshold separated
    ``t`` from ``t + 1``.
    """

    smt: list
    sink: list
    trees: list
    unit: int
    events: dict = field(default_factory=dict)
    boundaries: set = field(default_factory=set)
    smt_history: list = field(default_factory=list)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


ROUNDINGS = ("tie_aware", "ceil_floor")


def _thresholds(smt: int, den: int, rounding: str) -> tuple:
    """``(first lambda moved when neighbours are sinks, last lambda moved when sources)``."""
    if rounding == "ceil_floor":
        return _ceil_div(smt, den), _floor_div(-smt, den)
    return _floor_div(smt, den) + 1, _ceil_div(-smt, den) - 1


def compute_lambda_breakpoint(I: int, n_super: int, lam_lo: int, lam_hi: int, state: ScanState,
                              value, k: int = -1, rounding: str = "tie_aware") -> ScanState:
    """Extend the sink interval of super-node ``I`` after its ``smt`` changed at step ``k``.

    ``lam_hi`` is the last lambda of the segment (finite: the open last
    segment is scanned up to a finite bound and extended afterwards).
    """
    smt = state.smt[I]
    nbrs = [state.sink[J] for J in (I - 1, I + 1) if 0 <= J < n_super]
    den = state.unit * len(nbrs)
    if not nbrs:
        # a lone super-node has no coupling: sink as soon as smt < 0
        if smt < 0:
            update_lambda_breakpoint(I, LambdaInterval(lam_lo, lam_hi), value, state, k)
        return state

    t_lo, t_hi = _thresholds(smt, den, rounding)
    if rounding == "ceil_floor":
        if smt >= 0:
            if all(not s.empty for s in nbrs):
                lo = max(t_lo, lam_lo)
                hi = min(s.hi for s in nbrs)
                state.boundaries.add(t_lo - 1)
                update_lambda_breakpoint(I, LambdaInterval(lo, hi), value, state, k)
        else:
            hi = max(max(s.hi for s in nbrs), min(t_hi, lam_hi))
            state.boundaries.add(t_hi)
            update_lambda_breakpoint(I, LambdaInterval(lam_lo, hi), value, state, k)
        return state

    if smt >= 0:
        # moves only where every neighbour is a sink and lam >= t_lo
        lo = max([t_lo, lam_lo] + [s.lo for s in nbrs])
        hi = min([lam_hi] + [s.hi for s in nbrs])
        state.boundaries.add(t_lo - 1)
        pieces = [LambdaInterval(lo, hi)]
    else:
        # moves where some neighbour is a sink or lam <= t_hi
        state.boundaries.add(t_hi)
        pieces = [LambdaInterval(lam_lo, min(t_hi, lam_hi))] + list(nbrs)
    pieces = [p for p in pieces if not p.empty]
    if pieces:
        update_lambda_breakpoint(I, _hull(pieces + [state.sink[I]], I), value, state, k)
    return state


def _hull(pieces: list, I: int) -> LambdaInterval:
    """Smallest interval containing ``pieces``; they must leave no gap."""
    pieces = sorted((p for p in pieces if not p.empty), key=lambda p: p.lo)
    lo, hi = pieces[0].lo, pieces[0].hi
    for p in pieces[1:]:
        if p.lo > hi + 1:
            raise OverlappingInsert(
                f"sink lambdas of super-node {I} split into [{lo}, {hi}] and [{p.lo}, {p.hi}]"
            )
        hi = max(hi, p.hi)
    return LambdaInterval(lo, hi)


def update_lambda_breakpoint(I: int, cand: LambdaInterval, value, state: ScanState,
                             k: int = -1) -> ScanState:
    """Add the parts of ``cand`` outside the current sink interval with ``value``."""
    if cand.empty:
        return state
    sink = state.sink[I]
    new = []
    if sink.empty:
        new.append((cand.lo, cand.hi))
        state.sink[I] = cand
    else:
        lo, hi = sink.lo, sink.hi
        if cand.lo < sink.lo:
            new.append((cand.lo, sink.lo - 1))
            lo = cand.lo
        if cand.hi > sink.hi:
            new.append((sink.hi + 1, cand.hi))
            hi = cand.hi
        state.sink[I] = LambdaInterval(lo, hi)
    for a, b in new:
        state.trees[I].insert(a, b, value)
        state.events.setdefault(k, []).append(Insertion(k, I, a, b, value))
    return state


def _scan_ceiling(inst: ProblemInstance, lam_lo: int) -> int:
    """A lambda beyond which no threshold of any super-node can fall."""
    bound = 0
    for f in inst.losses:
        bound += max(abs(f.slopes[0]), abs(f.slopes[-1]))
    return max(lam_lo, int(bound) + 2)


@dataclass
class Segment:
    """Solved reduced problem: trees per super-node plus scan records."""

    reduced: ReducedProblem
    trees: list
    events: dict
    boundaries: set
    scan_hi: int
    smt_history: list

    @property
    def lo(self) -> int:
        return self.reduced.lambda_lo

    @property
    def hi(self) -> Optional[int]:
        return self.reduced.lambda_hi

    @property
    def tb(self) -> list:
        return self.reduced.tb

    @property
    def n_super(self) -> int:
        return self.reduced.n_super

    def values_at(self, lam: int) -> list:
        out = []
        for I, tree in enumerate(self.trees):
            hit = tree.locate(lam)
            if hit is None:
                raise UncoveredLambda(f"super-node {I} has no value at lambda {lam}")
            out.append(hit[2])
        return out

    def breakpoint_count(self) -> int:
        """Value changes inside the segment, summed over super-nodes."""
        return sum(len(t.merged()) - 1 for t in self.trees)


def solve_reduced_plfl(reduced: ReducedProblem, inst: ProblemInstance,
                       rounding: str = "tie_aware") -> Segment:
    """Scan all breakpoints once for the super-node chain of ``reduced``."""
    if rounding not in ROUNDINGS:
        raise ValueError(f"rounding must be one of {ROUNDINGS}, got {rounding!r}")
    lam_lo = reduced.lambda_lo
    scan_hi = reduced.lambda_hi if reduced.lambda_hi is not None else _scan_ceiling(inst, lam_lo)
    m = reduced.n_super
    state = ScanState(
        smt=init_smt(reduced, inst),
        sink=[LambdaInterval.empty_at(lam_lo) for _ in range(m)],
        trees=[IntervalMap() for _ in range(m)],
        unit=inst.slope_unit,
    )
    tb = reduced.tb
    for k, ((node, _, jump), ev) in enumerate(zip(inst.int_events, inst.events)):
        I = tb[node]
        state.smt[I] -= jump
        state.smt_history.append((k, I, state.smt[I]))
        compute_lambda_breakpoint(I, m, lam_lo, scan_hi, state, ev.value, k, rounding)
    for I, tree in enumerate(state.trees):
        if not tree.covers(lam_lo, scan_hi):
            raise UncoveredLambda(
                f"segment {reduced.j}: super-node {I} not covered on [{lam_lo}, {scan_hi}]"
            )
    if reduced.lambda_hi is None:
        for tree in state.trees:
            tree.extend_last(scan_hi, None)
        for ins in (x for lst in state.events.values() for x in lst):
            if ins.hi == scan_hi:
                ins.hi = None
    return Segment(reduced, state.trees, state.events, state.boundaries, scan_hi,
                   state.smt_history)


@dataclass
class SolutionPath:
    """Solutions for every integer lambda >= 0, one segment per fusing value."""

    inst: ProblemInstance
    schedule: FusingSchedule
    segments: list

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def lambdas(self) -> list:
        return [s.lo for s in self.segments]

    def segment_index(self, lam: int) -> int:
        return bisect_right(self.lambdas, lam) - 1

    def node_path(self, i: int) -> list:
        """Maximal constant intervals ``(lo, hi, value)`` of ``x_i`` over all lambdas."""
        out = []
        for seg in self.segments:
            for lo, hi, v in seg.trees[seg.tb[i]].merged():
                if out and out[-1][2] == v and out[-1][1] is not None and out[-1][1] + 1 == lo:
                    out[-1] = (out[-1][0], hi, v)
                else:
                    out.append((lo, hi, v))
        return out

    def breakpoint_counts(self) -> list:
        return [seg.breakpoint_count() for seg in self.segments]

    def total_breakpoints(self) -> int:
        """Per-segment value changes plus one per fusing value after the first."""
        return sum(self.breakpoint_counts()) + len(self.segments) - 1

    def node_breakpoints(self) -> int:
        """Value changes of all ``x_i`` over lambda, summed over nodes."""
        return sum(len(self.node_path(i)) - 1 for i in range(self.n))


def solve_full_path(inst: ProblemInstance, rounding: str = "tie_aware",
                    schedule: Optional[FusingSchedule] = None) -> SolutionPath:
    """Fusing schedule plus one reduced-problem scan per segment."""
    if schedule is None:
        schedule = find_all_fusing_values(inst)
    entries = schedule.entries
    segments = []
    for j, entry in enumerate(entries):
        nxt = entries[j + 1][0] if j + 1 < len(entries) else None
        reduced = build_reduced_problem(inst, entry, nxt, j)
        segments.append(solve_reduced_plfl(reduced, inst, rounding))
    return SolutionPath(inst, schedule, segments)


def eval_path(path: SolutionPath, lam: int) -> list:
    """Solution at integer ``lam`` read off the path."""
    if isinstance(lam, bool) or int(lam) != lam or lam < 0:
        raise ValueError(f"lambda must be a non-negative integer, got {lam!r}")
    seg = path.segments[path.segment_index(int(lam))]
    vals = seg.values_at(int(lam))
    return [vals[t] for t in seg.tb]


def inverse_query(path: SolutionPath, i_l: int, i_r: int, k: int):
    """Lambdas where ``x_{i_l} = ... = x_{i_r}`` equals the value of breakpoint ``k``.

    Indices are 0-based. Returns a sorted list of disjoint, non-adjacent
    :class:`LambdaInterval` or None when no lambda qualifies. All breakpoints
    sharing the value of breakpoint ``k`` count, since the solution only
    sees values.
    """
    n, q = path.n, path.inst.q
    if not (0 <= i_l <= i_r < n):
        raise IndexError(f"need 0 <= i_l <= i_r < {n}, got {i_l}, {i_r}")
    if not (0 <= k < q):
        raise IndexError(f"breakpoint index must be in [0, {q}), got {k}")
    target = path.inst.events[k].value
    segs = path.segments
    # fused groups only grow, so the first segment joining i_l..i_r is found by bisection
    lo, hi = 0, len(segs)
    while lo < hi:
        mid = (lo + hi) // 2
        if segs[mid].tb[i_l] == segs[mid].tb[i_r]:
            hi = mid
        else:
            lo = mid + 1
    found = []
    for seg in segs[lo:]:
        I = seg.tb[i_l]
        for a, b, v in seg.trees[I]:
            if v == target:
                found.append((a, b))
    if not found:
        return None
    found.sort()
    out = [list(found[0])]
    for a, b in found[1:]:
        last = out[-1]
        if last[1] is not None and a <= last[1] + 1:
            last[1] = None if b is None else max(last[1], b)
        elif last[1] is None:
            continue
        else:
            out.append([a, b])
    return [LambdaInterval(a, b) for a, b in out]


def segment_groups(path: SolutionPath) -> list:
    """Group bits of each segment recomputed from its values at the segment start."""
    return [compute_group(eval_path(path, seg.lo)) for seg in path.segments]


def is_quasi_convex(values: list) -> bool:
    """Strictly decreasing, then strictly increasing (either part may be empty)."""
    i = 1
    while i < len(values) and values[i] < values[i - 1]:
        i += 1
    while i < len(values) and values[i] > values[i - 1]:
        i += 1
    return i >= len(values)


def quasi_convexity_violations(path: SolutionPath) -> list:
    """``(segment, super-node)`` pairs whose value sequence is not valley-shaped."""
    out = []
    for j, seg in enumerate(path.segments):
        for I, tree in enumerate(seg.trees):
            if not is_quasi_convex([v for _, _, v in tree.merged()]):
                out.append((j, I))
    return out


def provenance_violations(path: SolutionPath) -> list:
    """Interval ends inside a segment that no recorded threshold explains.

    A boundary ``t`` separates ``t`` from ``t + 1``; every such boundary in
    a super-node tree must coincide with a threshold computed during the
    segment's scan.
    """
    out = []
    for j, seg in enumerate(path.segments):
        for I, tree in enumerate(seg.trees):
            for lo, hi, _ in tree:
                if lo > seg.lo and lo - 1 not in seg.boundaries:
                    out.append((j, I, lo - 1))
                if hi is not None and hi < seg.scan_hi and hi not in seg.boundaries:
                    out.append((j, I, hi))
    return out
