"""Problem instances: n convex PWL losses and their merged breakpoint index."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .pwl import ConvexPWL, evaluate, minimum_value


@dataclass(frozen=True)
class BreakpointEvent:
    """One entry of the global breakpoint index.

    ``owner`` is the (0-based) node whose loss has a kink at ``value``;
    crossing it changes that loss's right slope from ``slope_before`` to
    ``slope_after``.
    """

    value: Fraction
    owner: int
    slope_before: Fraction
    slope_after: Fraction

    @property
    def jump(self) -> Fraction:
        return self.slope_after - self.slope_before


class ProblemInstance:
    """The fused lasso ``sum_i f_i(x_i) + lam * sum_i |x_i - x_{i+1}|``.

    Parameters
    ----------
    losses : sequence of ConvexPWL
        One loss per variable, in chain order.

    Attributes
    ----------
    events : tuple of BreakpointEvent
        All ``q`` breakpoints sorted by value; ties keep node order.
    """

    def __init__(self, losses: Sequence[ConvexPWL]):
        if not losses:
            raise ValueError("an instance needs at least one loss")
        self.losses = tuple(losses)
        per_node = (
            [BreakpointEvent(b, i, f.slopes[j], f.slopes[j + 1]) for j, b in enumerate(f.breakpoints)]
            for i, f in enumerate(self.losses)
        )
        self.events = tuple(heapq.merge(*per_node, key=lambda e: (e.value, e.owner)))

    @property
    def n(self) -> int:
        return len(self.losses)

    @property
    def q(self) -> int:
        return len(self.events)

    def __repr__(self):
        return f"ProblemInstance(n={self.n}, q={self.q})"

    @cached_property
    def grid(self) -> tuple:
        """Distinct breakpoint values, ascending."""
        out = []
        for e in self.events:
            if not out or out[-1] != e.value:
                out.append(e.value)
        return tuple(out)

    def objective(self, x: Sequence, lam) -> Fraction:
        val = sum((evaluate(f, xi) for f, xi in zip(self.losses, x)), Fraction(0))
        tv = sum((abs(a - b) for a, b in zip(x, x[1:])), Fraction(0))
        return val + lam * tv

    def value_gap(self) -> Fraction:
        """``sum_i f_i(0) - sum_i min f_i``."""
        return sum((evaluate(f, 0) - minimum_value(f) for f in self.losses), Fraction(0))

    # Integer views used by the scans. Slopes are multiplied by
    # ``slope_unit`` so every capacity is an exact Python int.

    @cached_property
    def slope_unit(self) -> int:
        den = 1
        for f in self.losses:
            for s in f.slopes:
                den = math.lcm(den, s.denominator)
        return den

    @cached_property
    def int_first_slopes(self) -> tuple:
        D = self.slope_unit
        return tuple(int(f.slopes[0] * D) for f in self.losses)

    @cached_property
    def int_events(self) -> tuple:
        """``(owner, scaled slope_after, scaled jump)`` per event."""
        D = self.slope_unit
        return tuple(
            (e.owner, int(e.slope_after * D), int(e.jump * D)) for e in self.events
        )

    @cached_property
    def source_prefix(self) -> tuple:
        """Partial sums of the negated first slopes (scaled): ``sa[0] = 0``."""
        out = [0]
        for w0 in self.int_first_slopes:
            out.append(out[-1] - w0)
        return tuple(out)
