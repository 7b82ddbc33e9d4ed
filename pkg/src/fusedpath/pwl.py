"""
Exact convex piecewise-linear functions.

A :class:`ConvexPWL` is stored as an ascending tuple of breakpoints, the
slopes of the pieces around them (one more slope than breakpoints), and
the function value at the first breakpoint. All numbers are
:class:`fractions.Fraction`, so evaluation, subgradients and sums are exact.

Examples
--------
>>> f = make_pwl([1], [-2, 2], 0)          # 2|x - 1|
>>> evaluate(f, 3)
Fraction(4, 1)
>>> subgradient(f, 1, "left"), subgradient(f, 1, "right")
(Fraction(-2, 1), Fraction(2, 1))
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

from .errors import InvalidEps, InvalidPWL, NotCoercive

ScalarLike = Union[int, Fraction, str, float]


def as_scalar(value: ScalarLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Floats are read through their shortest ``repr`` so that ``0.1`` becomes
    ``1/10`` rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


@dataclass(frozen=True)
class ConvexPWL:
    """Convex, coercive piecewise-linear function.

    Parameters
    ----------
    breakpoints : tuple of Fraction
        Strictly ascending kink locations (at least one).
    slopes : tuple of Fraction
        Strictly ascending slopes, ``len(breakpoints) + 1`` of them; the
        first is negative and the last positive.
    offset : Fraction
        Value of the function at ``breakpoints[0]``.
    """

    breakpoints: tuple
    slopes: tuple
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        bps, slopes = self.breakpoints, self.slopes
        if len(bps) < 1:
            raise InvalidPWL("at least one breakpoint is required")
        if len(slopes) != len(bps) + 1:
            raise InvalidPWL(
                f"expected {len(bps) + 1} slopes for {len(bps)} breakpoints, got {len(slopes)}"
            )
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise InvalidPWL(f"breakpoints not strictly ascending at {a} -> {b}")
        for a, b in zip(slopes, slopes[1:]):
            if not a < b:
                raise InvalidPWL(f"slopes not strictly ascending at {a} -> {b}")
        if not (slopes[0] < 0 < slopes[-1]):
            raise NotCoercive(
                f"first slope must be < 0 and last slope > 0, got {slopes[0]} and {slopes[-1]}"
            )

    @property
    def n_breakpoints(self) -> int:
        return len(self.breakpoints)

    @cached_property
    def knot_values(self) -> tuple:
        """Function values at every breakpoint."""
        vals = [self.offset]
        for i in range(1, len(self.breakpoints)):
            vals.append(vals[-1] + self.slopes[i] * (self.breakpoints[i] - self.breakpoints[i - 1]))
        return tuple(vals)

    def __call__(self, x):
        return evaluate(self, x)


def make_pwl(breakpoints: Iterable[ScalarLike], slopes: Iterable[ScalarLike],
             offset: ScalarLike = 0) -> ConvexPWL:
    """Build a validated :class:`ConvexPWL` from scalar-like inputs.

    Raises
    ------
    InvalidPWL
        Lengths disagree or breakpoints/slopes are not strictly ascending.
    NotCoercive
        The outer slopes do not point the function upward on both sides.
    """
    return ConvexPWL(
        tuple(as_scalar(b) for b in breakpoints),
        tuple(as_scalar(s) for s in slopes),
        as_scalar(offset),
    )


def evaluate(f: ConvexPWL, x: ScalarLike) -> Fraction:
    x = as_scalar(x)
    bps = f.breakpoints
    if x <= bps[0]:
        return f.offset + f.slopes[0] * (x - bps[0])
    i = bisect_right(bps, x) - 1  # last breakpoint <= x
    return f.knot_values[i] + f.slopes[i + 1] * (x - bps[i])


def subgradient(f: ConvexPWL, x: ScalarLike, side: str = "right") -> Fraction:
    """One-sided derivative of ``f`` at ``x``.

    ``side="right"`` gives the slope of the piece just right of ``x``;
    ``side="left"`` the slope just left of it. Away from breakpoints the two
    agree.
    """
    x = as_scalar(x)
    if side == "right":
        return f.slopes[bisect_right(f.breakpoints, x)]
    if side == "left":
        return f.slopes[bisect_left(f.breakpoints, x)]
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def minimizer_interval(f: ConvexPWL) -> tuple:
    """Closed interval ``(lo, hi)`` of minimizers of ``f``."""
    for i, s in enumerate(f.slopes):
        if s == 0:
            return f.breakpoints[i - 1], f.breakpoints[i]
        if s > 0:
            return f.breakpoints[i - 1], f.breakpoints[i - 1]
    raise AssertionError("coercive function has a positive slope")  # pragma: no cover


def minimum_value(f: ConvexPWL) -> Fraction:
    return evaluate(f, minimizer_interval(f)[0])


def sum_pwl(fs: Sequence[ConvexPWL]) -> ConvexPWL:
    """Pointwise sum; coincident breakpoints collapse into one kink."""
    if not fs:
        raise ValueError("sum_pwl needs at least one function")
    if len(fs) == 1:
        return fs[0]
    bps = sorted({b for f in fs for b in f.breakpoints})
    slopes = [sum((f.slopes[0] for f in fs), Fraction(0))]
    for b in bps:
        slopes.append(sum((subgradient(f, b, "right") for f in fs), Fraction(0)))
    offset = sum((evaluate(f, bps[0]) for f in fs), Fraction(0))
    return ConvexPWL(tuple(bps), tuple(slopes), offset)


def scale_pwl(f: ConvexPWL, factor: ScalarLike) -> ConvexPWL:
    """Multiply ``f`` by a positive constant."""
    c = as_scalar(factor)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    return ConvexPWL(f.breakpoints, tuple(s * c for s in f.slopes), f.offset * c)


def linearize_samples(samples: Sequence[ScalarLike], l: ScalarLike, eps: ScalarLike,
                      M: ScalarLike) -> ConvexPWL:
    """Interpolate equally spaced samples of a convex function.

    ``samples[k]`` is the function value at ``l + k*eps``. Interior slopes are
    forward differences; the pieces outside ``[l, u]`` get slopes ``-M`` and
    ``+M``, which absorbs the box constraint. Adjacent pieces with equal
    slope are merged, so the breakpoint grid can come out coarser than the
    sample grid.

    Raises
    ------
    InvalidEps
        ``eps <= 0``.
    InvalidPWL
        Fewer than two samples, non-convex samples, or ``M`` too small.
    """
    eps = as_scalar(eps)
    if eps <= 0:
        raise InvalidEps(f"eps must be positive, got {eps}")
    l = as_scalar(l)
    M = as_scalar(M)
    vals = [as_scalar(v) for v in samples]
    if len(vals) < 2:
        raise InvalidPWL("need at least two samples")
    interior = [(b - a) / eps for a, b in zip(vals, vals[1:])]
    grid = [l + k * eps for k in range(len(vals))]
    slopes = [-M] + interior + [M]
    bps = []
    merged = [slopes[0]]
    for k, b in enumerate(grid):
        nxt = slopes[k + 1]
        if nxt < merged[-1]:
            raise InvalidPWL(f"samples are not convex near x = {b}")
        if nxt == merged[-1]:
            continue
        bps.append(b)
        merged.append(nxt)
    f = ConvexPWL(tuple(bps), tuple(merged), vals[grid.index(bps[0])])
    return f


def piecewise_linearize(f: Callable, l: ScalarLike, u: ScalarLike, eps: ScalarLike,
                        M: ScalarLike) -> ConvexPWL:
    """Convex piecewise-linear surrogate of ``f`` on the grid ``l, l+eps, ..., u``.

    If ``(u - l) / eps`` is not an integer the grid is extended past ``u`` to
    the next grid point. ``f`` is called with :class:`Fraction` arguments and
    may return ints, Fractions or floats.
    """
    eps = as_scalar(eps)
    if eps <= 0:
        raise InvalidEps(f"eps must be positive, got {eps}")
    l, u = as_scalar(l), as_scalar(u)
    if not l < u:
        raise InvalidPWL(f"need l < u, got [{l}, {u}]")
    steps = math.ceil((u - l) / eps)
    samples = [as_scalar(f(l + k * eps)) for k in range(steps + 1)]
    return linearize_samples(samples, l, eps, M)
