"""Random and adversarial instances for tests and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction

from .instance import ProblemInstance
from .pwl import ConvexPWL, make_pwl


def random_pwl(rng: random.Random, n_bps: int, lo: int = -10, hi: int = 10,
               max_slope: int = 10) -> ConvexPWL:
    """Convex PWL with ``n_bps`` distinct integer breakpoints and integer slopes."""
    bps = sorted(rng.sample(range(lo, hi + 1), n_bps))
    # strictly increasing slopes from negative to positive
    neg = rng.randint(1, n_bps)
    left = sorted(rng.sample(range(-max_slope, 0), neg))
    right = sorted(rng.sample(range(1, max_slope + 1), n_bps + 1 - neg))
    return make_pwl(bps, left + right, rng.randint(lo, hi))


def random_instance(rng: random.Random, n_range=(2, 5), q_range=(1, 4), lo: int = -10,
                    hi: int = 10, max_slope: int = 10) -> ProblemInstance:
    n = rng.randint(*n_range)
    return ProblemInstance([
        random_pwl(rng, rng.randint(*q_range), lo, hi, max_slope) for _ in range(n)
    ])


def abs_instance(data, weights=None) -> ProblemInstance:
    """``sum_i w_i |x_i - a_i|``."""
    weights = weights or [1] * len(data)
    return ProblemInstance([make_pwl([a], [-w, w]) for a, w in zip(data, weights)])


def staircase_instance(n: int, step: int = 2, weight: int = 1) -> ProblemInstance:
    """Absolute losses around an increasing staircase ``0, step, 2*step, ...``."""
    return abs_instance([i * step for i in range(n)], [weight] * n)


def constant_instance(n: int, value: int = 0, weight: int = 1) -> ProblemInstance:
    return abs_instance([value] * n, [weight] * n)


def alternating_instance(n: int, amplitude: int = 10, weight: int = 1) -> ProblemInstance:
    """Data alternating between ``-amplitude`` and ``+amplitude``."""
    return abs_instance([amplitude if i % 2 else -amplitude for i in range(n)], [weight] * n)


def quantile_instance(data, tau) -> ProblemInstance:
    tau = Fraction(tau)
    return ProblemInstance([make_pwl([a], [tau - 1, tau]) for a in data])


def bench_instance(n: int = 500, per_node: int = 4, seed: int = 0) -> ProblemInstance:
    """Large instance with small data spread so the fusing search stays cheap."""
    rng = random.Random(seed)
    losses = []
    for _ in range(n):
        bps = sorted(rng.sample(range(-20, 21), per_node))
        neg = rng.randint(1, per_node)
        slopes = [Fraction(s, 4) for s in range(-neg, per_node + 1 - neg + 1) if s != 0]
        losses.append(make_pwl([Fraction(b, 4) for b in bps], slopes))
    return ProblemInstance(losses)
