"""Generators of synthetic sampled curves for the containment checks."""

from fractions import Fraction as F

import numpy as np

from slrkit.curves import PolylineCurve


def endpoint_dominant(rng: np.random.Generator, n_inner: int = 6) -> PolylineCurve:
    """From (0,0) at t=0 to (1,0) at t=1 with the endpoint pair attaining the max ratio.

    Interior points sit on the segment with vertical offsets below g/2,
    where g is the smallest time gap; then every pair ratio is at most 1.
    """
    cuts = sorted(set(int(v) for v in rng.integers(1, 1000, size=n_inner)))
    times = [F(0)] + [F(c, 1000) for c in cuts] + [F(1)]
    g = min(b - a for a, b in zip(times, times[1:]))
    pts = [(t, F(int(rng.integers(0, 1000)), 1000) * g / 2) for t in times]
    pts[0], pts[-1] = (F(0), F(0)), (F(1), F(0))
    return PolylineCurve(tuple(zip(times, pts)))


def pushed_out(rng: np.random.Generator, n_inner: int = 6) -> tuple[PolylineCurve, int]:
    """An endpoint-dominant curve with one interior sample moved outside the diameter disk."""
    base = endpoint_dominant(rng, n_inner)
    k = int(rng.integers(1, len(base) - 1))
    samples = list(base.samples)
    t = samples[k].t
    # disk is centred at (1/2, 0) with radius 1/2
    samples[k] = (t, (t, F(1, 2) + F(int(rng.integers(1, 100)), 100)))
    return PolylineCurve(tuple(samples)), k
