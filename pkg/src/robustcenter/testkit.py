"""Deliberately naive oracles for verifying the loss and search machinery.

Everything here trades speed for transparency: exhaustive scans, dense
grids, exact (fsum) accumulation.  Consumed by the test suite, not by the
production paths it checks.
"""

import math
from dataclasses import dataclass

import numpy as np

from .minimize import GRAD_ZERO_TOL, CenterResult, cumulative_value, loss_grad, loss_value


@dataclass(frozen=True)
class GridSpec:
    """A uniform evaluation grid: ``points`` samples of [low, high]."""

    low: float
    high: float
    points: int

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"grid needs low < high, got [{self.low!r}, {self.high!r}]")
        if self.points < 3:
            raise ValueError(f"grid needs at least 3 points, got {self.points!r}")

    def xs(self):
        return np.linspace(self.low, self.high, self.points)

    @property
    def step(self):
        return (self.high - self.low) / (self.points - 1)


def grid_minimize(loss, s, grid):
    """Argmin of the cumulative loss over the grid; ties go to the lower x."""
    xs = grid.xs()
    totals = np.sum(loss_value(loss, xs[:, None] - s.values[None, :]), axis=1)
    return float(xs[int(np.argmin(totals))])


def fd_check(value_fn, grad_fn, x, h):
    """Relative gap between grad_fn(x) and the central difference of value_fn."""
    g = grad_fn(x)
    fd = (value_fn(x + h) - value_fn(x - h)) / (2.0 * h)
    return abs(fd - g) / max(1.0, abs(g))


def convexity_scan(value_fn, grid):
    """Count consecutive grid triples violating midpoint convexity.

    A triple (x-h, x, x+h) of neighbouring grid points violates convexity
    when f(x) exceeds the average of its neighbours by more than 1e-12.
    """
    vals = np.array([value_fn(x) for x in grid.xs()], dtype=float)
    excess = vals[1:-1] - 0.5 * (vals[:-2] + vals[2:])
    return int(np.count_nonzero(excess > 1e-12))


def cumulative_grad_exact(loss, s, x):
    """Cumulative gradient accumulated with math.fsum (exact summation).

    An independent accumulation route from the production pairwise sum.
    """
    return math.fsum(np.asarray(loss_grad(loss, x - s.values), dtype=float).tolist())


def linear_scan_center(loss, s, *, zero_tol=GRAD_ZERO_TOL):
    """Exhaustive gradient-sign scan over every sample.

    Evaluates the cumulative gradient at all N samples and reads the
    answer off directly: the first zero sample is an exact minimizer,
    otherwise the adjacent pair where the sign flips.  Same result shape
    as the index bisection so the two can be compared; ``grad_evals``
    reports the N scan evaluations.
    """
    v = s.values
    n = s.n
    tol = zero_tol * n
    gs = np.sum(loss_grad(loss, v[:, None] - v[None, :]), axis=1)
    for i in range(n):
        if abs(gs[i]) <= tol:
            return CenterResult(grad_evals=n, x_star=float(v[i]))
    for i in range(n - 1):
        if gs[i] < 0 and gs[i + 1] > 0:
            return CenterResult(
                grad_evals=n, x_low=float(v[i]), x_high=float(v[i + 1]), index_low=i
            )
    raise RuntimeError("no gradient sign change across the samples; loss not convex?")


def bisect_gradient_root(loss, s, lo, hi, *, width=1e-12):
    """Reference bisection of the cumulative-gradient root to a fixed width.

    Runs on exact (fsum) gradient sums, independent of the production
    bracket refinement.  Stops early only if the bracket reaches
    floating-point resolution.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo!r}, {hi!r})")
    if cumulative_grad_exact(loss, s, lo) > 0 or cumulative_grad_exact(loss, s, hi) < 0:
        raise ValueError("bracket does not enclose the cumulative-gradient root")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        g = cumulative_grad_exact(loss, s, mid)
        if g == 0.0:
            return mid
        if g > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
