"""Cumulative-loss minimization over sorted samples.

The robust center of a sample set is the minimizer of
``sum_n L0(x - x_n)`` for a symmetric scalar loss ``L0``.  When ``L0`` is
convex with an increasing derivative, the cumulative gradient is
monotone in ``x`` and its sign tells which side of the minimizer a point
lies on.  Two searches exploit this:

* an index bisection over the sorted samples that either lands on a
  sample with zero cumulative gradient or brackets the minimizer between
  two adjacent samples, in at most ``ceil(log2 N) + 1`` gradient
  evaluations;
* a bisection of that bracket down to a requested half-width ``eps`` in
  at most ``ceil(log2(D / eps)) + 1`` further evaluations, ``D`` being
  the bracket width.

The quadratic and absolute losses keep their closed forms (:func:`mean`,
:func:`median`).
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .classic import ClassicLossSpec, classic_grad, classic_value
from .generalized import LogExpParams, logexp_grad, logexp_value

LossSpec = Union[ClassicLossSpec, LogExpParams]

#: A cumulative gradient G over N samples counts as zero iff |G| <= GRAD_ZERO_TOL * N.
#: The per-sample scaling tracks how summation error accumulates.
GRAD_ZERO_TOL = 1e-12

_SEARCHABLE_CLASSIC = frozenset({"quadratic", "huber", "pseudo_huber"})


class NonConvexLossError(ValueError):
    """Loss spec rejected by the search: gradient sign is not trustworthy."""


class BracketError(ValueError):
    """Bracket endpoints do not enclose a cumulative-gradient sign change."""


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Finite real samples held sorted ascending, with the sort permutation.

    ``perm[i]`` is the original position of the i-th smallest sample:
    ``original[perm[i]] == values[i]``.  Arrays are frozen read-only, so a
    SampleSet is safe to share across threads.
    """

    values: np.ndarray
    perm: np.ndarray

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        perm = np.atleast_1d(np.asarray(self.perm, dtype=np.intp))
        if values.ndim != 1 or values.size == 0:
            raise ValueError("SampleSet needs a one-dimensional, nonempty sample list")
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        if np.any(np.diff(values) < 0):
            raise ValueError("values must be sorted ascending")
        if perm.shape != values.shape or not np.array_equal(
            np.sort(perm), np.arange(values.size)
        ):
            raise ValueError("perm must be a permutation of 0..N-1 matching values")
        values = values.copy()
        perm = perm.copy()
        values.setflags(write=False)
        perm.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "perm", perm)

    @classmethod
    def from_values(cls, data):
        """Sort ``data`` ascending and record where each value came from."""
        arr = np.atleast_1d(np.asarray(data, dtype=float))
        order = np.argsort(arr, kind="stable")
        return cls(arr[order], order)

    @property
    def n(self):
        return int(self.values.size)


@dataclass(frozen=True)
class CenterResult:
    """Outcome of the adjacent-pair search.

    Exactly one of two shapes: an exact minimizer (``x_star`` set, pair
    fields None) or an adjacent sorted pair ``x_low < x_high`` whose
    cumulative gradients are negative and positive respectively
    (``index_low`` is the 0-based sorted position of ``x_low``).
    """

    grad_evals: int
    x_star: Optional[float] = None
    x_low: Optional[float] = None
    x_high: Optional[float] = None
    index_low: Optional[int] = None

    @property
    def exact(self):
        return self.x_star is not None


@dataclass(frozen=True)
class EpsilonResult:
    """A point within ``radius`` of the unique cumulative-loss minimizer."""

    x_eps: float
    radius: float
    grad_evals: int
    exact: bool = False


def loss_value(spec, u):
    """Per-sample loss value for either spec family."""
    if isinstance(spec, LogExpParams):
        return logexp_value(spec, u)
    if isinstance(spec, ClassicLossSpec):
        return classic_value(spec, u)
    raise TypeError(f"unsupported loss spec type {type(spec).__name__}")


def loss_grad(spec, u):
    """Per-sample loss derivative for either spec family."""
    if isinstance(spec, LogExpParams):
        return logexp_grad(spec, u)
    if isinstance(spec, ClassicLossSpec):
        return classic_grad(spec, u)
    raise TypeError(f"unsupported loss spec type {type(spec).__name__}")


def require_convex_loss(spec):
    """Reject specs the gradient-sign search cannot handle.

    Accepted: log-exp with b >= 0, quadratic, huber, pseudo_huber.
    Rejected: absolute and the piecewise kinds (no usable derivative at
    their kinks) and log-exp with b < 0 (not convex).
    """
    if isinstance(spec, LogExpParams):
        if spec.b < 0:
            raise NonConvexLossError(
                f"log-exp loss with b = {spec.b!r} < 0 is not convex; "
                "the gradient-sign search requires b >= 0"
            )
    elif isinstance(spec, ClassicLossSpec):
        if spec.kind not in _SEARCHABLE_CLASSIC:
            raise NonConvexLossError(
                f"{spec.kind} loss is not convex-differentiable; "
                f"the search accepts {sorted(_SEARCHABLE_CLASSIC)} and log-exp with b >= 0"
            )
    else:
        raise TypeError(f"unsupported loss spec type {type(spec).__name__}")


def cumulative_value(loss, s, x):
    """``sum_n L0(x - x_n)``, pairwise-accumulated (np.sum)."""
    return float(np.sum(loss_value(loss, x - s.values)))


def cumulative_grad(loss, s, x):
    """``sum_n L0'(x - x_n)``, pairwise-accumulated; nondecreasing in x for convex L0."""
    return float(np.sum(loss_grad(loss, x - s.values)))


def find_centralizing_pair(loss, s, *, zero_tol=GRAD_ZERO_TOL):
    """Bisect sorted-sample indices on the cumulative gradient sign.

    Maintains indices ``lo < hi`` with the gradient negative at
    ``values[lo]`` and positive at ``values[hi]`` (the unevaluated
    endpoints 0 and N-1 satisfy this automatically: every per-sample
    derivative at ``values[0]`` is <= 0 and at ``values[-1]`` is >= 0 for
    symmetric losses, so the minimizer always lies inside the sample
    range).  The probed midpoint rounds half up and is strictly interior,
    so the interval shrinks every step and the endpoints are never
    evaluated; at most ``ceil(log2 N) + 1`` gradient evaluations happen.

    Returns an exact minimizer when a probe's gradient is zero (within
    ``zero_tol * N``), otherwise the adjacent bracketing pair.
    """
    require_convex_loss(loss)
    values = s.values
    n = s.n
    tol = zero_tol * n
    lo, hi = 0, n - 1
    evals = 0
    while hi - lo != 1:
        mid = (lo + hi + 1) // 2  # round half up, strictly interior for hi - lo >= 2
        g = cumulative_grad(loss, s, values[mid])
        evals += 1
        if abs(g) <= tol:
            return CenterResult(grad_evals=evals, x_star=float(values[mid]))
        if hi == lo:
            # Single sample: its own gradient is zero for every symmetric
            # loss accepted above, so the branch before always returns.
            raise AssertionError("nonzero cumulative gradient at a single sample")
        if g > 0:
            hi = mid
        else:
            lo = mid
    if values[lo] == values[hi]:
        # Only reachable for two equal samples (interior probes rule the
        # case out otherwise); the shared value is the exact minimizer.
        return CenterResult(grad_evals=evals, x_star=float(values[lo]))
    return CenterResult(
        grad_evals=evals,
        x_low=float(values[lo]),
        x_high=float(values[hi]),
        index_low=lo,
    )


def epsilon_minimize(loss, s, bracket, eps, *, zero_tol=GRAD_ZERO_TOL):
    """Bisect a gradient sign-change bracket down to half-width ``eps``.

    The bracket must satisfy ``x0 < x1`` with cumulative gradient <= 0 at
    ``x0`` and >= 0 at ``x1``; both endpoint evaluations vet the
    precondition and are not counted in ``grad_evals``, which tallies only
    the bisection loop (at most ``ceil(log2((x1-x0)/eps)) + 1``).

    Returns the exact minimizer if a probe's gradient is zero, otherwise
    the final bracket midpoint with guarantee radius ``eps``.  If ``eps``
    is below the floating-point resolution of the bracket, the loop stops
    at the last representable midpoint and reports the achieved half-width
    as the radius instead.
    """
    require_convex_loss(loss)
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0):
        raise ValueError(f"eps must be finite and positive, got {eps!r}")
    x0, x1 = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(x0) and math.isfinite(x1) and x0 < x1):
        raise BracketError(f"bracket must satisfy x0 < x1, got ({x0!r}, {x1!r})")
    tol = zero_tol * s.n
    g0 = cumulative_grad(loss, s, x0)
    g1 = cumulative_grad(loss, s, x1)
    if g0 > tol or g1 < -tol:
        raise BracketError(
            "cumulative gradient must be <= 0 at the low end and >= 0 at the "
            f"high end; got G({x0!r}) = {g0!r}, G({x1!r}) = {g1!r}"
        )
    evals = 0
    while x1 - x0 > 2.0 * eps:
        mid = 0.5 * (x0 + x1)
        if not x0 < mid < x1:
            break  # bracket already at floating-point resolution
        g = cumulative_grad(loss, s, mid)
        evals += 1
        if abs(g) <= tol:
            return EpsilonResult(x_eps=mid, radius=eps, grad_evals=evals, exact=True)
        if g > 0:
            x1 = mid
        else:
            x0 = mid
    width = x1 - x0
    radius = eps if width <= 2.0 * eps else 0.5 * width
    return EpsilonResult(x_eps=0.5 * (x0 + x1), radius=radius, grad_evals=evals, exact=False)


def robust_center(loss, s, eps):
    """Locate the cumulative-loss minimizer to within ``eps``.

    Runs the adjacent-pair search and, when that brackets rather than
    lands on the minimizer, refines the bracket by bisection.
    ``grad_evals`` reports the total across both stages.  A single sample
    is returned exactly (its own gradient is zero).
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0):
        raise ValueError(f"eps must be finite and positive, got {eps!r}")
    center = find_centralizing_pair(loss, s)
    if center.exact:
        return EpsilonResult(
            x_eps=center.x_star, radius=eps, grad_evals=center.grad_evals, exact=True
        )
    refined = epsilon_minimize(loss, s, (center.x_low, center.x_high), eps)
    return EpsilonResult(
        x_eps=refined.x_eps,
        radius=refined.radius,
        grad_evals=center.grad_evals + refined.grad_evals,
        exact=refined.exact,
    )


def median(s):
    """Middle sorted value (odd N) or midpoint of the two middle values (even N)."""
    v = s.values
    n = s.n
    if n % 2:
        return float(v[(n - 1) // 2])
    return float(0.5 * (v[n // 2 - 1] + v[n // 2]))


def mean(s):
    """Arithmetic mean of the samples."""
    return float(np.mean(s.values))


def robust_center_multivariate(loss, columns, eps):
    """Independent per-dimension centers, in input column order."""
    return [robust_center(loss, col, eps) for col in columns]
