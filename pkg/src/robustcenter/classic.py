"""Classic robust scalar losses with value, gradient and curvature.

Covers the quadratic and absolute losses, the two piecewise
quadratic/absolute blends, the Huber loss and the pseudo-Huber loss.
All functions accept scalars or numpy arrays and evaluate elementwise.
"""

import math
from dataclasses import dataclass

import numpy as np

CLASSIC_KINDS = frozenset({
    "quadratic",
    "absolute",
    "piecewise_unit",
    "piecewise_delta",
    "huber",
    "pseudo_huber",
})

#: Kinds whose shape depends on the scale parameter delta.
DELTA_KINDS = frozenset({"piecewise_delta", "huber", "pseudo_huber"})


@dataclass(frozen=True)
class ClassicLossSpec:
    """A classic scalar loss family plus its scale parameter.

    ``delta`` sets the quadratic-to-linear transition scale for the
    ``piecewise_delta``, ``huber`` and ``pseudo_huber`` kinds and is
    ignored by the other kinds.
    """

    kind: str
    delta: float = 1.0

    def __post_init__(self):
        if self.kind not in CLASSIC_KINDS:
            raise ValueError(
                f"unknown loss kind {self.kind!r}; expected one of {sorted(CLASSIC_KINDS)}"
            )
        if self.kind in DELTA_KINDS and not (
            isinstance(self.delta, (int, float))
            and math.isfinite(self.delta)
            and self.delta > 0
        ):
            raise ValueError(f"{self.kind} loss requires delta > 0, got {self.delta!r}")


def _as_finite(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("loss input must be finite")
    return x


def _ret(out):
    return float(out) if np.ndim(out) == 0 else out


def classic_value(spec, x):
    """Loss value at ``x``.

    quadratic: x**2; absolute: |x|; piecewise_unit: x**2 inside |x| <= 1,
    |x| outside; piecewise_delta: x**2/delta inside |x| <= delta, |x|
    outside; huber: x**2/(2 delta) + delta/2 inside, |x| outside;
    pseudo_huber: delta * sqrt(1 + (x/delta)**2).
    """
    x = _as_finite(x)
    d = spec.delta
    ax = np.abs(x)
    k = spec.kind
    if k == "quadratic":
        out = x * x
    elif k == "absolute":
        out = ax
    elif k == "piecewise_unit":
        out = np.where(ax <= 1.0, x * x, ax)
    elif k == "piecewise_delta":
        out = np.where(ax <= d, x * x / d, ax)
    elif k == "huber":
        out = np.where(ax <= d, x * x / (2.0 * d) + 0.5 * d, ax)
    else:  # pseudo_huber; hypot(x, d) == d * sqrt(1 + (x/d)**2) without overflow
        out = np.hypot(x, d)
    return _ret(out)


def classic_grad(spec, x):
    """First derivative of :func:`classic_value`.

    Conventions where the true derivative is ambiguous: the absolute loss
    reports 0 at x = 0 (midpoint of the subgradient interval), and the
    piecewise kinds use their inner quadratic branch at |x| = delta.
    """
    x = _as_finite(x)
    d = spec.delta
    ax = np.abs(x)
    k = spec.kind
    if k == "quadratic":
        out = 2.0 * x
    elif k == "absolute":
        out = np.sign(x)
    elif k == "piecewise_unit":
        out = np.where(ax <= 1.0, 2.0 * x, np.sign(x))
    elif k == "piecewise_delta":
        out = np.where(ax <= d, 2.0 * x / d, np.sign(x))
    elif k == "huber":
        out = np.where(ax <= d, x / d, np.sign(x))
    else:  # pseudo_huber
        out = x / np.hypot(x, d)
    return _ret(out)


def classic_curvature(spec, x):
    """Second derivative of :func:`classic_value` where it exists.

    At the huber breakpoints |x| = delta the second derivative does not
    exist; the inner-branch value 1/delta is reported by convention.  The
    same inner-branch rule applies to the piecewise kinds.
    """
    x = _as_finite(x)
    d = spec.delta
    ax = np.abs(x)
    k = spec.kind
    if k == "quadratic":
        out = np.full_like(x, 2.0)
    elif k == "absolute":
        out = np.zeros_like(x)
    elif k == "piecewise_unit":
        out = np.where(ax <= 1.0, 2.0, 0.0)
    elif k == "piecewise_delta":
        out = np.where(ax <= d, 2.0 / d, 0.0)
    elif k == "huber":
        out = np.where(ax <= d, 1.0 / d, 0.0)
    else:  # pseudo_huber: d**2 / (x**2 + d**2)**(3/2)
        h = np.hypot(x, d)
        out = (d / h) * (d / h) / h
    return _ret(out)
