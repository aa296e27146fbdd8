"""Smoothed absolute losses built from a monotone auxiliary transform.

The construction composes a monotone increasing map ``f`` (divergent on
the right, bounded on the left) with an inverse map ``g``: the loss at
``x`` is ``g(f(x) + f(-x))``.  Any such loss is quadratic near zero and
approaches ``|x|`` far from zero, which makes it a smooth drop-in for the
Huber family.

The exponential choice ``f(x) = exp(a*x) + b`` yields the log-exp loss

    (1/a) * log(exp(a*x) + exp(-a*x) + b),

strictly convex whenever ``b >= 0``.  Its production evaluators below use
rearrangements factored by ``|x|`` so that values, gradients and
curvatures stay finite for every finite ``x`` (the textbook expressions
overflow once ``a*|x|`` exceeds roughly 709).
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class AuxiliaryTransform:
    """A monotone smoothing map, its derivatives, and its (pseudo-)inverse.

    ``f`` must increase monotonically on ``[monotone_from, inf)``, diverge
    as ``x -> inf`` and stay bounded as ``x -> -inf``.  ``g`` inverts ``f``
    on the reachable range: ``g(f(x)) == x`` for ``x >= monotone_from``.
    ``g`` is undefined at or below ``g_domain_low``.

    Derivative callables are supplied explicitly rather than derived
    numerically, because the quadratic expansion of the composed loss
    needs exact values of ``f''(0)``.  All callables must be pure.
    """

    f: Callable
    f_prime: Callable
    f_double_prime: Callable
    g: Callable
    g_prime: Callable
    g_domain_low: float = -math.inf
    monotone_from: float = -math.inf


def _checked_sum(aux, x):
    s = aux.f(x) + aux.f(-x)
    if np.any(np.asarray(s) <= aux.g_domain_low):
        raise ValueError(
            f"f(x) + f(-x) = {float(np.min(np.asarray(s)))!r} is not above "
            f"the inverse-map domain floor {aux.g_domain_low!r}"
        )
    return s


def generalized_value(aux, x):
    """Composed loss ``g(f(x) + f(-x))``."""
    out = aux.g(_checked_sum(aux, x))
    return float(out) if np.ndim(out) == 0 else out


def generalized_grad(aux, x):
    """Derivative of the composed loss: ``g'(f(x)+f(-x)) * (f'(x) - f'(-x))``."""
    s = _checked_sum(aux, x)
    out = aux.g_prime(s) * (aux.f_prime(x) - aux.f_prime(-x))
    return float(out) if np.ndim(out) == 0 else out


def quadratic_coeffs_near_zero(aux):
    """Coefficients ``(curvature_coef, offset)`` of the loss near zero.

    Near zero the composed loss behaves as
    ``offset + curvature_coef * x**2`` with
    ``curvature_coef = g'(2 f(0)) * f''(0)`` and ``offset = g(2 f(0))``.
    Since g' is positive wherever f is increasing, the curvature
    coefficient is positive exactly when f''(0) is.
    """
    s0 = 2.0 * aux.f(0.0)
    if not s0 > aux.g_domain_low:
        raise ValueError(
            f"2 f(0) = {s0!r} is not above the inverse-map domain floor "
            f"{aux.g_domain_low!r}"
        )
    return float(aux.g_prime(s0) * aux.f_double_prime(0.0)), float(aux.g(s0))


def validate_transform(aux, scale=1.0, n_points=64, seed=0):
    """Sampled sanity checks for a user-supplied transform.

    Verifies monotonicity of ``f`` on its invertible range, the
    divergence/boundedness sentinels at +-25 and +-50 scale units, and the
    inverse round trip ``g(f(x)) == x`` to 1e-9 relative tolerance.
    Raises ValueError describing the first failed property.
    """
    rng = np.random.default_rng(seed)
    lo = max(aux.monotone_from, -8.0 * scale)
    xs = rng.uniform(lo, 8.0 * scale, n_points)
    hs = rng.uniform(1e-3 * scale, scale, n_points)
    for x, h in zip(xs, hs):
        if not aux.f(x + h) >= aux.f(x):
            raise ValueError(f"f is not monotone increasing near x = {x!r}")
    left_low, left_high = aux.f(-50.0 * scale), aux.f(-25.0 * scale)
    if not (np.isfinite(left_low) and np.isfinite(left_high)):
        raise ValueError("f must stay bounded as x -> -inf")
    right_growth = aux.f(50.0 * scale) - aux.f(25.0 * scale)
    left_drift = abs(left_high - left_low)
    if not right_growth > 1000.0 * max(left_drift, np.finfo(float).tiny):
        raise ValueError(
            "f must diverge on the right while flattening on the left; "
            f"growth {right_growth!r} vs left drift {left_drift!r}"
        )
    for x in xs:
        y = aux.f(x)
        if not (np.isfinite(y) and y > aux.g_domain_low):
            continue
        back = aux.g(y)
        if abs(back - x) > 1e-9 * max(1.0, abs(x)):
            raise ValueError(f"g does not invert f at x = {x!r}: g(f(x)) = {back!r}")


@dataclass(frozen=True)
class LogExpParams:
    """Parameters of the log-exp loss ``(1/a) log(exp(ax) + exp(-ax) + b)``.

    ``a`` is the sharpness (units of 1/x): larger values move the loss
    toward ``|x|``.  ``b`` shifts the curvature near zero; the loss exists
    for ``b + 2 > 0`` but is convex on the whole line only for ``b >= 0``.
    Construction validates everything, so evaluation is total on finite
    inputs.  The non-convex window ``-2 < b < 0`` must be opted into with
    ``convexity_required=False`` and is rejected by the center search.
    """

    a: float
    b: float = 0.0
    convexity_required: bool = True

    def __post_init__(self):
        if not (isinstance(self.a, (int, float)) and math.isfinite(self.a) and self.a > 0):
            raise ValueError(f"sharpness a must be finite and positive, got {self.a!r}")
        if not (isinstance(self.b, (int, float)) and math.isfinite(self.b) and self.b + 2.0 > 0):
            raise ValueError(f"offset b must satisfy b + 2 > 0, got {self.b!r}")
        if self.convexity_required and self.b < 0:
            raise ValueError(
                f"b = {self.b!r} gives a non-convex loss; "
                "pass convexity_required=False to allow it"
            )


def logexp_value(p, x):
    """Log-exp loss value, overflow-safe for all finite ``x``.

    Computed as ``|x| + (1/a) log1p(t*(t + b))`` with ``t = exp(-a|x|)``,
    which equals ``(1/a) log(exp(ax) + exp(-ax) + b)`` exactly and never
    overflows.  ``t*(t + b) > -1`` holds for every valid ``b``, so the
    log1p argument is always in range.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    t = np.exp(-p.a * ax)
    out = ax + np.log1p(t * (t + p.b)) / p.a
    return float(out) if out.ndim == 0 else out


def logexp_grad(p, x):
    """Log-exp loss derivative in the stable form
    ``sign(x) * (1 - t**2) / (1 + t*(t + b))`` with ``t = exp(-a|x|)``.

    Odd in ``x``, zero at zero, and confined to (-1, 1) for ``b >= 0``
    (saturating to +-1.0 in double precision once ``a|x|`` is large).
    """
    x = np.asarray(x, dtype=float)
    t = np.exp(-p.a * np.abs(x))
    out = np.sign(x) * (1.0 - t * t) / (1.0 + t * (t + p.b))
    return float(out) if out.ndim == 0 else out


def logexp_curvature(p, x):
    """Log-exp loss second derivative.

    Stable form: numerator and denominator of
    ``(4a + a b (exp(ax) + exp(-ax))) / (exp(ax) + exp(-ax) + b)**2``
    are both scaled by ``exp(-2a|x|)``, giving
    ``a t (4t + b(1 + t**2)) / (1 + t(t + b))**2`` with ``t = exp(-a|x|)``.
    Strictly positive everywhere when ``b >= 0``.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    t = np.exp(-p.a * ax)
    den = 1.0 + t * (t + p.b)
    out = p.a * t * (4.0 * t + p.b * (1.0 + t * t)) / (den * den)
    return float(out) if out.ndim == 0 else out


def split_coefficient(b):
    """Asymptote-splitting coefficient ``c >= 1`` with ``c**2 + 1/c**2 == b``.

    Defined for ``b >= 2``.  Both ``c`` and ``1/c`` solve the constraint;
    the root at or above 1 is returned.
    """
    if not (isinstance(b, (int, float)) and math.isfinite(b) and b >= 2.0):
        raise ValueError(f"split form requires b >= 2, got {b!r}")
    return math.sqrt(0.5 * (b + math.sqrt(b * b - 4.0)))


def split_value(p, x):
    """Log-exp loss evaluated as a product of two one-sided factors.

    For ``b >= 2`` the loss factors into
    ``(1/a)[log(c e^{ax} + 1/c) + log(c e^{-ax} + 1/c)]`` with ``c`` from
    :func:`split_coefficient`; each factor carries one asymptote.
    Implemented with ``logaddexp`` so either factor alone is stable.
    """
    c = split_coefficient(p.b)
    log_c = math.log(c)
    ax = p.a * np.asarray(x, dtype=float)
    out = (np.logaddexp(log_c + ax, -log_c) + np.logaddexp(log_c - ax, -log_c)) / p.a
    return float(out) if out.ndim == 0 else out


def make_exp_aux(a, b):
    """Exponential auxiliary transform ``f(x) = exp(a x) + b``.

    The inverse is ``g(y) = (1/a) log(y - b)`` for ``y > b``, and the
    composed loss equals the log-exp loss.  This is the naive composition:
    it overflows once ``a|x|`` is large (around 709), so use
    :func:`logexp_value` as the production path; agreement is guaranteed
    to 1e-9 relative for ``|x| <= 30/a``.
    """
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
        raise ValueError(f"sharpness a must be finite and positive, got {a!r}")
    if not (isinstance(b, (int, float)) and math.isfinite(b) and b + 2.0 > 0):
        raise ValueError(f"offset b must satisfy b + 2 > 0, got {b!r}")
    a, b = float(a), float(b)
    return AuxiliaryTransform(
        f=lambda x: np.exp(a * x) + b,
        f_prime=lambda x: a * np.exp(a * x),
        f_double_prime=lambda x: a * a * np.exp(a * x),
        g=lambda y: np.log(y - b) / a,
        g_prime=lambda y: 1.0 / (a * (y - b)),
        g_domain_low=b,
    )


def make_quadratic_aux(delta):
    """One-sided quadratic auxiliary transform reproducing pseudo-Huber.

    ``f(x) = step(x) * (x/delta)**2 + 1`` with ``step(0) = 0``, so f is
    flat left of zero and only the pseudo-inverse ``g(y) = delta *
    sqrt(y - 1)`` on ``y >= 1`` is meaningful.  The composed loss is
    ``delta * sqrt((x/delta)**2 + 1)``, the pseudo-Huber loss.

    The two one-sided second derivatives at 0 differ (0 and 2/delta**2);
    ``f_double_prime(0)`` reports their mean 1/delta**2, the unique value
    for which the near-zero quadratic coefficients of the composed loss
    are exact.
    """
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and delta > 0):
        raise ValueError(f"delta must be finite and positive, got {delta!r}")
    d = float(delta)
    inv_d2 = 1.0 / (d * d)

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, x * x * inv_d2, 0.0) + 1.0

    def f_prime(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, 2.0 * x * inv_d2, 0.0)

    def f_double_prime(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, 2.0 * inv_d2, np.where(x == 0, inv_d2, 0.0))

    return AuxiliaryTransform(
        f=f,
        f_prime=f_prime,
        f_double_prime=f_double_prime,
        g=lambda y: d * np.sqrt(y - 1.0),
        g_prime=lambda y: 0.5 * d / np.sqrt(y - 1.0),
        g_domain_low=1.0,
        monotone_from=0.0,
    )
