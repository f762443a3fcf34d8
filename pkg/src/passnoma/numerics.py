"""
Special-function and quadrature kernel.

Only what the closed forms need: the exponential integral on the negative
real axis and Gauss-Chebyshev (first kind) quadrature over finite intervals.
Everything is double precision and vectorised over numpy arrays.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, NumericError

__all__ = [
    "QuadratureRule",
    "chebyshev_nodes",
    "exp_integral_ei",
    "exp_integral_ei_scaled",
    "gc_integrate",
]

EULER_GAMMA = 0.57721566490153286061

# |x| at which Ei switches from the power series to the continued fraction.
# The series alternates on the negative axis, so it is only used where the
# cancellation is mild.
_EI_SEAM = 1.5
_EI_MAX_TERMS = 80
_EI_MAX_ITER = 400
_EPS = 1e-17
_TINY = 1e-300


def _e1_series(z):
    # E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    z = np.asarray(z, dtype=float)
    term = -z  # (-z)^k / k!
    total = term.copy()
    for k in range(2, _EI_MAX_TERMS):
        term = term * (-z) / k
        contrib = term / k
        total += contrib
        if np.all(np.abs(contrib) <= _EPS * np.abs(total)):
            break
    return -EULER_GAMMA - np.log(z) - total


def _e1_scaled_cf(z):
    # exp(z) * E1(z) by modified Lentz on the even continued fraction
    # 1/(z+1- 1/(z+3- 4/(z+5- ...)))
    b = z + 1.0
    c = np.full_like(z, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(z.shape, dtype=bool)
    for i in range(1, _EI_MAX_ITER):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < _EPS * 4
        if done.all():
            break
    return h


def _neg_arg(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError("Ei argument is NaN")
    if np.any(arr >= 0):
        raise DomainError("Ei is only implemented for strictly negative arguments, got %r" % (x,))
    return arr


def exp_integral_ei(x):
    """Exponential integral Ei(x) for x < 0.

    Ei(x) = -E1(-x) = -int_{-x}^inf exp(-t)/t dt.

    Parameters
    ----------
    x : float or array_like
        Strictly negative argument(s).

    Returns
    -------
    float or ndarray
        Values in (-inf, 0). Scalars in, scalar out.

    Raises
    ------
    DomainError
        If any argument is >= 0 or NaN.
    """
    arr = _neg_arg(x)
    z = np.atleast_1d(-arr)
    out = np.empty_like(z)
    small = z <= _EI_SEAM
    if small.any():
        out[small] = -_e1_series(z[small])
    if (~small).any():
        zl = z[~small]
        out[~small] = -_e1_scaled_cf(zl) * np.exp(-zl)
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def exp_integral_ei_scaled(x):
    """exp(-x) * Ei(x) for x < 0, evaluated without overflow.

    Products like ``exp(a) * Ei(-b)`` with large ``b >= a`` appear in the
    residual-interference formulas; writing them as
    ``exp_integral_ei_scaled(-b) * exp(a - b)`` keeps them finite.
    """
    arr = _neg_arg(x)
    z = np.atleast_1d(-arr)
    out = np.empty_like(z)
    small = z <= _EI_SEAM
    if small.any():
        zs = z[small]
        out[small] = -_e1_series(zs) * np.exp(zs)
    if (~small).any():
        out[~small] = -_e1_scaled_cf(z[~small])
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Chebyshev rule of the first kind.

    ``nodes[k-1] = cos((2k-1) pi / (2M))`` for k = 1..M, so the nodes are
    strictly decreasing. ``weight`` is the common weight pi/M.
    """

    order: int
    nodes: np.ndarray = field(repr=False)
    weight: float
    # sqrt(1 - t_k^2), kept from the sine form to avoid cancellation near +-1
    root_weights: np.ndarray = field(repr=False)


def chebyshev_nodes(M):
    """Build the M-point Gauss-Chebyshev rule."""
    if isinstance(M, bool) or int(M) != M or M < 1:
        raise ValueError("quadrature order must be a positive integer, got %r" % (M,))
    M = int(M)
    theta = (2.0 * np.arange(1, M + 1) - 1.0) * math.pi / (2.0 * M)
    nodes = np.cos(theta)
    nodes.setflags(write=False)
    roots = np.sin(theta)
    roots.setflags(write=False)
    return QuadratureRule(order=M, nodes=nodes, weight=math.pi / M, root_weights=roots)


def gc_integrate(f, a, b, rule):
    """Integrate ``f`` over [a, b] with a Gauss-Chebyshev rule.

    Maps t in (-1, 1) to x = a + (b - a)(t + 1)/2 and evaluates

        (b - a)/2 * (pi/M) * sum_k sqrt(1 - t_k^2) f(x_k).

    ``f`` is called once with the array of abscissae and must return an array
    of the same shape (or a scalar, which is broadcast).

    Raises
    ------
    ValueError
        If ``a >= b``.
    NumericError
        If ``f`` returns a non-finite value; ``abscissa`` holds the first
        offending x.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError("integration limits must satisfy a < b, got a=%r b=%r" % (a, b))
    half = 0.5 * (b - a)
    x = a + half * (rule.nodes + 1.0)
    vals = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        x_bad = float(x[np.argmax(bad)])
        raise NumericError("integrand is not finite at x=%r" % x_bad, abscissa=x_bad)
    return float(half * rule.weight * np.dot(rule.root_weights, vals))
