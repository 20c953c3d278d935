"""Special functions and quadrature behind the closed-form bounds.

Elliptic integrals use the *parameter* convention

    K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt,
    E(m) = int_0^{pi/2} (1 - m sin^2 t)^{1/2} dt,

for any real m <= 1.  Negative parameters are mapped onto (0, 1) by the
imaginary-modulus transformation before the AGM iteration, so arguments such as
1 - 10^2 = -99 cost the same as m = 0.99.
"""
import heapq
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


class QuadratureError(RuntimeError):
    """Adaptive quadrature stalled above the requested tolerance.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


def _check_parameter(m):
    arr = np.asarray(m, dtype=float)
    if np.any(np.isnan(arr)):
        raise ValueError("elliptic parameter is NaN")
    if np.any(arr > 1.0):
        raise ValueError("elliptic parameter must satisfy m <= 1")
    return arr


def ellip_k(m):
    """Complete elliptic integral of the first kind K(m).

    Parameters
    ----------
    m : float or array_like
        Parameter, ``m <= 1``.  Very negative values are fine.

    Returns
    -------
    float or ndarray
        ``K(m)``; ``inf`` at ``m == 1`` where the integral diverges
        logarithmically.

    Raises
    ------
    ValueError
        If any ``m > 1``.
    """
    arr = _check_parameter(m)
    if arr.ndim == 0:
        return kernels.ellipke_scalar(float(arr))[0]
    return kernels.ellipke(arr)[0]


def ellip_e(m):
    """Complete elliptic integral of the second kind E(m), ``m <= 1``."""
    arr = _check_parameter(m)
    if arr.ndim == 0:
        return kernels.ellipke_scalar(float(arr))[1]
    return kernels.ellipke(arr)[1]


def ellip_ke(m):
    """Both K(m) and E(m) from a single AGM pass."""
    arr = _check_parameter(m)
    if arr.ndim == 0:
        return kernels.ellipke_scalar(float(arr))
    return kernels.ellipke(arr)


def polylog_half(x):
    """Polylogarithm of order 1/2, ``sum_{k>=1} x^k / sqrt(k)`` for 0 <= x < 1.

    For ``-ln x > 1`` the defining series is summed until the next term falls
    below 1e-17 of the partial sum; the remainder is then bounded by
    ``x^(K+1) / (sqrt(K+1) (1 - x))`` which is below 1e-16 relative there.
    Closer to 1 the expansion in ``mu = -ln x``,
    ``sqrt(pi/mu) + sum_k zeta(1/2 - k) (-mu)^k / k!``, is used instead.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise ValueError("polylog_half requires 0 <= x < 1")
    if arr.ndim == 0:
        return kernels.polylog_half_scalar(float(arr))
    return kernels.polylog_half(arr)


# 10-point Gauss-Legendre rule on [-1, 1]; each panel is compared with the two
# half panels to estimate its error.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _panel_sums(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    return half * (np.asarray(g(x), dtype=float) @ _GL_W)


def _refine(g, a, b):
    mid = 0.5 * (a + b)
    coarse = _panel_sums(g, a, b)
    left = _panel_sums(g, a, mid)
    right = _panel_sums(g, mid, b)
    fine = left + right
    return fine, np.abs(fine - coarse)


def quad_interval(g, a, b, tol=1e-10, *, rtol=0.0, max_panels=4000, initial_panels=16):
    """Adaptive Gauss-Legendre quadrature of a vectorized ``g`` on finite [a, b].

    Panels with the largest error estimate are bisected first (global
    adaptivity).  Stops once the summed estimate is at most
    ``max(tol, rtol * |value|)``.
    """
    if not tol > 0.0 and not rtol > 0.0:
        raise ValueError("need tol > 0 or rtol > 0")
    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _refine(g, lo, hi)
    evaluations = 30 * initial_panels
    # heap of (-err, counter, lo, hi, val)
    heap = [(-e, i, l, h, v) for i, (l, h, v, e) in enumerate(zip(lo, hi, vals, errs))]
    heapq.heapify(heap)
    counter = len(heap)
    total_err = float(np.sum(errs))
    total_val = float(np.sum(vals))

    def _result():
        items = sorted(heap, key=lambda it: it[2])
        value = math.fsum(it[4] for it in items)
        err = math.fsum(-it[0] for it in items)
        return QuadResult(value, err, evaluations)

    while total_err > max(tol, rtol * abs(total_val)):
        if len(heap) >= max_panels:
            res = _result()
            raise QuadratureError(
                f"quadrature stalled: error estimate {res.abs_error_estimate:.3e} "
                f"above tolerance after {len(heap)} panels", res)
        # bisect a batch of the worst panels at once
        batch = [heapq.heappop(heap) for _ in range(min(len(heap), 8))]
        lo = np.array([it[2] for it in batch])
        hi = np.array([it[3] for it in batch])
        mid = 0.5 * (lo + hi)
        new_lo = np.concatenate([lo, mid])
        new_hi = np.concatenate([mid, hi])
        nv, ne = _refine(g, new_lo, new_hi)
        evaluations += 30 * len(new_lo)
        for l, h, v, e in zip(new_lo, new_hi, nv, ne):
            heapq.heappush(heap, (-e, counter, l, h, v))
            counter += 1
        total_err = math.fsum(-it[0] for it in heap)
        total_val = math.fsum(it[4] for it in heap)
    return _result()


def quad_real_line(f, tol=1e-10, *, rtol=0.0, even=False, scale=1.0, max_panels=4000):
    """Integrate ``f`` over the whole real line.

    Substitutes ``p = scale * tan(u)`` and integrates over ``u`` adaptively.
    ``f`` must accept numpy arrays and decay at least like ``1/p^(1+delta)``.

    Parameters
    ----------
    f : callable
        Vectorized integrand.
    tol : float
        Absolute tolerance on the error estimate.
    rtol : float, optional
        Relative tolerance.  Refinement stops once the error estimate is
        below ``max(tol, rtol * |value|)``.
    even : bool, optional
        Integrand is even; integrate over [0, inf) and double.
    scale : float, optional
        Characteristic momentum of the integrand.

    Returns
    -------
    QuadResult

    Raises
    ------
    QuadratureError
        The error estimate stalls above tolerance.
    """
    if not scale > 0.0:
        raise ValueError("scale must be positive")

    def g(u):
        c = np.cos(u)
        p = scale * np.tan(u)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.asarray(f(p), dtype=float) * scale / (c * c)
        return np.where(c > 0.0, out, 0.0)

    half_pi = 0.5 * math.pi
    factor = 2.0 if even else 1.0
    lo = 0.0 if even else -half_pi
    try:
        res = quad_interval(g, lo, half_pi, tol / factor, rtol=rtol, max_panels=max_panels)
    except QuadratureError as exc:
        r = exc.result
        raise QuadratureError(str(exc), QuadResult(
            factor * r.value, factor * r.abs_error_estimate, r.evaluations)) from None
    return QuadResult(factor * res.value, factor * res.abs_error_estimate, res.evaluations)
