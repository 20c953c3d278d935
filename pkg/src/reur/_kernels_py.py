"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; ``reur._backend`` picks one of
the two at import time.  All inputs are assumed validated by the callers in
``specfn`` and ``ising``.
"""
import math

import numpy as np
from scipy.special import gamma, zeta

ZETA_HALF = -1.4603545088095868128894991525152980125
# Series on the small-|ln x| side: Li_{1/2}(e^{-mu}) = sqrt(pi/mu) + sum_k a_k (-mu)^k.
# Converges for mu < 2 pi; used for mu <= POLYLOG_SWITCH only, where 40 terms
# leave a remainder below (1 / 2 pi)^40.
POLYLOG_SWITCH = 1.0
POLYLOG_SERIES_TERMS = 40
DIRECT_MAX_TERMS = 200

UNDEFINED = 2
DIVERGENT = 1
FINITE = 0


def _zeta_negative_half(k):
    """zeta(1/2 - k) from the functional equation, k >= 1."""
    s = 0.5 - k
    return (2.0**s * math.pi ** (s - 1.0) * math.sin(0.5 * math.pi * s)
            * gamma(1.0 - s) * zeta(1.0 - s))


def _polylog_half_coeffs(n_terms=POLYLOG_SERIES_TERMS):
    coeffs = np.empty(n_terms)
    coeffs[0] = ZETA_HALF
    for k in range(1, n_terms):
        coeffs[k] = _zeta_negative_half(k) / math.factorial(k)
    return coeffs


POLYLOG_HALF_COEFFS = _polylog_half_coeffs()


def _agm_ke(m, mc):
    """K and E for 0 <= m < 1 given m and mc = 1 - m."""
    a = 1.0
    b = math.sqrt(mc)
    csum = 0.5 * m
    weight = 0.5
    for _ in range(64):
        c = 0.5 * (a - b)
        weight *= 2.0
        csum += weight * c * c
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        # next c ~ c^2 / 4a is below 1e-18; further terms are rounding noise
        if c < 1e-9 * a:
            break
    k = 0.5 * math.pi / a
    return k, k * (1.0 - csum)


def ellipke_scalar(m):
    if m == 1.0:
        return math.inf, 1.0
    if m >= 0.0:
        return _agm_ke(m, 1.0 - m)
    # imaginary-modulus transformation onto (0, 1)
    one_minus = 1.0 - m
    kp, ep = _agm_ke(-m / one_minus, 1.0 / one_minus)
    root = math.sqrt(one_minus)
    return kp / root, ep * root


def ellipke(m):
    m = np.asarray(m, dtype=float)
    k = np.empty_like(m)
    e = np.empty_like(m)
    for i, mi in np.ndenumerate(m):
        k[i], e[i] = ellipke_scalar(float(mi))
    return k, e


def polylog_half_scalar(x):
    if x == 0.0:
        return 0.0
    mu = -math.log(x)
    if mu <= POLYLOG_SWITCH:
        total = 0.0
        power = 1.0
        for a_k in POLYLOG_HALF_COEFFS:
            total += a_k * power
            power *= -mu
        return float(math.sqrt(math.pi / mu) + total)
    total = 0.0
    xk = 1.0
    for k in range(1, DIRECT_MAX_TERMS + 1):
        xk *= x
        term = xk / math.sqrt(k)
        total += term
        if term < 1e-17 * total:
            break
    return total


def polylog_half(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i, xi in np.ndenumerate(x):
        out[i] = polylog_half_scalar(float(xi))
    return out


def ising_omegas(j, h, cos_half, sin_half):
    """Lattice Ising frequencies 2 sqrt((J-h)^2 cos^2 + (J+h)^2 sin^2) per mode."""
    cos_half = np.asarray(cos_half, dtype=float)
    sin_half = np.asarray(sin_half, dtype=float)
    return 2.0 * np.sqrt((j - h) ** 2 * cos_half**2 + (j + h) ** 2 * sin_half**2)


def pair_bound(omega_ref, omega_tgt):
    """Sum over modes of (w1/w2 + w2/w1)/2 - 1 with divergence bookkeeping.

    Returns ``(value, flag)`` with flag one of FINITE, DIVERGENT, UNDEFINED.
    """
    total = 0.0
    flag = FINITE
    for w1, w2 in zip(omega_ref, omega_tgt):
        if w1 == 0.0 and w2 == 0.0:
            return math.nan, UNDEFINED
        if w1 == 0.0 or w2 == 0.0:
            flag = DIVERGENT
            continue
        # (w1/w2 + w2/w1)/2 - 1 without the cancellation near w1 == w2
        total += (w1 - w2) * (w1 - w2) / (2.0 * w1 * w2)
    if flag == DIVERGENT:
        return math.inf, DIVERGENT
    return total, FINITE


def ising_scan(omega_ref, j2, h2, cos_half, sin_half):
    """Vacuum-vs-vacuum lattice bound for every target coupling in ``j2``."""
    omega_ref = np.asarray(omega_ref, dtype=float)
    j2 = np.asarray(j2, dtype=float)
    values = np.empty(j2.shape[0])
    flags = np.empty(j2.shape[0], dtype=np.int64)
    for i, j in enumerate(j2):
        tgt = ising_omegas(j, h2, cos_half, sin_half)
        values[i], flags[i] = pair_bound(omega_ref, tgt)
    return values, flags
