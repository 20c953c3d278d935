# cython: language_level=3
"""Compiled kernels; see ``_kernels_py`` for the reference implementation."""
import numpy as np

from libc.math cimport sqrt, log, M_PI, INFINITY, NAN

from reur._kernels_py import (
    POLYLOG_HALF_COEFFS,
    POLYLOG_SWITCH,
    DIRECT_MAX_TERMS,
    FINITE,
    DIVERGENT,
    UNDEFINED,
)

cdef int _N_COEFFS = len(POLYLOG_HALF_COEFFS)
cdef double[::1] _COEFFS = np.ascontiguousarray(POLYLOG_HALF_COEFFS, dtype=float)
cdef double _SWITCH = POLYLOG_SWITCH
cdef int _MAX_TERMS = DIRECT_MAX_TERMS


cdef inline void _agm_ke(double m, double mc, double* k, double* e) noexcept nogil:
    cdef double a = 1.0
    cdef double b = sqrt(mc)
    cdef double csum = 0.5 * m
    cdef double weight = 0.5
    cdef double c, a_next
    cdef int it
    for it in range(64):
        c = 0.5 * (a - b)
        weight *= 2.0
        csum += weight * c * c
        a_next = 0.5 * (a + b)
        b = sqrt(a * b)
        a = a_next
        # next c ~ c^2 / 4a is below 1e-18; further terms are rounding noise
        if c < 1e-9 * a:
            break
    k[0] = 0.5 * M_PI / a
    e[0] = k[0] * (1.0 - csum)


cdef inline void _ellipke(double m, double* k, double* e) noexcept nogil:
    cdef double one_minus, root, kp, ep
    if m == 1.0:
        k[0] = INFINITY
        e[0] = 1.0
    elif m >= 0.0:
        _agm_ke(m, 1.0 - m, k, e)
    else:
        one_minus = 1.0 - m
        _agm_ke(-m / one_minus, 1.0 / one_minus, &kp, &ep)
        root = sqrt(one_minus)
        k[0] = kp / root
        e[0] = ep * root


def ellipke_scalar(double m):
    cdef double k, e
    _ellipke(m, &k, &e)
    return k, e


def ellipke(m):
    cdef double[::1] mm = np.ascontiguousarray(m, dtype=float).ravel()
    cdef Py_ssize_t n = mm.shape[0]
    k_out = np.empty(n)
    e_out = np.empty(n)
    cdef double[::1] kv = k_out
    cdef double[::1] ev = e_out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _ellipke(mm[i], &kv[i], &ev[i])
    shape = np.shape(m)
    return k_out.reshape(shape), e_out.reshape(shape)


cdef inline double _polylog_half(double x) noexcept nogil:
    cdef double mu, total, power, xk, term
    cdef int k
    if x == 0.0:
        return 0.0
    mu = -log(x)
    if mu <= _SWITCH:
        total = 0.0
        power = 1.0
        for k in range(_N_COEFFS):
            total += _COEFFS[k] * power
            power *= -mu
        return sqrt(M_PI / mu) + total
    total = 0.0
    xk = 1.0
    for k in range(1, _MAX_TERMS + 1):
        xk *= x
        term = xk / sqrt(<double>k)
        total += term
        if term < 1e-17 * total:
            break
    return total


def polylog_half_scalar(double x):
    return _polylog_half(x)


def polylog_half(x):
    cdef double[::1] xx = np.ascontiguousarray(x, dtype=float).ravel()
    cdef Py_ssize_t n = xx.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ov[i] = _polylog_half(xx[i])
    return out.reshape(np.shape(x))


def ising_omegas(double j, double h, cos_half, sin_half):
    c = np.asarray(cos_half, dtype=float)
    s = np.asarray(sin_half, dtype=float)
    return 2.0 * np.sqrt((j - h) ** 2 * c**2 + (j + h) ** 2 * s**2)


cdef inline int _pair_sum(const double[::1] w1, const double[::1] w2,
                          double* out) noexcept nogil:
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef int flag = 0
    for i in range(w1.shape[0]):
        if w1[i] == 0.0 and w2[i] == 0.0:
            out[0] = NAN
            return 2
        if w1[i] == 0.0 or w2[i] == 0.0:
            flag = 1
            continue
        total += (w1[i] - w2[i]) * (w1[i] - w2[i]) / (2.0 * w1[i] * w2[i])
    if flag == 1:
        out[0] = INFINITY
        return 1
    out[0] = total
    return 0


def pair_bound(omega_ref, omega_tgt):
    cdef const double[::1] w1 = np.ascontiguousarray(omega_ref, dtype=float)
    cdef const double[::1] w2 = np.ascontiguousarray(omega_tgt, dtype=float)
    cdef double value
    cdef int flag = _pair_sum(w1, w2, &value)
    return value, flag


def ising_scan(omega_ref, j2, double h2, cos_half, sin_half):
    cdef const double[::1] w1 = np.ascontiguousarray(omega_ref, dtype=float)
    cdef const double[::1] jj = np.ascontiguousarray(j2, dtype=float)
    cdef const double[::1] c = np.ascontiguousarray(cos_half, dtype=float)
    cdef const double[::1] s = np.ascontiguousarray(sin_half, dtype=float)
    cdef Py_ssize_t n_pts = jj.shape[0]
    cdef Py_ssize_t n_modes = w1.shape[0]
    values = np.empty(n_pts)
    flags = np.empty(n_pts, dtype=np.int64)
    cdef double[::1] vv = values
    cdef long long[::1] ff = flags
    cdef double[::1] w2 = np.empty(n_modes)
    cdef Py_ssize_t i, l
    cdef double jm, jp
    with nogil:
        for i in range(n_pts):
            jm = (jj[i] - h2) * (jj[i] - h2)
            jp = (jj[i] + h2) * (jj[i] + h2)
            for l in range(n_modes):
                # same rounding order as ising_omegas: jm * (c * c)
                w2[l] = 2.0 * sqrt(jm * (c[l] * c[l]) + jp * (s[l] * s[l]))
            ff[i] = _pair_sum(w1, w2, &vv[i])
    return values, flags
