"""Independent cross-checks for the analytic routines.

Monte-Carlo relative entropies use ``numpy.random.Philox`` (a counter-based
generator) for uniforms and the Box-Muller transform for normals, so every
estimate is a deterministic function of ``(seed, n_samples)``.  The sample
budget is split into fixed-size chunks, chunk ``i`` drawing from the
sub-stream ``SeedSequence(seed, spawn_key=(i,))``; chunking never changes the
result.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import specfn
from .gaussian import _check_pair, _check_pd, _inv
from .specfn import QuadratureError, QuadResult

MAX_MC_MODES = 8
MIN_MC_SAMPLES = 1000
CHUNK = 1 << 14


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if not self.std_error >= 0.0:
            raise ValueError("std_error must be non-negative")


def _normals(seed, chunk, n):
    """``(n, 2)`` standard normals per row from Box-Muller."""
    ss = np.random.SeedSequence(seed, spawn_key=(chunk,))
    u = np.random.Generator(np.random.Philox(ss)).random((n, 2))
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))  # 1 - u in (0, 1]
    angle = 2.0 * math.pi * u[:, 1]
    return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)


def _chol(blocks):
    a = np.sqrt(blocks[:, 0, 0])
    b = blocks[:, 1, 0] / a
    c = np.sqrt(blocks[:, 1, 1] - b * b)
    return a, b, c


def _log_density_terms(x, mean, inv):
    d = x - mean[None, :, :]
    return np.einsum("sli,lij,slj->s", d, inv, d)


def mc_kl(state, reference, n_samples=100_000, seed=0):
    """Monte-Carlo estimate of the relative entropy of two bosonic Gaussians.

    Samples ``x ~ q`` (the state's density, mean included) and averages
    ``ln q(x) - ln qbar(x)``.

    Raises
    ------
    ValueError
        More than 8 modes, fewer than 1000 samples, fermionic or degenerate
        input.
    """
    _check_pair(state, reference)
    n_modes = state.grid.n_modes
    if n_modes > MAX_MC_MODES:
        raise ValueError(f"mc_kl is capped at {MAX_MC_MODES} modes, got {n_modes}")
    n_samples = int(n_samples)
    if n_samples < MIN_MC_SAMPLES:
        raise ValueError(f"need at least {MIN_MC_SAMPLES} samples")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be unsigned")
    det_c = _check_pd(state, "state")
    det_r = _check_pd(reference, "reference")
    inv_c = _inv(state.cov, det_c)
    inv_r = _inv(reference.cov, det_r)
    a, b, c = _chol(state.cov)
    const = 0.5 * math.fsum(np.log(det_r / det_c))

    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 0
    while done < n_samples:
        n = min(CHUNK, n_samples - done)
        z = _normals(seed, chunk, n * n_modes).reshape(n, n_modes, 2)
        x = np.empty_like(z)
        x[:, :, 0] = state.mean[None, :, 0] + a * z[:, :, 0]
        x[:, :, 1] = state.mean[None, :, 1] + b * z[:, :, 0] + c * z[:, :, 1]
        log_ratio = const + 0.5 * (_log_density_terms(x, reference.mean, inv_r)
                                   - _log_density_terms(x, state.mean, inv_c))
        total += math.fsum(log_ratio)
        total_sq += math.fsum(log_ratio * log_ratio)
        done += n
        chunk += 1
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return McEstimate(mean, math.sqrt(var / n_samples), n_samples, seed)


def _distinct_mass_integrand(m1, m2):
    d = (m1 - m2) * (m1 + m2)

    def f(p):
        w1 = np.hypot(m1, p)
        w2 = np.hypot(m2, p)
        # (w1/w2 + w2/w1)/2 - 1 = (w1 - w2)^2 / (2 w1 w2), w1 - w2 = d / (w1 + w2)
        s = w1 + w2
        return d * d / (2.0 * w1 * w2 * s * s)

    return f


def quad_distinct_mass_vacuum(m1, m2, tol=1e-13):
    """Quadrature of ``int dp [(w1/w2 + w2/w1)/2 - 1]`` over the real line.

    Raises
    ------
    QuadratureError
        A zero mass, where the integrand behaves like ``1/|p|`` at the origin.
    """
    m1 = float(m1)
    m2 = float(m2)
    if m1 < 0.0 or m2 < 0.0:
        raise ValueError("masses must be non-negative")
    if m1 == 0.0 or m2 == 0.0:
        raise QuadratureError("integrand is not integrable at p = 0 for a massless partner",
                              QuadResult(math.inf, math.inf, 1))
    if m1 == m2:
        return QuadResult(0.0, 0.0, 1)
    return specfn.quad_real_line(_distinct_mass_integrand(m1, m2), 1e-300, rtol=tol,
                                 even=True, scale=math.sqrt(m1 * m2))


def series_nonrel_thermal(m, temperature, n_terms=None):
    """``sum_k exp(-k m/T) sqrt(2 pi m T / k)`` for ``k = 1..n_terms``.

    With ``n_terms=None`` terms are added until the geometric tail bound drops
    below 1e-13 of the partial sum.
    """
    m = float(m)
    t = float(temperature)
    if not m > 0.0 or not t > 0.0:
        raise ValueError("need m > 0 and T > 0")
    x = math.exp(-m / t)
    pref = math.sqrt(2.0 * math.pi * m * t)
    terms = []
    k = 0
    while True:
        k += 1
        term = pref * x**k / math.sqrt(k)
        terms.append(term)
        if n_terms is not None:
            if k >= n_terms:
                break
            continue
        tail = pref * x ** (k + 1) / (math.sqrt(k + 1) * (1.0 - x))
        if tail < 1e-13 * math.fsum(terms) or term == 0.0:
            break
    return math.fsum(terms)
