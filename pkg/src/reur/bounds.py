"""Relative-entropic uncertainty bounds.

Every routine returns a :class:`BoundReport`.  Divergences (squeezing at
``lambda -> 1``, a massless partner in the distinct-mass bound, gapless bosonic
thermal integrands) come back as ``value = inf`` with ``divergent`` set; they
are data, not exceptions.

Density bounds integrate over plain ``dp`` (no ``1/2pi``).
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import lattice, specfn
from .gaussian import Statistics, _check_pair, _check_pd


class Method(str, enum.Enum):
    TRACE_FORMULA = "TraceFormula"
    PARTICLE_SUM = "ParticleSum"
    QUADRATURE = "Quadrature"
    CLOSED_FORM = "ClosedForm"
    ASYMPTOTE = "Asymptote"


class Regime(str, enum.Enum):
    ZERO_RATIO = "ZeroRatio"
    NEAR_ONE = "NearOne"
    INFINITE_RATIO = "InfiniteRatio"


@dataclass(frozen=True)
class BoundReport:
    """A bound value with provenance of the number.

    ``value`` is non-negative, ``inf`` when ``divergent``, or ``nan`` for the
    undefined 0/0 case of two gapless frequencies meeting in the same mode.
    """

    value: float
    method: Method
    divergent: bool = False
    error_estimate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        v = float(self.value)
        if self.divergent and v != math.inf:
            raise ValueError("divergent bounds must carry value inf")
        if not self.divergent and v == math.inf:
            raise ValueError("infinite value without divergent flag")
        if v < 0.0:
            raise ValueError(f"bound must be non-negative, got {v}")
        if not self.error_estimate >= 0.0:
            raise ValueError("error_estimate must be non-negative")
        object.__setattr__(self, "value", v)

    @property
    def undefined(self):
        return math.isnan(self.value)

    @classmethod
    def diverging(cls, method):
        return cls(math.inf, method, True, 0.0)


def bound_free(state, vacuum):
    """Free-field trace bound ``1/2 tr[Cbar^-1 (C - Cbar)]`` with unconnected C.

    Bosons: ``1/2 sum_l [tr(Cbar_l^-1 (C_l + mu_l mu_l^T)) - 2]``.  Fermions use
    the reduction to the particle sum, ``sum_l (1 - c_l / cbar_l)``.
    """
    _check_pair(state, vacuum, allow_fermi=True)
    if vacuum.divergent:
        return BoundReport.diverging(Method.TRACE_FORMULA)
    if not state.is_bose:
        per_mode = 1.0 - state.cferm / vacuum.cferm
        return BoundReport(max(math.fsum(per_mode), 0.0), Method.TRACE_FORMULA)
    r = vacuum.cov
    det = r[:, 0, 0] * r[:, 1, 1] - r[:, 0, 1] * r[:, 1, 0]
    if np.any(det <= 0.0) or np.any(r[:, 0, 0] <= 0.0):
        raise ValueError("vacuum blocks must be positive definite")
    c = state.cov
    mu = state.mean
    cpp = c[:, 0, 0] + mu[:, 0] * mu[:, 0]
    cqq = c[:, 1, 1] + mu[:, 1] * mu[:, 1]
    cpq = c[:, 0, 1] + mu[:, 0] * mu[:, 1]
    # tr(R^-1 M) for symmetric 2x2 blocks
    trace = (r[:, 1, 1] * cpp + r[:, 0, 0] * cqq - 2.0 * r[:, 0, 1] * cpq) / det
    value = 0.5 * math.fsum(trace - 2.0)
    return BoundReport(max(value, 0.0), Method.TRACE_FORMULA)


def bound_particle_number(occ):
    """``B = sum_l <n_l>``, identical for both statistics."""
    return BoundReport(occ.total, Method.PARTICLE_SUM)


def tmsv_occupation(lam):
    """Per-mode occupation ``lambda^2 / (1 - lambda^2)`` of a squeezed pair.

    Returns ``inf`` for ``lambda >= 1``.
    """
    lam = float(lam)
    if math.isnan(lam) or lam < 0.0:
        raise ValueError(f"squeezing parameter must be >= 0, got {lam}")
    if lam >= 1.0:
        return math.inf
    return lam * lam / (1.0 - lam * lam)


def squeezing_bound(n_pairs, lam):
    """``B = 2 N lambda^2 / (1 - lambda^2)`` for ``N`` equally squeezed pairs.

    Computed as ``N * (2 n)`` so that the result is exactly proportional to
    ``N``.
    """
    if isinstance(n_pairs, bool) or int(n_pairs) != n_pairs or n_pairs < 1:
        raise ValueError(f"n_pairs must be a positive integer, got {n_pairs!r}")
    occ = tmsv_occupation(lam)
    if occ == math.inf:
        return BoundReport.diverging(Method.CLOSED_FORM)
    return BoundReport(int(n_pairs) * (2.0 * occ), Method.CLOSED_FORM)


def _occupation(x, statistics):
    with np.errstate(over="ignore"):
        if statistics is Statistics.BOSE:
            return 1.0 / np.expm1(x)
        return 1.0 / (np.exp(x) + 1.0)


def thermal_bound(dispersion, temperature, statistics=Statistics.BOSE, tol=1e-12):
    """Density bound ``b = int dp n(w(p))`` of a thermal state.

    Parameters
    ----------
    dispersion : RelativisticContinuum, NonRelativisticContinuum or MajoranaContinuum
    temperature : float
        ``T > 0``.
    statistics : Statistics
        Bose-Einstein ``1/(e^{w/T} - 1)`` or Fermi-Dirac ``1/(e^{w/T} + 1)``.
    tol : float
        Relative tolerance of the quadrature.

    Returns
    -------
    BoundReport
        Method ``Quadrature`` with the quadrature error estimate.  A gapless
        bosonic dispersion gives a divergent report.
    """
    stats = Statistics(statistics)
    t = float(temperature)
    if not t > 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if dispersion.lattice:
        raise TypeError("thermal_bound integrates continuum dispersions only")
    gap = lattice.omega(dispersion, p=0.0)
    if stats is Statistics.BOSE and gap == 0.0:
        return BoundReport.diverging(Method.QUADRATURE)

    def f(p):
        return _occupation(lattice.omega(dispersion, p=p) / t, stats)

    if isinstance(dispersion, lattice.NonRelativisticContinuum):
        scale = math.sqrt(2.0 * dispersion.m * t)
    elif isinstance(dispersion, lattice.MajoranaContinuum):
        scale = t / abs(dispersion.v) if dispersion.v else 1.0
    else:
        scale = max(t, math.sqrt(t * dispersion.m))
    res = specfn.quad_real_line(f, 1e-300, rtol=tol, even=True, scale=scale)
    return BoundReport(max(res.value, 0.0), Method.QUADRATURE,
                       error_estimate=res.abs_error_estimate)


def nonrel_thermal_closed_form(m, temperature):
    """``sqrt(2 pi m T) Li_{1/2}(exp(-m/T))``."""
    if not m > 0.0 or not temperature > 0.0:
        raise ValueError("need m > 0 and T > 0")
    return math.sqrt(2.0 * math.pi * m * temperature) * specfn.polylog_half(
        math.exp(-m / temperature))


def _distinct_mass_vacuum(m1, m2):
    r2 = (m2 / m1) ** 2
    k = specfn.ellip_k(1.0 - r2)
    e = specfn.ellip_e(1.0 - 1.0 / r2)
    return m1 * (1.0 + r2) * k - 2.0 * m2 * e


def distinct_mass_bound(m1, m2, particles=()):
    """Bound between relativistic vacua of masses ``m1`` (reference) and ``m2``.

    ``b = m1 (1 + m2^2/m1^2) K(1 - m2^2/m1^2) - 2 m2 E(1 - m1^2/m2^2)
    + 1/2 sum_p n(p) [w1(p)/w2(p) + w2(p)/w1(p)]`` with ``w_i = sqrt(m_i^2 + p^2)``.

    Parameters
    ----------
    m1, m2 : float
        Non-negative masses.  A zero mass makes the vacuum term diverge
        logarithmically.
    particles : iterable of (p, n)
        Discrete excitations at momentum ``p`` with occupation ``n >= 0``.
    """
    m1 = float(m1)
    m2 = float(m2)
    if not (m1 >= 0.0 and m2 >= 0.0):
        raise ValueError("masses must be non-negative")
    particles = [(float(p), float(n)) for p, n in particles]
    if any(not n >= 0.0 for _, n in particles):
        raise ValueError("occupations must be non-negative")
    if m1 == 0.0 or m2 == 0.0:
        return BoundReport.diverging(Method.CLOSED_FORM)
    vac = max(_distinct_mass_vacuum(m1, m2), 0.0)
    extra = []
    for p, n in particles:
        w1 = math.hypot(m1, p)
        w2 = math.hypot(m2, p)
        extra.append(0.5 * n * (w1 / w2 + w2 / w1))
    return BoundReport(vac + math.fsum(extra), Method.CLOSED_FORM)


def distinct_mass_asymptote(regime, m1, m2):
    """Leading behaviour of the vacuum distinct-mass bound.

    ``ZeroRatio``: ``m1 ln(4 m1 / (e^2 m2))``; ``NearOne``:
    ``(pi/4) m1 (1 - m2/m1)^2``; ``InfiniteRatio``: ``m2 ln(4 m2 / (e^2 m1))``.
    The caller picks the regime.
    """
    regime = Regime(regime)
    m1 = float(m1)
    m2 = float(m2)
    if regime is Regime.NEAR_ONE:
        return 0.25 * math.pi * m1 * (1.0 - m2 / m1) ** 2
    if regime is Regime.ZERO_RATIO:
        return m1 * (math.log(4.0 * m1 / m2) - 2.0)
    return m2 * (math.log(4.0 * m2 / m1) - 2.0)


def second_moment_relation(state, vacuum, atol=1e-12):
    """Determinant ratio ``prod_l det C_l / det Cbar_l`` and whether it is >= 1.

    For Gaussian states the maximum-entropy reference coincides with the state,
    so the relation reduces to ``det_ratio >= 1``; ``atol`` absorbs rounding.
    """
    _check_pair(state, vacuum)
    det_c = _check_pd(state, "state")
    det_r = _check_pd(vacuum, "vacuum")
    ratio = math.prod(det_c / det_r)
    return ratio, bool(ratio >= 1.0 - atol)
