"""Transverse-field Ising chain after the Jordan-Wigner map.

Couplings ``(J, h)`` on a periodic chain of ``N`` sites with spacing ``eps``
give lattice fermions with

    kappa_l = 2 [h - J cos(theta_l)],   lambda_l = J sin(theta_l),
    w_l^2 = kappa_l^2 + 4 lambda_l^2 = 4 [J^2 + h^2 - 2 J h cos(theta_l)],

where ``theta_l = eps dk l = 2 pi l / N``.  The vacuum-vs-vacuum bound between
two coupling sets is ``sum_l (w1_l - w2_l)^2 / (2 w1_l w2_l)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._kernels_py import DIVERGENT, UNDEFINED
from .bounds import BoundReport, Method
from .lattice import IsingLattice, MomentumGrid


class UndefinedAngleError(ValueError):
    """``kappa_l = lambda_l = 0``: the Bogoliubov angle is not defined."""


@dataclass(frozen=True)
class IsingCouplings:
    J: float
    h: float
    epsilon: float = 1.0
    n_modes: int = 10

    def __post_init__(self):
        if self.J == 0.0 and self.h == 0.0:
            raise ValueError("couplings (J, h) = (0, 0) describe no chain")
        if not (math.isfinite(self.J) and math.isfinite(self.h)):
            raise ValueError("couplings must be finite")
        # validates N and epsilon
        MomentumGrid(self.n_modes, self.epsilon)

    @property
    def grid(self):
        return MomentumGrid(self.n_modes, self.epsilon)

    @property
    def gamma(self):
        return 2.0 * (self.J - self.h)

    @property
    def v(self):
        return 2.0 * self.epsilon * self.J

    @property
    def dispersion(self):
        return IsingLattice(self.J, self.h, self.epsilon)

    @property
    def critical(self):
        return abs(self.J) == abs(self.h)

    def omegas(self):
        c, s = self.grid.half_phase()
        return kernels.ising_omegas(self.J, self.h, c, s)

    def swapped(self):
        return IsingCouplings(self.h, self.J, self.epsilon, self.n_modes)


def flip_sign_J(c):
    return IsingCouplings(-c.J, c.h, c.epsilon, c.n_modes)


def _phase(c, l):
    """``cos`` and ``sin`` of ``2 pi l / N`` with exact zeros on the axes."""
    grid = c.grid
    l = grid.modes if l is None else grid.wrap(l)
    l = np.asarray(l)
    n = grid.n_modes
    angle = 2.0 * math.pi * l / n
    on_real_axis = (2 * l) % n == 0
    on_imag_axis = ((4 * l) % n == 0) & ~on_real_axis
    cos = np.where(on_imag_axis, 0.0, np.cos(angle))
    sin = np.where(on_real_axis, 0.0, np.sin(angle))
    return cos, sin


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def kappa_lambda(c, l=None):
    """``(kappa_l, lambda_l)`` for one mode label or all modes (``l=None``)."""
    cos, sin = _phase(c, l)
    return _scalar(2.0 * (c.h - c.J * cos)), _scalar(c.J * sin)


def bogoliubov_angle(c, l):
    """Angle ``theta in [0, 2 pi)`` with ``tan theta = 2 lambda / kappa``.

    The branch follows ``atan2(2 lambda, kappa)``, so ``cos theta = kappa / w``
    and ``sin theta = 2 lambda / w``.

    Raises
    ------
    UndefinedAngleError
        At the gapless mode of a critical chain, where ``kappa = lambda = 0``.
    """
    kappa, lam = kappa_lambda(c, l)
    kappa = np.asarray(kappa)
    lam = np.asarray(lam)
    if np.any((kappa == 0.0) & (lam == 0.0)):
        raise UndefinedAngleError("kappa_l = lambda_l = 0: Bogoliubov angle undefined")
    theta = np.mod(np.arctan2(2.0 * lam, kappa), 2.0 * math.pi)
    return _scalar(theta)


def bogoliubov_coefficients(c, l):
    """``(u, v, d_plus, d_minus, off)`` for mode(s) ``l``.

    ``u = cos(theta/2)``, ``v = sin(theta/2)``.  ``d_plus = kappa u^2 + 2 lambda u v``
    and ``d_minus = -kappa v^2 + 2 lambda u v`` are the diagonal coefficients,
    equal to ``(kappa + w)/2`` and ``(w - kappa)/2``; ``off`` is the residual
    off-diagonal coefficient ``kappa u v - lambda (u^2 - v^2)``, zero up to
    rounding.
    """
    kappa, lam = kappa_lambda(c, l)
    theta = bogoliubov_angle(c, l)
    u = np.cos(0.5 * np.asarray(theta))
    v = np.sin(0.5 * np.asarray(theta))
    d_plus = kappa * u * u + 2.0 * lam * u * v
    d_minus = -kappa * v * v + 2.0 * lam * u * v
    off = kappa * u * v - lam * (u * u - v * v)
    return tuple(_scalar(x) for x in (u, v, d_plus, d_minus, off))


def _check_same_lattice(ref, target):
    if ref.n_modes != target.n_modes or not math.isclose(
            ref.epsilon, target.epsilon, rel_tol=1e-12):
        raise ValueError("reference and target must share N and epsilon")


def _report(value, flag):
    if flag == DIVERGENT:
        return BoundReport.diverging(Method.TRACE_FORMULA)
    if flag == UNDEFINED:
        return BoundReport(math.nan, Method.TRACE_FORMULA)
    return BoundReport(value, Method.TRACE_FORMULA)


def ising_vacuum_bound(ref, target):
    """Lattice bound between the vacua of two coupling sets.

    Divergent when exactly one of ``w1_l``, ``w2_l`` vanishes for some mode;
    ``nan`` (undefined) when both vanish in the same mode.
    """
    _check_same_lattice(ref, target)
    value, flag = kernels.pair_bound(ref.omegas(), target.omegas())
    return _report(value, int(flag))


@dataclass(frozen=True, eq=False)
class ScanCurve:
    reference: IsingCouplings
    h2: float
    ratio_grid: np.ndarray
    bounds: tuple
    minima: tuple

    @property
    def values(self):
        return np.array([b.value for b in self.bounds])

    @property
    def divergent(self):
        return np.array([b.divergent for b in self.bounds])


def default_ratio_grid():
    """1201 points ``k/200`` for ``k = -600..600``; hits +-1 and the J1 values exactly."""
    return np.arange(-600, 601) / 200.0


def local_minima(ratios, values):
    """Interior local minima of a sampled curve.

    A run of equal finite values whose two outer neighbours are finite and
    strictly larger is a minimum.  A run longer than one point is reported at
    its member with the smallest ``|ratio|``.
    """
    ratios = np.asarray(ratios, dtype=float)
    values = np.asarray(values, dtype=float)
    out = []
    n = len(values)
    i = 1
    while i < n - 1:
        if not np.isfinite(values[i]):
            i += 1
            continue
        j = i
        while j + 1 < n and values[j + 1] == values[i]:
            j += 1
        left, right = values[i - 1], values[j + 1] if j + 1 < n else math.nan
        if (np.isfinite(left) and np.isfinite(right)
                and left > values[i] and right > values[i]):
            run = range(i, j + 1)
            k = min(run, key=lambda idx: (abs(ratios[idx]), idx))
            out.append((float(ratios[k]), float(values[k])))
        i = j + 1
    return tuple(out)


def scan_bound(ref, h2, ratio_grid=None, *, backend=None):
    """Vacuum bound against targets ``J2 = ratio * h2`` over a sorted grid.

    Parameters
    ----------
    ref : IsingCouplings
    h2 : float
        Target transverse field, non-zero.
    ratio_grid : array_like, optional
        Ascending finite ``J2/h2`` values; defaults to :func:`default_ratio_grid`.
    backend : module, optional
        Kernel module override (used by the benchmark).
    """
    h2 = float(h2)
    if h2 == 0.0 or not math.isfinite(h2):
        raise ValueError("h2 must be finite and non-zero")
    grid = default_ratio_grid() if ratio_grid is None else np.asarray(ratio_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("ratio grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(grid)):
        raise ValueError("ratio grid must be finite")
    if np.any(np.diff(grid) < 0.0):
        raise ValueError("ratio grid must be sorted ascending")
    k = kernels if backend is None else backend
    c, s = ref.grid.half_phase()
    w1 = k.ising_omegas(ref.J, ref.h, c, s)
    values, flags = k.ising_scan(w1, grid * h2, h2, c, s)
    bounds = tuple(_report(v, int(f)) for v, f in zip(values, flags))
    minima = local_minima(grid, [b.value for b in bounds])
    grid = grid.copy()
    grid.flags.writeable = False
    return ScanCurve(ref, h2, grid, bounds, minima)


def _same(a, b, tol):
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def mirror_check(ref, target, tol=1e-12):
    """Sign flip of J in either argument gives the same bound.

    Flipping ``J`` maps mode ``l`` onto ``l + N/2``, so both orderings sum the
    same per-mode terms.
    """
    a = ising_vacuum_bound(flip_sign_J(ref), target).value
    b = ising_vacuum_bound(ref, flip_sign_J(target)).value
    return _same(a, b, tol)


def swap_check(ref, target, tol=1e-12):
    """``J <-> h`` exchange in either argument leaves the bound unchanged."""
    base = ising_vacuum_bound(ref, target).value
    return (_same(base, ising_vacuum_bound(ref.swapped(), target).value, tol)
            and _same(base, ising_vacuum_bound(ref, target.swapped()).value, tol))

