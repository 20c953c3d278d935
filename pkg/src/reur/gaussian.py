"""Gaussian Husimi states at the covariance level.

Every per-mode quantity is stored in the reduced convention: the lattice factor
``2 pi / dk`` is divided out, so the bosonic vacuum block of mode ``l`` is
exactly ``diag(1/w_l, w_l)`` and the fermionic vacuum coefficient is ``1/w_l``.
Relative entropies, entropy differences and bounds are invariant under this
rescaling.

Bosonic blocks are symmetric 2x2 matrices over (phi, pi).  A fermionic block is
anti-symmetric, ``i * [[0, c], [-c, 0]]``, and only the real coefficient ``c`` is
kept.
"""
import enum
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lattice
from .lattice import MomentumGrid


class Statistics(str, enum.Enum):
    BOSE = "bose"
    FERMI = "fermi"


class GaplessModeError(ValueError):
    """A vacuum was requested for a dispersion with a zero frequency."""


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Per-mode Gaussian Husimi data on a momentum grid.

    ``cov`` has shape ``(N, 2, 2)`` for bosons and ``(N,)`` for fermions.
    ``mean`` (``(N, 2)``) and ``t_terms`` (``(N,)``) are only meaningful for
    bosons and must vanish for fermions.
    """

    statistics: Statistics
    grid: MomentumGrid
    cov: np.ndarray
    mean: Optional[np.ndarray] = None
    t_terms: Optional[np.ndarray] = None

    def __post_init__(self):
        stats = Statistics(self.statistics)
        n = self.grid.n_modes
        cov = _frozen(self.cov)
        mean = _frozen(np.zeros((n, 2)) if self.mean is None else self.mean)
        t = _frozen(np.zeros(n) if self.t_terms is None else self.t_terms)
        if mean.shape != (n, 2):
            raise ValueError(f"mean must have shape ({n}, 2), got {mean.shape}")
        if t.shape != (n,):
            raise ValueError(f"t_terms must have shape ({n},), got {t.shape}")
        if stats is Statistics.BOSE:
            if cov.shape != (n, 2, 2):
                raise ValueError(f"bosonic cov must have shape ({n}, 2, 2), got {cov.shape}")
            off = cov[:, 0, 1] - cov[:, 1, 0]
            if np.any(np.abs(off) > 1e-12 * (1.0 + np.abs(cov[:, 0, 1]))):
                raise ValueError("bosonic covariance blocks must be symmetric")
        else:
            if cov.shape != (n,):
                raise ValueError(f"fermionic cov must have shape ({n},), got {cov.shape}")
            if np.any(mean != 0.0):
                raise ValueError("fermionic states have vanishing field expectation values")
            if np.any(t != 0.0):
                raise ValueError("T-terms are defined for bosons only")
        object.__setattr__(self, "statistics", stats)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "t_terms", t)

    @property
    def is_bose(self):
        return self.statistics is Statistics.BOSE

    @property
    def divergent(self):
        """True when some block carries a non-finite entry (gapless vacuum)."""
        return not bool(np.all(np.isfinite(self.cov)))

    @property
    def cphi(self):
        return self.cov[:, 0, 0]

    @property
    def cpi(self):
        return self.cov[:, 1, 1]

    @property
    def cphipi(self):
        return self.cov[:, 0, 1]

    @property
    def cferm(self):
        return self.cov


@dataclass(frozen=True, eq=False)
class OccupationSpectrum:
    """Mean particle number per mode."""

    grid: MomentumGrid
    values: np.ndarray
    statistics: Statistics = Statistics.BOSE

    def __post_init__(self):
        stats = Statistics(self.statistics)
        values = _frozen(self.values)
        if values.shape != (self.grid.n_modes,):
            raise ValueError(
                f"need one occupation per mode ({self.grid.n_modes}), got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("occupations must be finite")
        if np.any(values < 0.0):
            raise ValueError("occupations must be non-negative")
        if stats is Statistics.FERMI and np.any(values > 1.0):
            raise ValueError("fermionic occupations must lie in [0, 1]")
        object.__setattr__(self, "statistics", stats)
        object.__setattr__(self, "values", values)

    @property
    def total(self):
        return math.fsum(self.values)


def vacuum_from_omega(grid, omega, statistics=Statistics.BOSE, *, allow_gapless=False):
    """Vacuum state from explicit per-mode frequencies."""
    stats = Statistics(statistics)
    w = np.asarray(omega, dtype=float)
    if w.shape != (grid.n_modes,):
        raise ValueError(f"need {grid.n_modes} frequencies, got shape {w.shape}")
    if np.any(w < 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("frequencies must be finite and non-negative")
    gapless = w == 0.0
    if np.any(gapless) and not allow_gapless:
        raise GaplessModeError(
            f"gapless mode(s) {grid.modes[gapless].tolist()}: vacuum covariance diverges")
    with np.errstate(divide="ignore"):
        inv = np.where(gapless, np.inf, 1.0 / np.where(gapless, 1.0, w))
    if stats is Statistics.FERMI:
        return GaussianState(stats, grid, inv)
    cov = np.zeros((grid.n_modes, 2, 2))
    cov[:, 0, 0] = inv
    cov[:, 1, 1] = np.where(gapless, 0.0, w)
    return GaussianState(stats, grid, cov)


def vacuum_state(grid, dispersion, statistics=Statistics.BOSE, *, allow_gapless=False):
    """Vacuum covariance for ``dispersion`` sampled on ``grid``.

    Bosons get blocks ``diag(1/w_l, w_l)``, fermions ``c_l = 1/w_l``.  Lattice
    dispersions are evaluated per mode label, continuum ones at ``p_l = dk l``.

    Raises
    ------
    GaplessModeError
        Some ``w_l == 0`` and ``allow_gapless`` is false.  With
        ``allow_gapless=True`` the state is returned with infinite entries and
        ``state.divergent`` set.
    """
    if dispersion.lattice:
        w = lattice.omega(dispersion, grid=grid)
    else:
        w = lattice.omega(dispersion, p=grid.momenta)
    return vacuum_from_omega(grid, np.atleast_1d(w), statistics, allow_gapless=allow_gapless)


def vacuum_frequencies(vacuum):
    """Recover ``w_l`` from a vacuum state."""
    if vacuum.is_bose:
        return np.sqrt(vacuum.cpi / vacuum.cphi)
    return 1.0 / vacuum.cferm


def excited_state(vacuum, occ, t_terms=None):
    """Excite every mode of ``vacuum`` to the mean occupation ``occ``.

    Bosons: ``c_phi = (1 + n + T) / w`` and ``c_pi = w (1 + n - T)``.
    Fermions: ``c = (1 - n) / w``; T-terms are not accepted.
    """
    if Statistics(occ.statistics) is not vacuum.statistics:
        raise ValueError(
            f"statistics mismatch: state is {vacuum.statistics.value}, "
            f"occupations are {Statistics(occ.statistics).value}")
    if occ.grid != vacuum.grid:
        raise ValueError("occupation spectrum lives on a different grid")
    n = occ.values
    if not vacuum.is_bose:
        if t_terms is not None and np.any(np.asarray(t_terms) != 0.0):
            raise ValueError("T-terms are defined for bosons only")
        return GaussianState(vacuum.statistics, vacuum.grid, vacuum.cferm * (1.0 - n))
    t = np.zeros_like(n) if t_terms is None else np.asarray(t_terms, dtype=float)
    if t.shape != n.shape:
        raise ValueError("need one T-term per mode")
    if np.any(np.abs(t) > 1.0 + n):
        raise ValueError("T-terms must satisfy |T_l| <= 1 + <n_l>")
    cov = np.array(vacuum.cov)
    cov[:, 0, 0] *= 1.0 + n + t
    cov[:, 1, 1] *= 1.0 + n - t
    cov[:, 0, 1] = cov[:, 1, 0] = 0.0
    return GaussianState(vacuum.statistics, vacuum.grid, cov, vacuum.mean, t)


def occupations(state, vacuum):
    """Read mean occupations back from covariance blocks.

    Bosons use ``(w c_phi + c_pi / w) / 2 - 1`` where the T-terms cancel;
    fermions use ``1 - w c``.
    """
    _check_pair(state, vacuum, allow_fermi=True)
    if state.is_bose:
        return 0.5 * (state.cphi / vacuum.cphi + state.cpi / vacuum.cpi) - 1.0
    return 1.0 - state.cferm / vacuum.cferm


def t_term_from_density(rho):
    """T-term of one mode from its (truncated) Fock-basis density matrix.

    ``T = 1/2 sum_n [rho_{n,n+2} sqrt((n+2)(n+1)) + rho_{n,n-2} sqrt(n(n-1))]``.
    Only the second off-diagonals of ``rho`` enter, so a diagonal Fock state
    gives zero.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("rho must be a square matrix")
    size = rho.shape[0]
    if size < 3:
        return 0.0
    n = np.arange(size - 2)
    upper = np.diagonal(rho, offset=2)          # rho_{n, n+2}
    lower = np.diagonal(rho, offset=-2)         # rho_{n+2, n}
    total = np.sum(upper * np.sqrt((n + 2.0) * (n + 1.0)))
    total += np.sum(lower * np.sqrt((n + 2.0) * (n + 1.0)))
    return float(np.real(0.5 * total))


def _check_pair(state, reference, allow_fermi=False):
    if state.grid != reference.grid:
        raise ValueError("states live on different grids")
    if state.statistics is not reference.statistics:
        raise ValueError("statistics mismatch between state and reference")
    if not allow_fermi and not state.is_bose:
        raise ValueError("fermionic Husimi functionals have no sampleable density")


def _det(blocks):
    return blocks[:, 0, 0] * blocks[:, 1, 1] - blocks[:, 0, 1] * blocks[:, 1, 0]


def _check_pd(state, name):
    c = state.cov
    d = _det(c)
    if not np.all(np.isfinite(c)) or np.any(c[:, 0, 0] <= 0.0) or np.any(d <= 0.0):
        raise ValueError(f"{name} covariance blocks are not positive definite")
    return d


def _inv(blocks, det):
    inv = np.empty_like(blocks)
    inv[:, 0, 0] = blocks[:, 1, 1] / det
    inv[:, 1, 1] = blocks[:, 0, 0] / det
    inv[:, 0, 1] = inv[:, 1, 0] = -blocks[:, 0, 1] / det
    return inv


def gaussian_kl(state, reference):
    """Relative entropy between two bosonic Gaussian Husimi densities.

    Per mode ``1/2 [tr(R^-1 C) - 2 + ln(det R / det C)] + 1/2 d^T R^-1 d`` with
    ``d`` the mean difference, summed over modes.
    """
    _check_pair(state, reference)
    det_c = _check_pd(state, "state")
    det_r = _check_pd(reference, "reference")
    rinv = _inv(reference.cov, det_r)
    trace = np.einsum("lij,lji->l", rinv, state.cov)
    d = state.mean - reference.mean
    maha = np.einsum("li,lij,lj->l", d, rinv, d)
    per_mode = 0.5 * (trace - 2.0 + np.log(det_r / det_c)) + 0.5 * maha
    return max(math.fsum(per_mode), 0.0)


def entropy_difference(state, reference):
    """``1/2 sum_l ln(det C_l / det R_l)``; means do not enter."""
    _check_pair(state, reference)
    det_c = _check_pd(state, "state")
    det_r = _check_pd(reference, "reference")
    return 0.5 * math.fsum(np.log(det_c / det_r))


def wigner_part(state, vacuum):
    """Wigner covariance ``C - C_vac / 2`` of a bosonic Husimi state."""
    _check_pair(state, vacuum)
    return np.asarray(state.cov) - 0.5 * np.asarray(vacuum.cov)


def is_physical_wigner(blocks, atol=1e-12):
    """Uncertainty check ``gamma > 0`` and ``det gamma >= 1/4`` per mode."""
    blocks = np.asarray(blocks, dtype=float)
    d = _det(blocks)
    return bool(np.all(blocks[:, 0, 0] > 0.0) and np.all(d >= 0.25 - atol))


def husimi_from_wigner(wigner_cov, vacuum, mean=None):
    """Husimi state ``C = gamma + gamma_vac`` from Wigner blocks ``gamma``.

    ``gamma_vac`` is half the Husimi vacuum block.  ``mean`` optionally
    displaces the state (shape ``(N, 2)``).

    Raises
    ------
    ValueError
        A Wigner block is not symmetric positive definite with ``det >= 1/4``.
    """
    if not vacuum.is_bose:
        raise ValueError("Wigner covariances are defined for bosons only")
    g = np.asarray(wigner_cov, dtype=float)
    n = vacuum.grid.n_modes
    if g.shape != (n, 2, 2):
        raise ValueError(f"Wigner covariance must have shape ({n}, 2, 2), got {g.shape}")
    if np.any(np.abs(g[:, 0, 1] - g[:, 1, 0]) > 1e-12 * (1.0 + np.abs(g[:, 0, 1]))):
        raise ValueError("Wigner covariance blocks must be symmetric")
    if not is_physical_wigner(g):
        raise ValueError("unphysical Wigner covariance: need gamma > 0 and det gamma >= 1/4")
    return GaussianState(Statistics.BOSE, vacuum.grid, g + 0.5 * np.asarray(vacuum.cov), mean)


# JSON surface shared with the CLI --------------------------------------------

def _grid_dict(grid):
    return {"N": grid.n_modes, "epsilon": grid.spacing}


def _grid_from(d):
    return MomentumGrid(int(d["N"]), float(d["epsilon"]))


def _floats(a):
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("cannot serialize non-finite covariance entries")
    return [float(x) for x in a]


def state_to_dict(state):
    d = {"statistics": state.statistics.value, "grid": _grid_dict(state.grid)}
    if state.is_bose:
        d.update(
            cphi=_floats(state.cphi),
            cpi=_floats(state.cpi),
            cphipi=_floats(state.cphipi),
            mean_phi=_floats(state.mean[:, 0]),
            mean_pi=_floats(state.mean[:, 1]),
            t=_floats(state.t_terms),
        )
    else:
        d["cferm"] = _floats(state.cferm)
    return d


def state_from_dict(d):
    grid = _grid_from(d["grid"])
    stats = Statistics(d["statistics"])
    n = grid.n_modes
    if stats is Statistics.FERMI:
        return GaussianState(stats, grid, np.asarray(d["cferm"], dtype=float))
    cphipi = np.asarray(d.get("cphipi", np.zeros(n)), dtype=float)
    cov = np.zeros((n, 2, 2))
    cov[:, 0, 0] = d["cphi"]
    cov[:, 1, 1] = d["cpi"]
    cov[:, 0, 1] = cov[:, 1, 0] = cphipi
    mean = np.stack([np.asarray(d.get("mean_phi", np.zeros(n)), dtype=float),
                     np.asarray(d.get("mean_pi", np.zeros(n)), dtype=float)], axis=1)
    t = np.asarray(d.get("t", np.zeros(n)), dtype=float)
    return GaussianState(stats, grid, cov, mean, t)


def occupation_to_dict(occ):
    return {"statistics": occ.statistics.value, "grid": _grid_dict(occ.grid),
            "n": _floats(occ.values)}


def occupation_from_dict(d):
    return OccupationSpectrum(_grid_from(d["grid"]), np.asarray(d["n"], dtype=float),
                              Statistics(d.get("statistics", "bose")))


def load_json(path):
    """Load a state or occupation spectrum; the presence of ``n`` decides which."""
    with open(path) as fh:
        d = json.load(fh)
    return occupation_from_dict(d) if "n" in d else state_from_dict(d)


def dump_json(obj, path):
    d = occupation_to_dict(obj) if isinstance(obj, OccupationSpectrum) else state_to_dict(obj)
    with open(path, "w") as fh:
        json.dump(d, fh, indent=2)
