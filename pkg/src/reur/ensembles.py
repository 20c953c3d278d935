"""Random but physical test ensembles, driven by a ``numpy.random.Generator``."""
import math

import numpy as np

from .gaussian import (OccupationSpectrum, Statistics, excited_state, husimi_from_wigner,
                       vacuum_from_omega)
from .ising import IsingCouplings
from .lattice import MomentumGrid


def random_grid(rng, max_modes=16):
    return MomentumGrid(2 * int(rng.integers(1, max_modes // 2 + 1)), float(rng.uniform(0.2, 2.0)))


def random_vacuum(rng, grid, statistics=Statistics.BOSE, low=0.1, high=10.0):
    return vacuum_from_omega(grid, rng.uniform(low, high, grid.n_modes), statistics)


def random_occupations(rng, grid, statistics=Statistics.BOSE, n_max=5.0):
    stats = Statistics(statistics)
    top = 1.0 if stats is Statistics.FERMI else n_max
    return OccupationSpectrum(grid, rng.uniform(0.0, top, grid.n_modes), stats)


def random_t_terms(rng, occ):
    return rng.uniform(-1.0, 1.0, occ.values.shape) * (1.0 + occ.values)


def random_excited(rng, statistics=Statistics.BOSE, max_modes=16):
    """``(state, vacuum, occupations)`` with random valid T-terms for bosons."""
    grid = random_grid(rng, max_modes)
    vac = random_vacuum(rng, grid, statistics)
    occ = random_occupations(rng, grid, statistics)
    t = random_t_terms(rng, occ) if vac.is_bose else None
    return excited_state(vac, occ, t), vac, occ


def random_wigner(rng, vacuum, max_squeeze=1.5, max_thermal=3.0):
    """Physical Wigner blocks ``(nu/2) M M^T`` with ``M`` symplectic.

    ``M = diag(w^-1/2, w^1/2) R(phi) diag(e^-r, e^r)`` has unit determinant, so
    ``det gamma = nu^2 / 4 >= 1/4``.
    """
    w = np.sqrt(vacuum.cpi / vacuum.cphi)
    n = w.size
    phi = rng.uniform(0.0, math.pi, n)
    r = rng.uniform(-max_squeeze, max_squeeze, n)
    nu = rng.uniform(1.0, max_thermal, n)
    cos, sin = np.cos(phi), np.sin(phi)
    m = np.empty((n, 2, 2))
    m[:, 0, 0] = cos * np.exp(-r) / np.sqrt(w)
    m[:, 0, 1] = -sin * np.exp(r) / np.sqrt(w)
    m[:, 1, 0] = sin * np.exp(-r) * np.sqrt(w)
    m[:, 1, 1] = cos * np.exp(r) * np.sqrt(w)
    g = 0.5 * nu[:, None, None] * np.einsum("lij,lkj->lik", m, m)
    g[:, 1, 0] = g[:, 0, 1]
    return g


def random_husimi(rng, max_modes=4, displaced=True, squeezed=True):
    """``(state, vacuum)`` with a random physical Wigner part and displacement."""
    grid = random_grid(rng, max_modes)
    vac = random_vacuum(rng, grid, low=0.2, high=5.0)
    if squeezed:
        g = random_wigner(rng, vac)
    else:
        g = 0.5 * np.asarray(vac.cov)
    mean = rng.normal(0.0, 1.5, (grid.n_modes, 2)) if displaced else None
    return husimi_from_wigner(g, vac, mean), vac


def random_coherent(rng, max_modes=4):
    """Displaced vacuum: Wigner part equal to the Wigner vacuum."""
    return random_husimi(rng, max_modes, displaced=True, squeezed=False)


def random_gaussian_pair(rng, max_modes=2):
    """Two random Husimi states on a common grid and vacuum."""
    state, vac = random_husimi(rng, max_modes)
    g = random_wigner(rng, vac, max_squeeze=0.8, max_thermal=2.0)
    ref = husimi_from_wigner(g, vac, rng.normal(0.0, 1.0, (vac.grid.n_modes, 2)))
    return state, ref


def random_couplings(rng, n_modes=10):
    j, h = rng.uniform(-3.0, 3.0, 2)
    return IsingCouplings(float(j), float(h), 1.0, n_modes)

