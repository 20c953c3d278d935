"""Momentum grids and dispersion relations."""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class MomentumGrid:
    """Periodic lattice of ``n_modes`` sites with spacing ``spacing``.

    Modes are labelled ``l = -N/2 + 1, ..., N/2`` with momenta ``p_l = dk * l``
    and ``dk = 2 pi / (N eps)``.
    """

    n_modes: int
    spacing: float

    def __post_init__(self):
        n = self.n_modes
        if isinstance(n, bool) or int(n) != n:
            raise ValueError(f"n_modes must be an integer, got {n!r}")
        if n < 2 or n % 2:
            raise ValueError(f"n_modes must be even and >= 2, got {n}")
        if not self.spacing > 0.0 or not math.isfinite(self.spacing):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "n_modes", int(n))
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def dk(self) -> float:
        return 2.0 * math.pi / (self.n_modes * self.spacing)

    @property
    def modes(self) -> np.ndarray:
        half = self.n_modes // 2
        return np.arange(-half + 1, half + 1)

    @property
    def momenta(self) -> np.ndarray:
        return self.dk * self.modes

    def wrap(self, l):
        """Map any integer label onto the mode set (periodic boundary)."""
        half = self.n_modes // 2
        return (np.asarray(l) + half - 1) % self.n_modes - half + 1

    def half_phase(self, l=None):
        """``(cos, sin)`` of ``eps dk l / 2 = pi l / N`` with exact zeros.

        The zeros at ``l = 0`` (sin) and ``l = N/2`` (cos) are set exactly so that
        gapless modes come out as exact zeros rather than 1e-17 residues.
        """
        l = self.modes if l is None else self.wrap(l)
        l = np.asarray(l)
        angle = math.pi * l / self.n_modes
        c = np.cos(angle)
        s = np.sin(angle)
        c = np.where(np.abs(l) * 2 == self.n_modes, 0.0, c)
        s = np.where(l == 0, 0.0, s)
        return c, s


def make_grid(n_modes: int, spacing: float) -> MomentumGrid:
    return MomentumGrid(n_modes, spacing)


@dataclass(frozen=True)
class ScalarLattice:
    m: float
    epsilon: float

    def __post_init__(self):
        if self.m < 0.0:
            raise ValueError("mass must be non-negative")
        if not self.epsilon > 0.0:
            raise ValueError("lattice spacing must be positive")

    lattice = True


@dataclass(frozen=True)
class RelativisticContinuum:
    m: float

    def __post_init__(self):
        if self.m < 0.0:
            raise ValueError("mass must be non-negative")

    lattice = False


@dataclass(frozen=True)
class NonRelativisticContinuum:
    m: float

    def __post_init__(self):
        if not self.m > 0.0:
            raise ValueError("non-relativistic dispersion needs m > 0")

    lattice = False


@dataclass(frozen=True)
class IsingLattice:
    J: float
    h: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError("lattice spacing must be positive")

    lattice = True


@dataclass(frozen=True)
class MajoranaContinuum:
    gamma: float
    v: float

    lattice = False


Dispersion = Union[ScalarLattice, RelativisticContinuum, NonRelativisticContinuum,
                       IsingLattice, MajoranaContinuum]


def _lattice_omega(disp, grid, mode):
    if not math.isclose(disp.epsilon, grid.spacing, rel_tol=1e-12):
        raise ValueError(
            f"dispersion spacing {disp.epsilon} does not match grid spacing {grid.spacing}")
    c, s = grid.half_phase(mode)
    if isinstance(disp, ScalarLattice):
        return np.sqrt((2.0 / disp.epsilon) ** 2 * s * s + disp.m**2)
    # 4[J^2 + h^2 - 2Jh cos(theta)] = 4[(J-h)^2 cos^2(theta/2) + (J+h)^2 sin^2(theta/2)]
    return 2.0 * np.sqrt((disp.J - disp.h) ** 2 * c * c + (disp.J + disp.h) ** 2 * s * s)


def _continuum_omega(disp, p):
    p = np.asarray(p, dtype=float)
    if isinstance(disp, RelativisticContinuum):
        return np.hypot(disp.m, p)
    if isinstance(disp, NonRelativisticContinuum):
        return disp.m + p * p / (2.0 * disp.m)
    if isinstance(disp, MajoranaContinuum):
        return np.hypot(disp.gamma, disp.v * p)
    raise TypeError(f"unknown dispersion kind {type(disp).__name__}")


def omega(disp, *, grid=None, mode=None, p=None):
    """Mode frequency for any dispersion kind.

    Lattice kinds take ``grid`` and an optional ``mode`` label (or array of
    labels; default all modes).  Continuum kinds take a momentum ``p``.
    Always returns the non-negative root; zeros are legal and left for the
    caller to flag.
    """
    if disp.lattice:
        if grid is None:
            raise ValueError(f"{type(disp).__name__} needs a grid")
        out = _lattice_omega(disp, grid, mode)
    else:
        if p is None:
            raise ValueError(f"{type(disp).__name__} needs a momentum p")
        out = _continuum_omega(disp, p)
    return float(out) if np.ndim(out) == 0 else out
