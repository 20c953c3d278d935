"""Relative-entropic uncertainty bounds for free bosonic fields and the Ising chain."""
from ._backend import BACKEND
from .bounds import (BoundReport, Method, Regime, bound_free, bound_particle_number,
                     distinct_mass_asymptote, distinct_mass_bound, nonrel_thermal_closed_form,
                     second_moment_relation, squeezing_bound, thermal_bound, tmsv_occupation)
from .gaussian import (GaplessModeError, GaussianState, OccupationSpectrum, Statistics,
                       entropy_difference, excited_state, gaussian_kl, husimi_from_wigner,
                       t_term_from_density, vacuum_state)
from .ising import IsingCouplings, ising_vacuum_bound, scan_bound
from .lattice import MomentumGrid, make_grid, omega
from .specfn import QuadResult, QuadratureError, ellip_e, ellip_k, polylog_half, quad_real_line

__version__ = "0.1.0"
