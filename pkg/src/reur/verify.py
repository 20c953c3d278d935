"""Invariant suite behind ``reur verify``.

Each check returns a :class:`Check` with the measured worst deviation and the
tolerance it was held to.  Failures are data; nothing here raises for a failed
invariant.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds, ensembles, gaussian, ising, lattice, oracle, specfn
from .gaussian import OccupationSpectrum, Statistics

DEFAULT_SEED = 20240607


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""

    def as_dict(self):
        d = asdict(self)
        for key in ("deviation", "tolerance"):
            if not math.isfinite(d[key]):
                d[key] = None
        return d


def _check(name, deviation, tolerance, detail="", passed=None):
    deviation = float(deviation)
    if passed is None:
        passed = deviation <= tolerance
    return Check(name, bool(passed), deviation, float(tolerance), detail)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# special functions -----------------------------------------------------------

def _k_quad(m):
    return specfn.quad_interval(lambda t: (1.0 - m * np.sin(t) ** 2) ** -0.5,
                                0.0, 0.5 * math.pi, 1e-300, rtol=1e-14).value


def _e_quad(m):
    return specfn.quad_interval(lambda t: (1.0 - m * np.sin(t) ** 2) ** 0.5,
                                0.0, 0.5 * math.pi, 1e-300, rtol=1e-14).value


ELLIPTIC_PARAMS = (-100.0, -10.0, -1.0, 0.0, 0.5, 0.99)


def check_specfn():
    dev = max(max(_rel(specfn.ellip_k(m), _k_quad(m)), _rel(specfn.ellip_e(m), _e_quad(m)))
              for m in ELLIPTIC_PARAMS)
    yield _check("specfn.elliptic_vs_quadrature", dev, 1e-10)
    ms = np.linspace(0.0, 1.0, 22)[1:-1]
    k, e = specfn.ellip_ke(ms)
    kc, ec = specfn.ellip_ke(1.0 - ms)
    yield _check("specfn.legendre_relation",
                 np.max(np.abs(e * kc + ec * k - k * kc - 0.5 * math.pi)), 1e-10)
    x = np.linspace(0.0, 0.999, 2000)
    li = specfn.polylog_half(x)
    ok = bool(np.all(np.diff(li) > 0.0) and np.all(li >= x))
    yield _check("specfn.polylog_monotone_above_identity", 0.0 if ok else 1.0, 0.0, passed=ok)
    f = lambda p: 1.0 / (1.0 + p * p) ** 2  # noqa: E731
    full = specfn.quad_real_line(f, 1e-12).value
    folded = specfn.quad_real_line(f, 1e-12, even=True).value
    yield _check("specfn.quad_fold_even", abs(full - folded), 1e-10)


# lattice ----------------------------------------------------------------------

def check_lattice(rng):
    grid = lattice.make_grid(12, 0.7)
    worst = 0.0
    for disp in (lattice.ScalarLattice(0.3, 0.7), lattice.IsingLattice(0.8, -1.1, 0.7)):
        for l in range(1, 6):
            worst = max(worst, abs(lattice.omega(disp, grid=grid, mode=l)
                                   - lattice.omega(disp, grid=grid, mode=-l)))
    yield _check("lattice.dispersion_even", worst, 1e-14)

    # epsilon-halving at fixed momentum: error should drop by ~4
    m, p = 1.0, 1.3
    errs = []
    for k in range(4):
        eps = 0.2 / 2**k
        exact = math.hypot(m, p)
        approx = math.sqrt((2.0 / eps) ** 2 * math.sin(0.5 * eps * p) ** 2 + m * m)
        errs.append(abs(approx - exact) / exact)
    ratios = [errs[i] / errs[i + 1] for i in range(3)]
    yield _check("lattice.continuum_limit_order2", max(abs(r - 4.0) for r in ratios), 0.05)

    ps = np.linspace(-20.0, 20.0, 401)
    worst = 0.0
    for m in (0.1, 0.5, 1.0, 3.0):
        rel = lattice.omega(lattice.RelativisticContinuum(m), p=ps)
        nonrel = lattice.omega(lattice.NonRelativisticContinuum(m), p=ps)
        worst = max(worst, float(np.max(rel - nonrel)))
    yield _check("lattice.nonrel_dominates_rel", max(worst, 0.0), 0.0)

    swap = shift = 0.0
    for _ in range(50):
        j, h = rng.uniform(-3.0, 3.0, 2)
        n = 2 * int(rng.integers(1, 9))
        g = lattice.make_grid(n, 1.0)
        a = lattice.omega(lattice.IsingLattice(j, h), grid=g)
        b = lattice.omega(lattice.IsingLattice(h, j), grid=g)
        swap = max(swap, float(np.max(np.abs(a - b))))
        flipped = lattice.omega(lattice.IsingLattice(-j, h), grid=g)
        shifted = lattice.omega(lattice.IsingLattice(j, h), grid=g, mode=g.modes + n // 2)
        shift = max(shift, float(np.max(np.abs(flipped - shifted))))
    yield _check("lattice.ising_swap", swap, 1e-12)
    yield _check("lattice.ising_sign_shift", shift, 1e-12)


# gaussian ---------------------------------------------------------------------

def check_gaussian(rng):
    grid = lattice.make_grid(2, 1.0)
    worst = 0.0
    for r in (0.1, 0.5, 1.0, 2.0):
        w = 1.7
        vac = gaussian.vacuum_from_omega(grid, [w, w])
        g = np.array([np.diag([math.exp(-2 * r) / (2 * w), math.exp(2 * r) * w / 2])] * 2)
        st = gaussian.husimi_from_wigner(g, vac)
        n = gaussian.occupations(st, vac)[0]
        lam = math.tanh(r)
        worst = max(worst, _rel(n, math.sinh(r) ** 2), _rel(n, bounds.tmsv_occupation(lam)))
    yield _check("gaussian.squeezed_occupation_sinh2", worst, 1e-12)

    worst = 0.0
    for _ in range(200):
        st, vac, occ = ensembles.random_excited(rng)
        worst = max(worst, float(np.max(np.abs(gaussian.occupations(st, vac) - occ.values))))
    yield _check("gaussian.occupation_readback", worst, 1e-12)

    worst = 0.0
    for _ in range(200):
        st, vac = ensembles.random_husimi(rng)
        worst = max(worst, -gaussian.entropy_difference(st, vac))
    yield _check("gaussian.wehrl_lieb", max(worst, 0.0), 1e-12)

    g = lattice.make_grid(4, 1.0)
    vac = gaussian.vacuum_from_omega(g, [0.5, 1.0, 2.0, 4.0], Statistics.FERMI)
    cs = [gaussian.excited_state(vac, OccupationSpectrum(g, [n] * 4, Statistics.FERMI)).cferm
          for n in np.linspace(0.0, 1.0, 11)]
    ok = bool(np.all(np.diff(np.array(cs), axis=0) < 0.0))
    yield _check("gaussian.fermi_monotone", 0.0 if ok else 1.0, 0.0, passed=ok)


# bounds -----------------------------------------------------------------------

def check_bounds(rng):
    for stats in (Statistics.BOSE, Statistics.FERMI):
        worst = 0.0
        for _ in range(500):
            st, vac, occ = ensembles.random_excited(rng, stats)
            worst = max(worst, abs(bounds.bound_free(st, vac).value
                                   - bounds.bound_particle_number(occ).value))
        yield _check(f"reur.bound_equivalence_{stats.value}", worst, 1e-12)

    gap = 0.0
    det_low = 0.0
    for _ in range(200):
        st, vac = ensembles.random_husimi(rng)
        gap = max(gap, gaussian.gaussian_kl(st, vac) - bounds.bound_free(st, vac).value)
        det_low = max(det_low, 1.0 - bounds.second_moment_relation(st, vac)[0])
    yield _check("reur.kl_below_bound", max(gap, 0.0), 1e-9)
    yield _check("reur.second_moment_relation", max(det_low, 0.0), 1e-12)

    sat = det_dev = 0.0
    for _ in range(50):
        st, vac = ensembles.random_coherent(rng)
        sat = max(sat, abs(gaussian.gaussian_kl(st, vac) - bounds.bound_free(st, vac).value))
        det_dev = max(det_dev, abs(bounds.second_moment_relation(st, vac)[0] - 1.0))
    yield _check("reur.coherent_saturation", sat, 1e-9)
    yield _check("reur.coherent_det_ratio", det_dev, 1e-12)

    lams = np.linspace(0.0, 0.99, 100)
    ok = True
    prop = 0.0
    for n in (1, 5, 25, 100):
        vals = [bounds.squeezing_bound(n, lam).value for lam in lams]
        ok &= bool(np.all(np.diff(vals) > 0.0))
        prop = max(prop, max(abs(bounds.squeezing_bound(n, lam).value
                                 - n * bounds.squeezing_bound(1, lam).value) for lam in lams))
    yield _check("reur.squeezing_monotone", 0.0 if ok else 1.0, 0.0, passed=ok)
    yield _check("reur.squeezing_proportional", prop, 0.0)

    dev = max(_rel(bounds.distinct_mass_bound(1.0, r).value,
                   oracle.quad_distinct_mass_vacuum(1.0, r).value) for r in (0.1, 0.5, 2.0, 10.0))
    yield _check("reur.distinct_mass_vs_quadrature", dev, 1e-6)
    rs = np.logspace(math.log10(0.2), math.log10(5.0), 101)
    b = np.array([bounds.distinct_mass_bound(1.0, r).value for r in rs])
    yield _check("reur.distinct_mass_convex", max(-float(np.min(np.diff(b, 2))), 0.0), 1e-8)
    dev = max(
        abs(bounds.distinct_mass_bound(1.0, 1e-3).value
            / bounds.distinct_mass_asymptote("ZeroRatio", 1.0, 1e-3) - 1.0),
        abs(bounds.distinct_mass_bound(1.0, 1e3).value
            / bounds.distinct_mass_asymptote("InfiniteRatio", 1.0, 1e3) - 1.0))
    yield _check("reur.distinct_mass_asymptotes", dev, 0.02)

    dev = 0.0
    order_ok = True
    for m in np.linspace(0.5, 2.0, 5):
        for t in np.linspace(0.2, 5.0, 5):
            q = bounds.thermal_bound(lattice.NonRelativisticContinuum(m), t).value
            c = bounds.nonrel_thermal_closed_form(m, t)
            s = oracle.series_nonrel_thermal(m, t)
            dev = max(dev, _rel(q, c), _rel(q, s), _rel(c, s))
            rel = bounds.thermal_bound(lattice.RelativisticContinuum(m), t).value
            order_ok &= rel > q
    yield _check("reur.thermal_three_routes", dev, 1e-8)
    yield _check("reur.thermal_rel_exceeds_nonrel", 0.0 if order_ok else 1.0, 0.0,
                 passed=order_ok)


# ising ------------------------------------------------------------------------

def check_ising(rng):
    swap_ok = mirror_ok = True
    for _ in range(100):
        n = 2 * int(rng.integers(1, 9))
        a = ensembles.random_couplings(rng, n)
        b = ensembles.random_couplings(rng, n)
        swap_ok &= ising.swap_check(a, b)
        mirror_ok &= ising.mirror_check(a, b)
    yield _check("ising.swap_invariance", 0.0 if swap_ok else 1.0, 0.0, passed=swap_ok)
    yield _check("ising.mirror_symmetry", 0.0 if mirror_ok else 1.0, 0.0, passed=mirror_ok)

    zero = 0.0
    for j1 in (0.5, 1.5, 2.0, 2.5):
        curve = ising.scan_bound(ising.IsingCouplings(j1, 1.0), 1.0)
        finite = curve.values[np.isfinite(curve.values)]
        zero = max(zero, float(finite.min()),
                   abs(curve.ratio_grid[np.argmin(np.where(np.isfinite(curve.values),
                                                           curve.values, np.inf))] - j1))
        div = curve.divergent[np.isin(curve.ratio_grid, (-1.0, 1.0))]
        if not np.all(div):
            zero = math.inf
    yield _check("ising.global_minimum_at_reference", zero, 0.0)

    curve = ising.scan_bound(ising.IsingCouplings(0.5, 1.0), 1.3)
    positive = float(np.nanmin(np.where(np.isfinite(curve.values), curve.values, np.nan)))
    yield _check("ising.shifted_field_minimum_positive", 0.0 if positive > 0.0 else 1.0, 0.0,
                 passed=positive > 0.0, detail=f"min {positive:.6g}")

    minima = ising.scan_bound(ising.IsingCouplings(0.5, 1.0), 1.0).minima
    found = any(1 < r < 2 for r, _ in minima) and any(-2 < r < -1 for r, _ in minima)
    yield _check("ising.minima_locations", 0.0 if found else 1.0, 0.0, passed=found,
                 detail=str([round(r, 4) for r, _ in minima]))

    off = diag = 0.0
    for _ in range(50):
        c = ensembles.random_couplings(rng, 2 * int(rng.integers(1, 9)))
        u, v, dp, dm, res = ising.bogoliubov_coefficients(c, None)
        kappa, lam = ising.kappa_lambda(c)
        w = np.hypot(kappa, 2.0 * lam)
        off = max(off, float(np.max(np.abs(res))), float(np.max(np.abs(u * u + v * v - 1.0))))
        diag = max(diag, float(np.max(np.abs(dp - 0.5 * (kappa + w)))),
                   float(np.max(np.abs(dm - 0.5 * (w - kappa)))),
                   float(np.max(np.abs(w - c.omegas()))))
    yield _check("ising.bogoliubov_offdiagonal", off, 1e-12)
    yield _check("ising.bogoliubov_diagonal", diag, 1e-12)


# oracle -----------------------------------------------------------------------

def check_oracle(seed):
    rng = np.random.default_rng(seed)
    passes = 0
    worst = 0.0
    for i in range(10):
        st, ref = ensembles.random_gaussian_pair(rng)
        est = oracle.mc_kl(st, ref, 100_000, seed + i)
        z = abs(est.mean - gaussian.gaussian_kl(st, ref)) / est.std_error
        worst = max(worst, z)
        passes += z <= 4.0
    yield _check("oracle.mc_kl_within_4se", worst, 4.0, detail=f"{passes}/10 within 4 se",
                 passed=passes >= 9)

    st, ref = ensembles.random_gaussian_pair(rng)
    a = oracle.mc_kl(st, ref, 20_000, seed)
    b = oracle.mc_kl(st, ref, 20_000, seed)
    same = a == b
    yield _check("oracle.mc_kl_reproducible", 0.0 if same else 1.0, 0.0, passed=same)
    big = oracle.mc_kl(st, ref, 80_000, seed)
    ratio = a.std_error / big.std_error
    yield _check("oracle.std_error_scaling", abs(math.log(ratio / 2.0)), math.log(2.0))


def validate_state_file(path):
    """Load a JSON state or occupation spectrum; failures become a check."""
    try:
        gaussian.load_json(path)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        return _check("input.state_file", math.inf, 0.0, detail=str(exc), passed=False)
    return _check("input.state_file", 0.0, 0.0)


def run_all(seed=DEFAULT_SEED, state_path=None):
    rng = np.random.default_rng(seed)
    checks = []
    if state_path is not None:
        checks.append(validate_state_file(state_path))
    checks.extend(check_specfn())
    checks.extend(check_lattice(rng))
    checks.extend(check_gaussian(rng))
    checks.extend(check_bounds(rng))
    checks.extend(check_ising(rng))
    checks.extend(check_oracle(seed))
    return checks
