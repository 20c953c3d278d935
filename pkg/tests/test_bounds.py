import math

import numpy as np
import pytest

from reur import bounds, ensembles, gaussian, lattice
from reur.bounds import BoundReport, Method
from reur.gaussian import GaussianState, OccupationSpectrum, vacuum_from_omega
from reur.lattice import (MajoranaContinuum, NonRelativisticContinuum, RelativisticContinuum,
                          ScalarLattice)


def test_report_invariants():
    with pytest.raises(ValueError):
        BoundReport(1.0, Method.CLOSED_FORM, divergent=True)
    with pytest.raises(ValueError):
        BoundReport(math.inf, Method.CLOSED_FORM)
    with pytest.raises(ValueError):
        BoundReport(-1.0, Method.CLOSED_FORM)
    assert BoundReport.diverging("Quadrature").value == math.inf
    assert BoundReport(math.nan, "TraceFormula").undefined


def test_bound_free_examples():
    g = lattice.make_grid(4, 1.0)
    vac = gaussian.vacuum_state(g, ScalarLattice(0.5, 1.0))
    assert bounds.bound_free(vac, vac).value == 0.0
    occ = OccupationSpectrum(g, [0.5, 1.0, 2.0, 0.0])
    st = gaussian.excited_state(vac, occ, [0.3, -1.5, 2.9, 0.0])
    assert bounds.bound_free(st, vac).value == pytest.approx(3.5, abs=1e-14)
    assert bounds.bound_free(st, vac).method is Method.TRACE_FORMULA
    mu = np.array([[1.0, 0.5], [0.0, 0.0], [2.0, -1.0], [0.0, 0.2]])
    disp = GaussianState("bose", g, vac.cov, mu)
    assert bounds.bound_free(disp, vac).value == pytest.approx(gaussian.gaussian_kl(disp, vac),
                                                               rel=1e-14)


def test_bound_free_gapless_vacuum():
    g = lattice.make_grid(4, 1.0)
    vac = gaussian.vacuum_state(g, ScalarLattice(0.0, 1.0), allow_gapless=True)
    rep = bounds.bound_free(vac, vac)
    assert rep.divergent and rep.value == math.inf


def test_fermi_bound_matches_explicit_trace(rng):
    # explicit 2x2 trace of Cbar^-1 (C^T - Cbar^T) with blocks i [[0, c], [-c, 0]];
    # the transpose of the anti-symmetric blocks supplies the sign
    for _ in range(20):
        st, vac, occ = ensembles.random_excited(rng, "fermi")
        total = 0.0
        for c, cb in zip(st.cferm, vac.cferm):
            blk = 1j * np.array([[0, c], [-c, 0]])
            ref = 1j * np.array([[0, cb], [-cb, 0]])
            total += 0.5 * np.trace(np.linalg.inv(ref) @ (blk.T - ref.T)).real
        assert total == pytest.approx(bounds.bound_free(st, vac).value, abs=1e-12)
        assert bounds.bound_free(st, vac).value == pytest.approx(occ.total, abs=1e-12)


def test_particle_number():
    g = lattice.make_grid(4, 1.0)
    assert bounds.bound_particle_number(OccupationSpectrum(g, np.zeros(4))).value == 0.0
    f = OccupationSpectrum(g, [1.0, 1.0, 1.0, 0.0], "fermi")
    assert bounds.bound_particle_number(f).value == 3.0
    b = OccupationSpectrum(lattice.make_grid(2, 1.0), [2.5, 0.5])
    assert bounds.bound_particle_number(b).value == 3.0
    assert bounds.bound_particle_number(b).method is Method.PARTICLE_SUM


def test_tmsv_and_squeezing():
    assert bounds.tmsv_occupation(0.0) == 0.0
    assert bounds.tmsv_occupation(1 / math.sqrt(2)) == pytest.approx(1.0, rel=1e-15)
    assert bounds.tmsv_occupation(1.0) == math.inf
    with pytest.raises(ValueError):
        bounds.tmsv_occupation(-0.1)
    assert bounds.squeezing_bound(1, 0.0).value == 0.0
    assert bounds.squeezing_bound(1, 1 / math.sqrt(2)).value == pytest.approx(2.0, rel=1e-15)
    assert bounds.squeezing_bound(100, 0.5).value == pytest.approx(200 / 3, abs=1e-10)
    rep = bounds.squeezing_bound(3, 1.0)
    assert rep.divergent and rep.value == math.inf
    for bad in (0, -1, 1.5, True):
        with pytest.raises(ValueError):
            bounds.squeezing_bound(bad, 0.3)


def test_squeezing_proportional_and_monotone():
    lams = np.linspace(0, 0.999, 200)
    for n in (1, 2, 5, 25, 100):
        vals = np.array([bounds.squeezing_bound(n, x).value for x in lams])
        assert np.all(np.diff(vals) > 0)
        assert np.array_equal(vals, n * np.array([bounds.squeezing_bound(1, x).value
                                                  for x in lams]))


# 30-digit references (mpmath)
NONREL = {(1.0, 1.0): 1.2684294062884162684, (2.0, 0.5): 0.046514125644400659493}
REL_M1_T1 = 1.6009869509788145249


@pytest.mark.parametrize("m, t", sorted(NONREL))
def test_thermal_nonrel(m, t):
    q = bounds.thermal_bound(NonRelativisticContinuum(m), t)
    assert q.method is Method.QUADRATURE
    assert q.value == pytest.approx(NONREL[(m, t)], rel=1e-12)
    assert bounds.nonrel_thermal_closed_form(m, t) == pytest.approx(NONREL[(m, t)], rel=1e-13)


def test_thermal_relativistic():
    rel = bounds.thermal_bound(RelativisticContinuum(1.0), 1.0)
    assert rel.value == pytest.approx(REL_M1_T1, rel=1e-12)
    assert rel.value > bounds.thermal_bound(NonRelativisticContinuum(1.0), 1.0).value


def test_thermal_low_temperature_and_gapless():
    assert bounds.thermal_bound(RelativisticContinuum(1.0), 1e-3).value < 1e-12
    rep = bounds.thermal_bound(RelativisticContinuum(0.0), 1.0)
    assert rep.divergent
    fermi = bounds.thermal_bound(MajoranaContinuum(0.0, 1.0), 1.0, "fermi")
    assert fermi.value == pytest.approx(2 * math.log(2), rel=1e-12)
    with pytest.raises(ValueError):
        bounds.thermal_bound(RelativisticContinuum(1.0), 0.0)
    with pytest.raises(TypeError):
        bounds.thermal_bound(ScalarLattice(1.0, 1.0), 1.0)


def test_fermi_thermal_below_bose():
    b = bounds.thermal_bound(RelativisticContinuum(0.5), 2.0, "bose").value
    f = bounds.thermal_bound(RelativisticContinuum(0.5), 2.0, "fermi").value
    assert 0 < f < b


DISTINCT = {0.1: 1.700606646569325499, 0.5: 0.27353250423763499469,
            2.0: 0.54706500847526998938, 10.0: 17.006066465693255533}


@pytest.mark.parametrize("r", sorted(DISTINCT))
def test_distinct_mass_reference(r):
    rep = bounds.distinct_mass_bound(1.0, r)
    assert rep.method is Method.CLOSED_FORM and rep.error_estimate == 0.0
    assert rep.value == pytest.approx(DISTINCT[r], rel=1e-13)


def test_distinct_mass_scaling():
    # b scales linearly with an overall mass scale
    assert bounds.distinct_mass_bound(3.0, 6.0).value == pytest.approx(
        3.0 * DISTINCT[2.0], rel=1e-13)


def test_distinct_mass_equal_masses():
    assert bounds.distinct_mass_bound(1.7, 1.7).value <= 1e-10
    parts = [(0.0, 1.0), (2.0, 2.0), (-5.0, 0.5)]
    assert bounds.distinct_mass_bound(1.7, 1.7, parts).value == 3.5


def test_distinct_mass_divergent_and_errors():
    assert bounds.distinct_mass_bound(1.0, 0.0).divergent
    assert bounds.distinct_mass_bound(0.0, 1.0).divergent
    with pytest.raises(ValueError):
        bounds.distinct_mass_bound(-1.0, 1.0)
    with pytest.raises(ValueError):
        bounds.distinct_mass_bound(1.0, 2.0, [(0.0, -1.0)])


def test_asymptotes():
    assert bounds.distinct_mass_asymptote("NearOne", 2.0, 2.0) == 0.0
    assert bounds.distinct_mass_asymptote("ZeroRatio", 1.0, 1e-3) == pytest.approx(
        math.log(4000) - 2, rel=1e-14)
    assert bounds.distinct_mass_asymptote("InfiniteRatio", 1.0, 1e3) == pytest.approx(
        1e3 * (math.log(4000) - 2), rel=1e-14)
    near = bounds.distinct_mass_bound(1.0, 1.01).value
    assert near / bounds.distinct_mass_asymptote("NearOne", 1.0, 1.01) == pytest.approx(1, abs=0.02)


def test_second_moment_relation():
    g = lattice.make_grid(2, 1.0)
    w = 1.7
    vac = vacuum_from_omega(g, [w, w])
    assert bounds.second_moment_relation(vac, vac) == (1.0, True)
    bad = GaussianState("bose", g, np.array([np.diag([0.5 / w, 0.5 * w]), np.diag([1 / w, w])]))
    ratio, ok = bounds.second_moment_relation(bad, vac)
    assert ratio == pytest.approx(0.25, rel=1e-15) and not ok
