import math

import numpy as np
import pytest

import darboux.specfun as sf
from darboux.errors import ParamError, ResolutionError
from darboux.geometry import DIII, DIV, SpaceParams
from darboux.oracle import Grid1D, fd_eigensolve_1d, separated_ode_residual, verify_building_block
from darboux.potentials import PotentialSpec
from darboux.spectra import QuantumNumbers, solve_quantization

SP1 = SpaceParams(DIII, 1.0, 1.0)
SP4 = SpaceParams(DIV, 3.0, 1.0)


def test_particle_in_a_box_self_consistency():
    L = 2.0
    grid = Grid1D(0.0, L, 1200)
    pairs = fd_eigensolve_1d(lambda x: np.zeros_like(x), grid, 5)
    for k, (e, xs, vec) in enumerate(pairs, start=1):
        assert e == pytest.approx(0.5 * (k * math.pi / L) ** 2, abs=1e-8)


def test_morse_pt_rho_reference_levels():
    morse = sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5})
    rep = verify_building_block(morse, 1)
    assert rep.details[0]["E_num"] == pytest.approx(-2.0, abs=1e-6)
    assert rep.details[1]["E_num"] == pytest.approx(-0.5, abs=1e-6)
    pt = sf.ModelFamily(sf.PT, {"alpha": 0.5, "beta": 0.5})
    rep = verify_building_block(pt, 0)
    assert rep.details[0]["E_num"] == pytest.approx(2.0, abs=1e-6)
    rho = sf.ModelFamily(sf.RHO, {"omega": 1.0, "lam": 0.5})
    rep = verify_building_block(rho, 0)
    assert rep.details[0]["E_num"] == pytest.approx(1.5, abs=1e-6)


def test_building_block_certification():
    fams = [
        (sf.ModelFamily(sf.HO, {"omega": 1.0}), 3, 3200),
        (sf.ModelFamily(sf.RHO, {"omega": 1.0, "lam": 1.5}), 3, 3200),
        (sf.ModelFamily(sf.PT, {"alpha": 1.0, "beta": 2.0}), 3, 3200),
        (sf.ModelFamily(sf.MPT_BOUND, {"eta": 0.5, "nu": 8.5}), 3, 4400),
        (sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5}), 1, 3200),
    ]
    for fam, nmax, npts in fams:
        rep = verify_building_block(fam, nmax, n_points=npts)
        assert rep.max_dev_eigenvalue < 1e-6
        assert rep.max_dev_eigenvector < 1e-5


def test_mpt_spec_example():
    # k1 - k2 = 2.5 in the index convention of the bound ladder
    fam = sf.ModelFamily(sf.MPT_BOUND, {"eta": 0.5, "nu": 5.5})
    rep = verify_building_block(fam, 1, n_points=4000)
    assert rep.max_dev_eigenvalue < 1e-6 and rep.max_dev_eigenvector < 1e-5


def test_resolution_error():
    morse = sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5})
    grid = Grid1D(-30.0, 2.3, 64)
    with pytest.raises(ResolutionError):
        fd_eigensolve_1d(sf.model_potential(morse), grid, 2)


def test_verify_rejects_nonconfining():
    with pytest.raises(ParamError):
        verify_building_block(sf.ModelFamily(sf.CMORSE, {"c1": 1.0, "c2": 1.0}), 1)
    with pytest.raises(ParamError):
        verify_building_block(sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5}), 4)


@pytest.mark.parametrize("family,coup,chart,qn,axes", [
    ("DIII_V5", {"v0": 0.0}, "uv", (0, 1, "uv"), (0,)),
    ("DIII_V5", {"v0": 0.0}, "polar", (1, 1, "polar"), (0,)),
    ("DIII_V5", {"v0": 0.0}, "parabolic", (1, 1, "parabolic"), (0, 1)),
    ("DIII_V5", {"v0": 0.0}, "hyperbolic", (1, 1, "hyperbolic"), (0, 1)),
    ("DIII_V2", {"alpha": 1.0, "k1": 0.5, "k2": 0.5}, "uv", (0, 0, "uv"), (0,)),
    ("DIII_V2", {"alpha": 1.0, "k1": 0.5, "k2": 0.5}, "polar", (0, 0, "polar"), (0,)),
    ("DIII_V2", {"alpha": 0.0, "k1": 0.3, "k2": 0.7}, "parabolic", (1, 1, "parabolic"), (0, 1)),
    ("DIII_V3", {"alpha": 0.0, "c1": 1.2, "c2": 0.8}, "polar", (0, 0, "polar"), (0, 1)),
    ("DIII_V4", {"d1": -1.5, "d2": -0.5, "omega": 1.0}, "hyperbolic", (0, 0, "hyperbolic"), (0, 1)),
    ("DIII_V1", {"k1": 0.4, "k2": 0.3, "k3": 0.2}, "parabolic", (1, 0, "parabolic"), (0, 1)),
    ("DIV_V1", {"alpha": 12.0, "k1": 0.6, "k2": 0.4, "omega": 1.0}, "uv", (0, 0, "uv"), (0, 1)),
    ("DIV_V1", {"alpha": 12.0, "k1": 0.6, "k2": 0.4, "omega": 1.0}, "horospherical",
     (0, 0, "horospherical"), (0, 1)),
    ("DIV_V2", {"k1": 2.0, "k2": 6.0, "k3": 0.5}, "uv", (0, 0, "uv"), (0, 1)),
    ("DIV_V3", {"c1": 0.3, "c2": -200.0, "c3": 0.2}, "degelliptic2",
     (0, 0, "degelliptic2"), (0, 1)),
])
def test_separated_ode_residual_at_roots(family, coup, chart, qn, axes):
    sp = SP1 if family.startswith("DIII") else SP4
    spec = PotentialSpec(sp, family, coup)
    q = QuantumNumbers(*qn)
    roots = solve_quantization(spec, q)
    good = [r for r in roots.admissible
            if r["admissible"] and r["satisfies_unsquared"] and r["E"] != 0.0]
    assert good, "no admissible root to test"
    E = good[0]["E"]
    for ax in axes:
        assert separated_ode_residual(spec, chart, q, E, axis=ax) < 1e-6


def test_energy_closure_sharp_minimum():
    spec = PotentialSpec(SP1, "DIII_V5", {"v0": 0.0})
    qn = QuantumNumbers(0, 1, "uv")
    assert separated_ode_residual(spec, "uv", qn, -4.5) < 1e-6
    for fac in (0.95, 1.05):
        assert separated_ode_residual(spec, "uv", qn, -4.5 * fac) > 1e-2
    spec4 = PotentialSpec(SP1, "DIII_V4", {"d1": -1.5, "d2": -0.5, "omega": 1.0})
    qn4 = QuantumNumbers(0, 0, "hyperbolic")
    assert separated_ode_residual(spec4, "hyperbolic", qn4, -3.0) < 1e-6
    for fac in (0.95, 1.05):
        assert separated_ode_residual(spec4, "hyperbolic", qn4, -3.0 * fac) > 1e-2
