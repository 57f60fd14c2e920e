"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; every tolerance is pinned here and nowhere else.
"""

import json
import math
import pathlib
import subprocess
import sys

import numpy as np
import pytest

import darboux.specfun as sf
from darboux.classical import (
    PhaseState,
    algebra_check,
    drift,
    hamiltonian_flow,
    observable_value,
)
from darboux.geometry import (
    DIII,
    DIV,
    Chart,
    SpaceParams,
    curvature_closed,
    curvature_numeric,
)
from darboux.oracle import separated_ode_residual, verify_building_block
from darboux.potentials import PotentialSpec, _quantum_unit
from darboux.spectra import (
    QuantumNumbers,
    asymptotic_spectrum,
    continuous_dispersion,
    quantization_residual,
    solve_quantization,
)
from darboux.wavefun import assemble_bound_state, default_grid, hamiltonian_residual, pick_energy

SP1 = SpaceParams(DIII, 1.0, 1.0)
SP4 = SpaceParams(DIV, 3.0, 1.0)


def report(num, label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {label}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


def test_criterion_1_curvature():
    rng = np.random.default_rng(101)
    worst = 0.0
    for famname in (DIII, DIV):
        for _ in range(5):
            if famname == DIII:
                sp = SpaceParams(famname, float(rng.uniform(0.5, 3)), float(rng.uniform(0.5, 3)))
                us = np.linspace(-1.2, 1.2, 10)
            else:
                b = float(rng.uniform(0.3, 1.5))
                sp = SpaceParams(famname, 2 * b + float(rng.uniform(0.05, 2)), b)
                us = np.linspace(0.15, math.pi / 2 - 0.15, 10)
            for u in us:
                for v in np.linspace(0, 1, 10):
                    gn = curvature_numeric(sp, Chart("uv", float(u), float(v)))
                    gc = curvature_closed(sp, (float(u), 0.0))
                    worst = max(worst, abs(gn - gc) / (1 + abs(gc)))
    flat = max(abs(curvature_numeric(SpaceParams(DIII, 1.0, 0.0), Chart("uv", float(u), 0.2)))
               for u in np.linspace(-1, 1, 20))
    hyp = max(abs(curvature_numeric(SpaceParams(DIV, 2.0, 1.0), Chart("uv", float(u), 0.1)) + 1)
              for u in np.linspace(0.2, 1.35, 20))
    ok = worst < 1e-6 and flat < 1e-8 and hyp < 1e-8
    report(1, "curvature numeric vs closed + limits", ok,
           f"rel={worst:.2e} flat={flat:.2e} hyperboloid={hyp:.2e}")


def test_criterion_2_free_motion_diii():
    spec = PotentialSpec(SP1, "DIII_V5", {"v0": 0.0})
    dev = 0.0
    for n in range(4):
        for l in range(4):
            roots = solve_quantization(spec, QuantumNumbers(n, l, "uv"))
            want = -0.5 * (2 * n + 2 * l + 1) ** 2
            dev = max(dev, min(abs(z.real - want) for z in roots.candidates))
    worst_sep = 0.0
    for n in range(4):
        for l in range(4):
            E = -0.5 * (2 * n + 2 * l + 1) ** 2
            worst_sep = max(worst_sep,
                            separated_ode_residual(spec, "uv", QuantumNumbers(n, l, "uv"), E,
                                                   n_points=4001))
    worst_2d = 0.0
    for (n, l) in ((0, 0), (0, 1), (1, 2), (3, 3)):
        E = -0.5 * (2 * n + 2 * l + 1) ** 2
        qn = QuantumNumbers(n, l, "uv")
        g = default_grid(spec, "uv", qn, E, (501, 301))
        f = assemble_bound_state(spec, "uv", qn, grid=g, energy=E)
        worst_2d = max(worst_2d, hamiltonian_residual(f))
    ok = dev < 1e-12 and worst_sep < 1e-6 and worst_2d < 1e-5
    report(2, "D_III free-motion spectrum and residual gates", ok,
           f"dE={dev:.2e} ode={worst_sep:.2e} pde={worst_2d:.2e}")


def test_criterion_3_quartic_consistency():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(20):
        a, b = (float(rng.uniform(0.5, 2.5)) for _ in range(2))
        k3 = float(rng.uniform(-0.5, 0.5))
        N = int(rng.integers(1, 6))
        sp = SpaceParams(DIII, a, b)
        spec = PotentialSpec(sp, "DIII_V1", {"k3": k3})
        qn = QuantumNumbers(N - 1, 0, "parabolic")
        B = b * N * N / (2 * a * a) - 2 * k3 / a
        disc = complex(B * B - 4 * k3 * k3 / (a * a)) ** 0.5
        for E in ((-B + disc) / 2, (-B - disc) / 2):
            if abs(E.imag) > 1e-12:
                continue
            worst = max(worst, quantization_residual(spec, qn, E.real))
    spec = PotentialSpec(SP1, "DIII_V1", {"k3": 0.01})
    roots = solve_quantization(spec, QuantumNumbers(0, 0, "parabolic"))
    found = [r for r in roots.admissible if r["admissible"] and r["E"] < 0]
    flagged = all(r["satisfies_unsquared"] for r in found)
    ok = worst < 1e-9 and len(found) == 2 and flagged
    report(3, "D_III V1 quartic consistency", ok,
           f"residual={worst:.2e} roots={len(found)} flagged={flagged}")


def test_criterion_4_quadratic_plugbacks_and_equivalences():
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(20):
        a3, b3 = (float(rng.uniform(0.5, 2.5)) for _ in range(2))
        sp3 = SpaceParams(DIII, a3, b3)
        bb = float(rng.uniform(0.3, 1.2))
        sp4 = SpaceParams(DIV, 2 * bb + float(rng.uniform(0.1, 1.5)), bb)
        cases = [
            (PotentialSpec(sp3, "DIII_V2", {"alpha": float(rng.uniform(0.05, 1)),
                                            "k1": float(rng.uniform(0.1, 1)),
                                            "k2": float(rng.uniform(0.1, 1))}), "uv"),
            (PotentialSpec(sp3, "DIII_V3", {"alpha": float(rng.uniform(0.05, 1)),
                                            "c1": float(rng.uniform(0.3, 1.5)),
                                            "c2": float(rng.uniform(0.3, 1.5))}), "polar"),
            (PotentialSpec(sp3, "DIII_V5", {"v0": float(rng.uniform(0, 1))}), "uv"),
            (PotentialSpec(sp3, "DIII_V5", {"v0": float(rng.uniform(0, 1))}), "polar"),
            (PotentialSpec(sp4, "DIV_V1", {"alpha": float(rng.uniform(8, 16)),
                                           "k1": float(rng.uniform(0.1, 1)),
                                           "k2": float(rng.uniform(0.1, 1)),
                                           "omega": float(rng.uniform(0.5, 1.5))}), "uv"),
            (PotentialSpec(sp4, "DIV_V2", {"k1": 1.0, "k2": float(rng.uniform(7, 10)),
                                           "k3": float(rng.uniform(0.2, 1))}), "uv"),
        ]
        for spec, scheme in cases:
            qn = QuantumNumbers(int(rng.integers(0, 3)), int(rng.integers(0, 3)), scheme)
            roots = solve_quantization(spec, qn)
            for rec in roots.admissible:
                worst = max(worst, rec["residual"])
    # counting-scheme equivalences
    spec = PotentialSpec(SP1, "DIII_V2", {"alpha": 0.4, "k1": 0.3, "k2": 0.8})
    eq = 0.0
    for (n, l), (nx, ne) in (((1, 1), (2, 0)), ((0, 2), (1, 1))):
        A = sorted(z.real for z in solve_quantization(spec, QuantumNumbers(n, l, "uv")).candidates)
        B = sorted(z.real for z in
                   solve_quantization(spec, QuantumNumbers(nx, ne, "parabolic")).candidates)
        eq = max(eq, max(abs(x - y) for x, y in zip(A, B)))
    specd = PotentialSpec(SP4, "DIV_V1", {"alpha": 12.0, "k1": 0.6, "k2": 0.4, "omega": 1.0})
    A = sorted(z.real for z in solve_quantization(specd, QuantumNumbers(1, 1, "uv")).candidates)
    B = sorted(z.real for z in
               solve_quantization(specd, QuantumNumbers(2, 0, "horospherical")).candidates)
    eq = max(eq, max(abs(x - y) for x, y in zip(A, B)))
    ok = worst < 1e-12 and eq < 1e-10
    report(4, "quadratic plug-backs and scheme equivalences", ok,
           f"residual={worst:.2e} set_dev={eq:.2e}")


def test_criterion_5_asymptotics():
    worst = 0.0
    spec2 = PotentialSpec(SP1, "DIII_V2", {"alpha": 1.0, "k1": 0.5, "k2": 0.5})
    qn = QuantumNumbers(49, 49, "uv")  # N = 199
    es = sorted(z.real for z in solve_quantization(spec2, qn).candidates)
    for E, br in ((es[0], "minus"), (es[1], "plus")):
        worst = max(worst, abs(E / asymptotic_spectrum(spec2, qn, br) - 1))
    spec3 = PotentialSpec(SP1, "DIII_V3", {"alpha": 1.0, "c1": 1.0, "c2": 0.5})
    qn = QuantumNumbers(99, 0, "polar")
    es = sorted(z.real for z in solve_quantization(spec3, qn).candidates)
    for E, br in ((es[0], "minus"), (es[1], "plus")):
        worst = max(worst, abs(E / asymptotic_spectrum(spec3, qn, br) - 1))
    spec5 = PotentialSpec(SP1, "DIII_V5", {"v0": 1.0})
    for scheme, nl in (("uv", (50, 49)), ("polar", (50, 99))):
        qn = QuantumNumbers(*nl, scheme)
        es = sorted(z.real for z in solve_quantization(spec5, qn).candidates)
        for E, br in ((es[0], "plus"), (es[1], "minus")):
            worst = max(worst, abs(E / asymptotic_spectrum(spec5, qn, br) - 1))
    ok = worst < 0.01
    report(5, "large-N asymptotics within 1%", ok, f"worst ratio dev={worst:.2e}")


def test_criterion_6_building_block_oracle():
    morse = sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5})
    rep_m = verify_building_block(morse, 1)
    d0 = abs(rep_m.details[0]["E_num"] + 2.0)
    d1 = abs(rep_m.details[1]["E_num"] + 0.5)
    rep_p = verify_building_block(sf.ModelFamily(sf.PT, {"alpha": 0.5, "beta": 0.5}), 0)
    dp = abs(rep_p.details[0]["E_num"] - 2.0)
    rep_r = verify_building_block(sf.ModelFamily(sf.RHO, {"omega": 1.0, "lam": 0.5}), 0)
    dr = abs(rep_r.details[0]["E_num"] - 1.5)
    vec = max(rep_m.max_dev_eigenvector, rep_p.max_dev_eigenvector, rep_r.max_dev_eigenvector)
    ok = max(d0, d1, dp, dr) < 1e-6 and vec < 1e-5
    report(6, "finite-difference eigensolver oracle", ok,
           f"dE={max(d0, d1, dp, dr):.2e} dL2={vec:.2e}")


GATES = [
    ("DIII_V1", {"k1": 0.4, "k2": 0.3, "k3": 0.2}, "parabolic", (1, 0, "parabolic"), None),
    ("DIII_V2", {"alpha": 0.0, "k1": 0.3, "k2": 0.7}, "uv", (1, 0, "uv"), -12.5),
    ("DIII_V2", {"alpha": 0.0, "k1": 0.3, "k2": 0.7}, "polar", (1, 0, "polar"), -12.5),
    ("DIII_V2", {"alpha": 0.0, "k1": 0.3, "k2": 0.7}, "parabolic", (1, 1, "parabolic"), None),
    ("DIII_V3", {"alpha": 0.0, "c1": 1.2, "c2": 0.8}, "polar", (0, 0, "polar"), None),
    ("DIII_V4", {"d1": -1.5, "d2": -0.5, "omega": 1.0}, "hyperbolic", (0, 0, "hyperbolic"), -3.0),
    ("DIII_V5", {"v0": 0.0}, "uv", (0, 1, "uv"), -4.5),
    ("DIII_V5", {"v0": 0.0}, "polar", (1, 1, "polar"), -8.0),
    ("DIII_V5", {"v0": 0.0}, "parabolic", (1, 1, "parabolic"), -4.5),
    ("DIII_V5", {"v0": 0.0}, "hyperbolic", (1, 1, "hyperbolic"), -2.25),
    ("DIV_V1", {"alpha": 12.0, "k1": 0.6, "k2": 0.4, "omega": 1.0}, "uv", (0, 0, "uv"), None),
    ("DIV_V1", {"alpha": 12.0, "k1": 0.6, "k2": 0.4, "omega": 1.0}, "horospherical",
     (0, 0, "horospherical"), None),
    ("DIV_V2", {"k1": 2.0, "k2": 6.0, "k3": 0.5}, "uv", (0, 0, "uv"), None),
    ("DIV_V2", {"k1": 2.0, "k2": 6.0, "k3": 0.5}, "degelliptic2", (0, 0, "uv"), None),
    ("DIV_V3", {"c1": 0.3, "c2": -200.0, "c3": 0.2}, "degelliptic2",
     (0, 0, "degelliptic2"), None),
]


def test_criterion_7_pde_residual_gate():
    worst = 0.0
    worst_case = ""
    for family, coup, chart, qn, energy in GATES:
        sp = SP1 if family.startswith("DIII") else SP4
        spec = PotentialSpec(sp, family, coup)
        q = QuantumNumbers(*qn)
        e = energy if energy is not None else pick_energy(spec, q)
        if chart == "degelliptic2" and family == "DIV_V2":
            field = assemble_bound_state(spec, chart, q, energy=e)
        else:
            grid = default_grid(spec, chart, q, e, (401, 301))
            field = assemble_bound_state(spec, chart, q, grid=grid, energy=e)
        r = hamiltonian_residual(field)
        if r > worst:
            worst, worst_case = r, f"{family}/{chart}"
    # 4th-order convergence under halving on a representative state
    spec = PotentialSpec(SP1, "DIII_V5", {"v0": 0.0})
    qn = QuantumNumbers(0, 1, "uv")
    rs = []
    for shape in ((101, 81), (201, 161), (401, 321)):
        g = default_grid(spec, "uv", qn, -4.5, shape)
        rs.append(hamiltonian_residual(assemble_bound_state(spec, "uv", qn, grid=g, energy=-4.5)))
    conv = min(rs[0] / rs[1], rs[1] / rs[2])
    ok = worst < 1e-5 and conv >= 8.0
    report(7, "2D Hamiltonian residual gate over all solvable pairs", ok,
           f"worst={worst:.2e} at {worst_case}, halving factor={conv:.1f}")


def test_criterion_8_classical_algebra():
    rng = np.random.default_rng(108)
    worst_fun = 0.0
    for _ in range(500):
        sp = SpaceParams(DIII, float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 2)))
        st = PhaseState(Chart("uv", float(rng.uniform(-1, 1)), float(rng.uniform(0, 6))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        X1 = observable_value(sp, "X1", st)
        X2 = observable_value(sp, "X2", st)
        H0 = observable_value(sp, "H0", st)
        K = observable_value(sp, "K", st)
        scale = max(H0 * H0, abs(X1), 1e-12)
        worst_fun = max(worst_fun, abs(X1 * X1 + X2 * X2 - H0 * H0 - H0 * K * K) / scale)
        b = float(rng.uniform(0.3, 1.2))
        sp4 = SpaceParams(DIV, 2 * b + float(rng.uniform(0.1, 1.5)), b)
        st = PhaseState(Chart("uv", float(rng.uniform(0.25, 1.3)), float(rng.uniform(-1, 1))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        X1 = observable_value(sp4, "X1", st)
        X2 = observable_value(sp4, "X2", st)
        H0 = observable_value(sp4, "H0", st)
        K = observable_value(sp4, "K", st)
        scale = max(H0 * H0, abs(X1 * X2), K ** 4, 1e-12)
        worst_fun = max(worst_fun,
                        abs(X1 * X2 - (K ** 4 + sp4.a * K * K * H0) / b ** 2 - H0 * H0) / scale)
    worst_br = 0.0
    for _ in range(50):
        sp = SpaceParams(DIII, float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 2)))
        st = PhaseState(Chart("uv", float(rng.uniform(-1, 1)), float(rng.uniform(0, 6))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        res = algebra_check(sp, st)
        worst_br = max(worst_br, *(abs(v) for k, v in res.items() if k.startswith("bracket")))
        b = float(rng.uniform(0.3, 1.2))
        sp4 = SpaceParams(DIV, 2 * b + float(rng.uniform(0.1, 1.5)), b)
        st = PhaseState(Chart("uv", float(rng.uniform(0.25, 1.3)), float(rng.uniform(-1, 1))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        res = algebra_check(sp4, st)
        worst_br = max(worst_br, *(abs(v) for k, v in res.items() if k.startswith("bracket")))
    worst_dr = 0.0
    for sp, q0 in ((SpaceParams(DIII, 1.2, 0.8), Chart("uv", 0.3, 1.0)),
                   (SP4, Chart("uv", 0.7, 0.2))):
        _, traj = hamiltonian_flow(sp, None, PhaseState(q0, 0.7, -0.4), 10.0, tol=1e-11)
        for obs in ("X1", "X2", "K"):
            worst_dr = max(worst_dr, drift([observable_value(sp, obs, s) for s in traj]))
    ok = worst_fun < 1e-10 and worst_br < 1e-6 and worst_dr < 1e-6
    report(8, "classical algebra, Poisson relations, conservation", ok,
           f"functional={worst_fun:.2e} brackets={worst_br:.2e} drift={worst_dr:.2e}")


def test_criterion_9_dispersions():
    worst = 0.0
    ps = np.linspace(0.0, 3.0, 10)
    b = 1.0
    sp = SpaceParams(DIV, 6.0, b)  # a_+ = 2, a_- = 1
    hq = _quantum_unit(sp)
    cases = [
        (PotentialSpec(sp, "DIV_V1", {"k2": 0.7, "omega": 1.0}), None,
         lambda p: hq / sp.a_plus * (p * p + 0.49)),
        (PotentialSpec(sp, "DIV_V2", {"k3": 0.6}), None,
         lambda p: hq / sp.a_plus * (p * p + 0.36)),
        (PotentialSpec(sp, "DIV_V2", {"k3": 0.6}), "degelliptic",
         lambda p: hq / sp.a_minus * (p * p + 0.36)),
        (PotentialSpec(sp, "DIV_V3", {"c3": 0.2}), None,
         lambda p: hq / sp.a_minus * (p * p + 0.25 - 0.2)),
        (PotentialSpec(sp, "DIV_V4", {"k0": 0.9}), None,
         lambda p: hq / sp.a_plus * (p * p + 0.81)),
        (PotentialSpec(sp, "DIV_V4", {"k0": 0.5}), "degelliptic",
         lambda p: hq / sp.a_minus * (p * p + 0.25)),
        (PotentialSpec(SP1, "DIII_V4", {"omega": 1.0}), None, lambda p: 0.5 * p * p),
    ]
    for spec, aux, ref in cases:
        for p in ps:
            got = continuous_dispersion(spec, float(p), aux=aux)
            worst = max(worst, abs(got - ref(p)))
    ok = worst < 1e-15
    report(9, "continuous dispersion relations", ok, f"worst={worst:.2e}")


def test_criterion_10_cli_determinism(tmp_path):
    jobs = [
        ["curvature", "--space", "DIV", "--a", "2", "--b", "1", "--grid", "6x6",
         "--format", "csv"],
        ["spectrum", "--space", "DIII", "--potential", "V5", "--a", "1", "--b", "1",
         "--v0", "0", "--scheme", "uv", "--n", "0..2", "--l", "0..2"],
        ["wavefunction", "--space", "DIII", "--potential", "V5", "--a", "1", "--b", "1",
         "--v0", "0", "--n", "0", "--l", "1", "--chart", "uv", "--grid", "12x12"],
        ["classical", "--space", "DIII", "--a", "1", "--b", "1", "--q1", "0.3",
         "--q2", "1.0", "--p1", "0.7", "--p2", "-0.4", "--t-final", "1",
         "--samples", "11"],
        ["verify", "--suite", "spectra"],
    ]
    ok = True
    for i, argv in enumerate(jobs):
        a, bfile = tmp_path / f"{i}a", tmp_path / f"{i}b"
        for out in (a, bfile):
            r = subprocess.run([sys.executable, "-m", "darboux.cli"] + argv
                               + ["--out", str(out)], capture_output=True)
            ok = ok and r.returncode == 0
        ok = ok and a.read_bytes() == bfile.read_bytes()
    report(10, "CLI byte-identical reruns for every command", ok)
