"""Self-contained verification suites behind ``darboux verify``.

Each suite returns {"pass": bool, "max_dev": float, "details": [...]}; the
CLI exits 0 only if every requested suite passes its stated tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import DIII, DIV, Chart, SpaceParams, curvature_closed, curvature_numeric
from .potentials import PotentialSpec
from .spectra import QuantumNumbers, solve_quantization
from . import specfun as sf


def suite_building_blocks() -> dict:
    from .oracle import verify_building_block

    details = []
    ok = True
    # pinned reference levels
    morse = sf.ModelFamily(sf.MORSE_BOUND, {"v0": 1.0, "alpha_t": 2.5})
    rep = verify_building_block(morse, 1)
    for det, ref in zip(rep.details, (-2.0, -0.5)):
        details.append({"case": f"morse_E{det['n']}", "value": det["E_num"], "ref": ref,
                        "dev": abs(det["E_num"] - ref)})
    pt = sf.ModelFamily(sf.PT, {"alpha": 0.5, "beta": 0.5})
    rep_pt = verify_building_block(pt, 0)
    details.append({"case": "pt_E0", "value": rep_pt.details[0]["E_num"], "ref": 2.0,
                    "dev": abs(rep_pt.details[0]["E_num"] - 2.0)})
    rho = sf.ModelFamily(sf.RHO, {"omega": 1.0, "lam": 0.5})
    rep_rho = verify_building_block(rho, 0)
    details.append({"case": "rho_E0", "value": rep_rho.details[0]["E_num"], "ref": 1.5,
                    "dev": abs(rep_rho.details[0]["E_num"] - 1.5)})
    ok &= all(d["dev"] < 1e-6 for d in details)
    # family certification
    fams = [
        (sf.ModelFamily(sf.HO, {"omega": 1.0}), 3),
        (sf.ModelFamily(sf.RHO, {"omega": 1.0, "lam": 1.5}), 3),
        (sf.ModelFamily(sf.PT, {"alpha": 1.0, "beta": 2.0}), 3),
        (sf.ModelFamily(sf.MPT_BOUND, {"eta": 0.5, "nu": 8.5}), 3),
        (morse, 1),
    ]
    max_dev = max(d["dev"] for d in details)
    for fam, nmax in fams:
        rep = verify_building_block(fam, nmax, n_points=4400 if fam.tag == sf.MPT_BOUND else 3200)
        details.append({"case": f"certify_{fam.tag}", "dE": rep.max_dev_eigenvalue,
                        "dL2": rep.max_dev_eigenvector})
        ok &= rep.max_dev_eigenvalue < 1e-6 and rep.max_dev_eigenvector < 1e-5
        max_dev = max(max_dev, rep.max_dev_eigenvalue, rep.max_dev_eigenvector)
    return {"pass": bool(ok), "max_dev": float(max_dev), "details": details}


def suite_curvature() -> dict:
    rng = np.random.default_rng(20240817)
    details = []
    worst = 0.0
    for famname in (DIII, DIV):
        for _ in range(5):
            if famname == DIII:
                a, b = rng.uniform(0.5, 3.0, 2)
                us = np.linspace(-1.2, 1.2, 10)
            else:
                b = rng.uniform(0.3, 1.5)
                a = 2.0 * b + rng.uniform(0.05, 2.0)
                us = np.linspace(0.15, math.pi / 2 - 0.15, 10)
            sp = SpaceParams(famname, float(a), float(b))
            vs = np.linspace(0.0, 1.0, 10)
            dev = 0.0
            for u in us:
                for v in vs:
                    gn = curvature_numeric(sp, Chart("uv", float(u), float(v)))
                    gc = curvature_closed(sp, (float(u), float(v)))
                    dev = max(dev, abs(gn - gc) / (1.0 + abs(gc)))
            details.append({"case": f"{famname} a={a:.3f} b={b:.3f}", "dev": dev})
            worst = max(worst, dev)
    flat = max(abs(curvature_numeric(SpaceParams(DIII, 1.0, 0.0), Chart("uv", u, 0.0)))
               for u in np.linspace(-1, 1, 20))
    hyper = max(abs(curvature_numeric(SpaceParams(DIV, 2.0, 1.0), Chart("uv", u, 0.0)) + 1.0)
                for u in np.linspace(0.2, 1.3, 20))
    details.append({"case": "flat_limit", "dev": flat})
    details.append({"case": "hyperboloid_limit", "dev": hyper})
    ok = worst < 1e-6 and flat < 1e-8 and hyper < 1e-8
    return {"pass": bool(ok), "max_dev": float(max(worst, flat, hyper)), "details": details}


def suite_spectra() -> dict:
    rng = np.random.default_rng(5)
    details = []
    worst = 0.0
    for _ in range(10):
        a, b = rng.uniform(0.5, 2.5, 2)
        sp = SpaceParams(DIII, float(a), float(b))
        spec = PotentialSpec(sp, "DIII_V2",
                             {"alpha": float(rng.uniform(0.1, 1.0)),
                              "k1": float(rng.uniform(0.1, 1.0)),
                              "k2": float(rng.uniform(0.1, 1.0))})
        qn = QuantumNumbers(int(rng.integers(0, 4)), int(rng.integers(0, 4)), "uv")
        roots = solve_quantization(spec, qn)
        for rec in roots.admissible:
            worst = max(worst, rec["residual"])
    details.append({"case": "DIII_V2 plugback", "dev": worst})
    # free-motion values
    spec5 = PotentialSpec(SpaceParams(DIII, 1.0, 1.0), "DIII_V5", {"v0": 0.0})
    dev5 = 0.0
    for n in range(3):
        for l in range(3):
            roots = solve_quantization(spec5, QuantumNumbers(n, l, "uv"))
            want = -0.5 * (2 * n + 2 * l + 1) ** 2
            dev5 = min(abs(z.real - want) for z in roots.candidates)
            worst = max(worst, dev5)
    details.append({"case": "DIII_V5 free levels", "dev": dev5})
    ok = worst < 1e-9
    return {"pass": bool(ok), "max_dev": float(worst), "details": details}


def suite_classical() -> dict:
    from .classical import PhaseState, algebra_check, drift, hamiltonian_flow, observable_value

    rng = np.random.default_rng(9)
    worst_fun, worst_br = 0.0, 0.0
    for _ in range(60):
        sp = SpaceParams(DIII, float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.5, 2.0)))
        st = PhaseState(Chart("uv", float(rng.uniform(-1, 1)), float(rng.uniform(0, 6))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        res = algebra_check(sp, st)
        worst_fun = max(worst_fun, abs(res["functional"]))
        worst_br = max(worst_br, *(abs(v) for k, v in res.items() if k.startswith("bracket")))
        b = float(rng.uniform(0.3, 1.2))
        sp4 = SpaceParams(DIV, 2.0 * b + float(rng.uniform(0.1, 1.5)), b)
        st = PhaseState(Chart("uv", float(rng.uniform(0.25, 1.3)), float(rng.uniform(-1, 1))),
                        float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
        res = algebra_check(sp4, st)
        worst_fun = max(worst_fun, abs(res["functional"]))
        worst_br = max(worst_br, *(abs(v) for k, v in res.items() if k.startswith("bracket")))
    sp = SpaceParams(DIII, 1.2, 0.8)
    st0 = PhaseState(Chart("uv", 0.3, 1.0), 0.7, -0.4)
    _, traj = hamiltonian_flow(sp, None, st0, 10.0, tol=1e-11)
    worst_dr = max(drift([observable_value(sp, o, s) for s in traj])
                   for o in ("X1", "X2", "K", "H0"))
    ok = worst_fun < 1e-10 and worst_br < 1e-6 and worst_dr < 1e-6
    return {"pass": bool(ok), "max_dev": float(max(worst_fun, worst_br, worst_dr)),
            "details": [{"functional": worst_fun, "brackets": worst_br, "drift": worst_dr}]}
