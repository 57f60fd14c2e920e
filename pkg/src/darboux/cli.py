"""Command-line front end: batch jobs serialized as JSON or CSV.

Commands: curvature maps, spectrum tables, wavefunction grids, classical
diagnostics, and the verification suites.  Outputs are deterministic
(shortest round-trip decimals in JSON, 17 significant digits in CSV) and
written atomically.  DARBOUX_THREADS caps the parallelism of per-record
loops; exit codes are 0 (success), 2 (validation error), 3 (a verification
suite failed its tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import DarbouxError
from .geometry import DIII, DIV, Chart, SpaceParams, curvature_closed, curvature_numeric
from .potentials import FAMILIES, PotentialSpec
from .spectra import QuantumNumbers, solve_quantization
from .wavefun import assemble_bound_state, default_grid, hamiltonian_residual, pick_energy

COUPLING_FLAGS = ("k1", "k2", "k3", "alpha", "c1", "c2", "c3", "d1", "d2", "omega", "v0", "k0")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DARBOUX_THREADS", "1")))
    except ValueError:
        return 1


def _add_space_args(p):
    p.add_argument("--space", required=True, choices=[DIII, DIV])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)


def _add_coupling_args(p):
    p.add_argument("--potential", required=True,
                   help="family name, e.g. V5 (on the chosen space)")
    for c in COUPLING_FLAGS:
        p.add_argument(f"--{c}", type=float, default=None)


def _add_out_args(p):
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")


def _space_of(args) -> SpaceParams:
    return SpaceParams(args.space, args.a, args.b, args.hbar, args.mass)


def _spec_of(args) -> PotentialSpec:
    fam = f"{args.space}_{args.potential}"
    if fam not in FAMILIES:
        raise DarbouxError(f"unknown potential {args.potential!r} on {args.space}")
    coup = {}
    for c in COUPLING_FLAGS:
        val = getattr(args, c)
        if val is not None:
            if c not in FAMILIES[fam]:
                raise DarbouxError(f"{fam} does not take coupling {c!r}")
            coup[c] = val
    return PotentialSpec(_space_of(args), fam, coup)


def _parse_range(text: str):
    """Inclusive 'a..b' integer range, or a single integer."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _parse_grid(text: str):
    n1, n2 = text.lower().split("x")
    return int(n1), int(n2)


def _fmt17(x) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".darboux-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, header: dict, records: list, columns=None):
    if args.format == "json":
        doc = {"header": header, "records": records}
        _atomic_write(args.out, json.dumps(doc, sort_keys=True) + "\n")
        return
    if not columns:
        columns = sorted({k for r in records for k in r})
    lines = [",".join(columns)]
    for r in records:
        cells = []
        for c in columns:
            v = r.get(c, "")
            cells.append(_fmt17(v) if isinstance(v, (int, float)) and not isinstance(v, bool)
                         else str(v))
        lines.append(",".join(cells))
    _atomic_write(args.out, "\r\n".join(lines) + "\r\n")


def _header(args, command: str, spec: PotentialSpec | None = None, **extra) -> dict:
    h = {"tool_version": __version__, "command": command}
    if getattr(args, "space", None) is not None:
        h["space"] = {"family": args.space, "a": args.a, "b": args.b,
                      "hbar": args.hbar, "mass": args.mass}
    if spec is not None:
        h["potential"] = spec.family
        h["couplings"] = dict(sorted(spec.couplings.items()))
    h.update(extra)
    return h


def cmd_curvature(args) -> int:
    sp = _space_of(args)
    n1, n2 = _parse_grid(args.grid)
    if args.space == DIII:
        u_lo, u_hi = (-1.0, 1.0) if args.u_range is None else map(float, args.u_range.split(":"))
    else:
        u_lo, u_hi = (0.1 * math.pi / 2, 0.9 * math.pi / 2) if args.u_range is None else map(
            float, args.u_range.split(":"))
    v_lo, v_hi = (0.0, 1.0) if args.v_range is None else map(float, args.v_range.split(":"))
    us = np.linspace(u_lo, u_hi, n1)
    vs = np.linspace(v_lo, v_hi, n2)
    records = []
    for u in us:
        for v in vs:
            g = curvature_numeric(sp, Chart("uv", float(u), float(v)), args.step)
            records.append({"u": float(u), "v": float(v), "G": g,
                            "G_closed": curvature_closed(sp, (float(u), float(v)))})
    _emit(args, _header(args, "curvature", grid=args.grid, step=args.step),
          records, columns=["u", "v", "G", "G_closed"])
    return 0


def cmd_spectrum(args) -> int:
    spec = _spec_of(args)
    scheme = args.scheme.lower().replace("-", "")
    ns = _parse_range(args.n)
    ls = _parse_range(args.l)

    def one(pair):
        n, l = pair
        qn = QuantumNumbers(n, l, scheme)
        roots = solve_quantization(spec, qn)
        return {
            "n": n,
            "l": l,
            "candidates_re": [z.real for z in roots.candidates],
            "candidates_im": [z.imag for z in roots.candidates],
            "admissible": [
                {k: rec[k] for k in ("E", "residual", "sqrt_real", "satisfies_unsquared",
                                     "unsquared_sign", "decaying_wavefunction", "admissible")}
                for rec in roots.admissible
            ],
        }

    pairs = [(n, l) for n in ns for l in ls]
    nt = _threads()
    if nt > 1:
        with ThreadPoolExecutor(max_workers=nt) as ex:
            records = list(ex.map(one, pairs))
    else:
        records = [one(p) for p in pairs]
    _emit(args, _header(args, "spectrum", spec, scheme=scheme), records)
    return 0


def cmd_wavefunction(args) -> int:
    spec = _spec_of(args)
    scheme = args.scheme.lower()
    qn = QuantumNumbers(int(args.n), int(args.l), scheme)
    energy = args.energy if args.energy is not None else pick_energy(spec, qn)
    n1, n2 = _parse_grid(args.grid)
    grid = default_grid(spec, args.chart, qn, energy, (n1, n2))
    field = assemble_bound_state(spec, args.chart, qn, grid=grid, energy=energy)
    resid = hamiltonian_residual(field)
    records = []
    for i, x in enumerate(field.q1):
        for j, y in enumerate(field.q2):
            records.append({"q1": float(x), "q2": float(y),
                            "re": float(field.values[i, j].real),
                            "im": float(field.values[i, j].imag)})
    _emit(args, _header(args, "wavefunction", spec, scheme=scheme, chart=args.chart,
                        n=int(args.n), l=int(args.l), energy=energy,
                        hamiltonian_residual=resid),
          records, columns=["q1", "q2", "re", "im"])
    return 0


def cmd_classical(args) -> int:
    from .classical import (PhaseState, algebra_check, hamiltonian_flow,
                            hamiltonian_value, observable_value)

    sp = _space_of(args)
    spec = _spec_of(args) if args.potential else None
    st0 = PhaseState(Chart(args.chart, args.q1, args.q2), args.p1, args.p2)
    records = []
    if args.t_final > 0:
        ts, traj = hamiltonian_flow(sp, spec, st0, args.t_final, tol=args.tol,
                                    n_out=args.samples)
        for t, st in zip(ts, traj):
            rec = {"t": float(t), "q1": st.chart.q1, "q2": st.chart.q2,
                   "p1": st.p1, "p2": st.p2,
                   "H": hamiltonian_value(sp, spec, st)}
            if st.chart.name == "uv":
                for obs in ("H0", "X1", "X2", "K"):
                    rec[obs] = observable_value(sp, obs, st)
            records.append(rec)
    alg = {k: float(v) for k, v in algebra_check(sp, st0).items()} \
        if args.chart == "uv" else {}
    _emit(args, _header(args, "classical", spec, tol=args.tol,
                        t_final=args.t_final, algebra_at_start=alg), records)
    return 0


def cmd_verify(args) -> int:
    from . import verify as vf

    suites = {
        "building-blocks": vf.suite_building_blocks,
        "curvature": vf.suite_curvature,
        "spectra": vf.suite_spectra,
        "classical": vf.suite_classical,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    report = {}
    ok = True
    for nm in names:
        rep = suites[nm]()
        report[nm] = rep
        ok = ok and rep["pass"]
    _emit(args, _header(args, "verify", suite=args.suite),
          [{"suite": k, **{kk: vv for kk, vv in v.items() if kk != "details"}}
           for k, v in report.items()])
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="darboux",
                                 description="Superintegrable systems on the Darboux "
                                             "surfaces of type III and IV")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="Gaussian curvature map on the (u, v) chart")
    _add_space_args(p)
    p.add_argument("--grid", default="50x50")
    p.add_argument("--u-range", default=None, help="lo:hi")
    p.add_argument("--v-range", default=None, help="lo:hi")
    p.add_argument("--step", type=float, default=1e-3)
    _add_out_args(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("spectrum", help="bound-state quantization tables")
    _add_space_args(p)
    _add_coupling_args(p)
    p.add_argument("--scheme", default="uv")
    p.add_argument("--n", default="0..3", help="inclusive range a..b")
    p.add_argument("--l", default="0..3")
    _add_out_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sampled 2D bound state on a chart grid")
    _add_space_args(p)
    _add_coupling_args(p)
    p.add_argument("--scheme", default="uv")
    p.add_argument("--chart", default="uv")
    p.add_argument("--n", default="0")
    p.add_argument("--l", default="0")
    p.add_argument("--energy", type=float, default=None)
    p.add_argument("--grid", default="40x40")
    _add_out_args(p)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("classical", help="Hamiltonian flow and algebra diagnostics")
    _add_space_args(p)
    p.add_argument("--potential", default=None)
    for c in COUPLING_FLAGS:
        p.add_argument(f"--{c}", type=float, default=None)
    p.add_argument("--chart", default="uv")
    p.add_argument("--q1", type=float, required=True)
    p.add_argument("--q2", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--t-final", type=float, default=10.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=101)
    _add_out_args(p)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("verify", help="run a numerical verification suite")
    p.add_argument("--suite", default="all",
                   choices=["all", "building-blocks", "curvature", "spectra", "classical"])
    _add_out_args(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except DarbouxError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except Exception as exc:  # numerical failure surfaces as oracle error
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
