"""Classical layer: constants of motion, Poisson algebra, Hamiltonian flow.

The extra constants of motion are quadratic forms in the momenta with
chart-dependent coefficient functions.  On D_III, with g(u) = e^{2u}/(b+ae^u)
(so the free Hamiltonian is H = g (p_u^2+p_v^2)/2m),

    X1 = al [ g cos v p_u^2 - (e^u (2b+ae^u)/(a(b+ae^u))) cos v p_v^2 ]
         + (2 al/a) e^u sin v p_u p_v ,        al = a^2/(4b),
    X2 = dX1/dv,   K = p_v,

which closes the algebra X1^2 + X2^2 - H0~^2 - H0~ K^2 = 0 with the
normalized Hamiltonian H0~ = al g (p_u^2 + p_v^2).  On D_IV, with
G(u) = sin^2 2u/(2b cos 2u + a),

    X1 = e^{-2v} (G p_u^2 + D p_v^2 + C p_u p_v),
    X2 = e^{+2v} (G p_u^2 + D p_v^2 - C p_u p_v),
    D  = 3 G G'^2 / (2 G G'' - G'^2 + 16 G^2),   C = -4 G D / G',

and the algebra closes as b^2 X1 X2 - K^4 - a K^2 H0~ - b^2 H0~^2 = 0 with
H0~ = -G (p_u^2 + p_v^2).  These coefficient functions are the general-(a,b)
resolutions of the usual a = b = 1 normal forms; the conservation and
algebra tests are the adjudicators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DarbouxError, DomainError, ParamError, UnsupportedError
from .geometry import (
    DIII,
    Chart,
    SpaceParams,
    chart_transform,
    metric_diag,
    validate_chart,
)
from .potentials import PotentialSpec, potential_value


class BlowupError(DarbouxError):
    """The flow left the chart domain within the integration window."""


@dataclass(frozen=True)
class PhaseState:
    """A chart point plus its conjugate momenta."""

    chart: Chart
    p1: float
    p2: float

    def point(self):
        return (self.chart.q1, self.chart.q2)


OBSERVABLES = ("H0", "X1", "X2", "K")


def _d3_coeffs(space: SpaceParams, u: float):
    a, b = space.a, space.b
    s = math.exp(u)
    g = s * s / (b + a * s)
    al = a * a / (4.0 * b)
    A = al * g
    B = -al * s * (2.0 * b + a * s) / (a * (b + a * s))
    C = 2.0 * al * s / a
    return g, al, A, B, C


def _d4_G(space: SpaceParams, u: float):
    a, b = space.a, space.b
    s, c = math.sin(2.0 * u), math.cos(2.0 * u)
    d = 2.0 * b * c + a
    G = s * s / d
    Gp = 4.0 * s * (c * d + b * s * s) / (d * d)
    Gpp = 8.0 * (d * d * (c * c - s * s) + 5.0 * b * c * s * s * d + 4.0 * b * b * s ** 4) / d ** 3
    return G, Gp, Gpp


def _d4_coeffs(space: SpaceParams, u: float):
    G, Gp, Gpp = _d4_G(space, u)
    D = 3.0 * G * Gp * Gp / (2.0 * G * Gpp - Gp * Gp + 16.0 * G * G)
    C = -4.0 * G * D / Gp
    return G, D, C


def observable_value(space: SpaceParams, obs: str, state: PhaseState) -> float:
    """Value of a constant of motion (or the algebra-normalized Hamiltonian).

    States given in other charts are transformed to (u, v) first, with the
    momenta carried as covectors.
    """
    if obs not in OBSERVABLES:
        raise ParamError(f"unknown observable {obs!r}")
    if state.chart.name != "uv":
        state = transform_state(space, state, "uv")
    u, v = state.chart.q1, state.chart.q2
    pu, pv = state.p1, state.p2
    if obs == "K":
        return pv
    if space.family == DIII:
        g, al, A, B, C = _d3_coeffs(space, u)
        if obs == "H0":
            return al * g * (pu * pu + pv * pv)
        if obs == "X1":
            return math.cos(v) * (A * pu * pu + B * pv * pv) + math.sin(v) * C * pu * pv
        return -math.sin(v) * (A * pu * pu + B * pv * pv) + math.cos(v) * C * pu * pv
    G, D, C = _d4_coeffs(space, u)
    if obs == "H0":
        return -G * (pu * pu + pv * pv)
    if obs == "X1":
        return math.exp(-2.0 * v) * (G * pu * pu + D * pv * pv + C * pu * pv)
    return math.exp(2.0 * v) * (G * pu * pu + D * pv * pv - C * pu * pv)


def hamiltonian_value(space: SpaceParams, spec: PotentialSpec | None, state: PhaseState) -> float:
    """The physical Hamiltonian (kinetic + potential) at the state."""
    g11, g22 = metric_diag(space, state.chart)
    kin = (state.p1 ** 2 / g11 + state.p2 ** 2 / g22) / (2.0 * space.mass)
    if spec is None:
        return kin
    return kin + float(np.real(potential_value(spec, state.chart)))


def transform_state(space: SpaceParams, state: PhaseState, to_name: str) -> PhaseState:
    """Transform a phase-space state to another chart (momenta as covectors)."""
    if state.chart.name == to_name:
        return state
    new_chart = chart_transform(space, state.chart, to_name)

    # p'_j = sum_i p_i dq_i/dq'_j evaluated by central differences of the map
    def fwd(q1, q2):
        c = chart_transform(space, replace(new_chart, q1=q1, q2=q2), state.chart.name)
        return np.array([c.q1, c.q2])

    h1 = 1e-7 * (1.0 + abs(new_chart.q1))
    h2 = 1e-7 * (1.0 + abs(new_chart.q2))
    d1 = (fwd(new_chart.q1 + h1, new_chart.q2) - fwd(new_chart.q1 - h1, new_chart.q2)) / (2 * h1)
    d2 = (fwd(new_chart.q1, new_chart.q2 + h2) - fwd(new_chart.q1, new_chart.q2 - h2)) / (2 * h2)
    p = np.array([state.p1, state.p2])
    return PhaseState(new_chart, float(p @ d1), float(p @ d2))


def poisson_bracket_fd(space: SpaceParams, obs_a, obs_b, state: PhaseState,
                       step: float = 1e-5) -> float:
    """Canonical Poisson bracket {A, B} by central differences.

    ``obs_a``/``obs_b`` are observable names or callables of a PhaseState;
    one Richardson extrapolation over (step, step/2) removes the h^2 error.
    """

    def as_fn(o):
        if callable(o):
            return o
        return lambda st: observable_value(space, o, st)

    fa, fb = as_fn(obs_a), as_fn(obs_b)
    if state.chart.name != "uv":
        state = transform_state(space, state, "uv")

    def shift(st, dq1=0.0, dq2=0.0, dp1=0.0, dp2=0.0):
        return PhaseState(replace(st.chart, q1=st.chart.q1 + dq1, q2=st.chart.q2 + dq2),
                          st.p1 + dp1, st.p2 + dp2)

    def bracket(h):
        out = 0.0
        for qk, pk in (("q1", "p1"), ("q2", "p2")):
            dAq = (fa(shift(state, **{f"d{qk}": h})) - fa(shift(state, **{f"d{qk}": -h}))) / (2 * h)
            dBp = (fb(shift(state, **{f"d{pk}": h})) - fb(shift(state, **{f"d{pk}": -h}))) / (2 * h)
            dAp = (fa(shift(state, **{f"d{pk}": h})) - fa(shift(state, **{f"d{pk}": -h}))) / (2 * h)
            dBq = (fb(shift(state, **{f"d{qk}": h})) - fb(shift(state, **{f"d{qk}": -h}))) / (2 * h)
            out += dAq * dBp - dAp * dBq
        return out

    b1, b2 = bracket(step), bracket(step / 2.0)
    return (4.0 * b2 - b1) / 3.0


def algebra_check(space: SpaceParams, state: PhaseState) -> dict:
    """Pointwise residuals of the quadratic algebra and the Poisson relations."""
    H0 = observable_value(space, "H0", state)
    X1 = observable_value(space, "X1", state)
    X2 = observable_value(space, "X2", state)
    K = observable_value(space, "K", state)
    out = {}
    scale = max(H0 * H0, abs(X1 * X2), K ** 4, 1e-12)
    if space.family == DIII:
        out["functional"] = (X1 * X1 + X2 * X2 - H0 * H0 - H0 * K * K) / scale
        out["bracket_KX1_plus_X2"] = poisson_bracket_fd(space, "K", "X1", state) + X2
        out["bracket_KX2_minus_X1"] = poisson_bracket_fd(space, "K", "X2", state) - X1
        out["bracket_X1X2_minus_KH0"] = poisson_bracket_fd(space, "X1", "X2", state) - K * H0
    else:
        b2 = space.b ** 2
        out["functional"] = (X1 * X2 - (K ** 4 + space.a * K * K * H0) / b2 - H0 * H0) / scale
        out["bracket_KX1_minus_2X1"] = poisson_bracket_fd(space, "K", "X1", state) - 2.0 * X1
        out["bracket_KX2_plus_2X2"] = poisson_bracket_fd(space, "K", "X2", state) + 2.0 * X2
        # resolved closure of the mixed bracket under this normalization
        out["bracket_X1X2_minus_rel"] = poisson_bracket_fd(space, "X1", "X2", state) + (
            8.0 / space.b ** 2
        ) * (K ** 3 + 0.5 * space.a * K * H0)
    return out


def hamiltonian_flow(space: SpaceParams, spec: PotentialSpec | None, state0: PhaseState,
                     t_final: float, tol: float = 1e-10, n_out: int = 201):
    """Integrate Hamilton's equations in the state's chart.

    Returns (times, states).  The Hamiltonian is evaluated from the metric
    and the potential; its gradients are taken by central differences.  A
    trajectory that leaves the chart domain raises BlowupError.
    """
    chart0 = state0.chart
    validate_chart(space, chart0)

    def H(y):
        st = PhaseState(replace(chart0, q1=y[0], q2=y[1]), y[2], y[3])
        return hamiltonian_value(space, spec, st)

    def rhs(t, y):
        out = np.empty(4)
        for i in range(4):
            h = 1e-6 * (1.0 + abs(y[i]))
            yp, ym = y.copy(), y.copy()
            yp[i] += h
            ym[i] -= h
            d = (H(yp) - H(ym)) / (2.0 * h)
            if i < 2:
                out[i + 2] = -d
            else:
                out[i - 2] = d
        return out

    y0 = np.array([chart0.q1, chart0.q2, state0.p1, state0.p2])
    ts = np.linspace(0.0, t_final, n_out)
    try:
        sol = solve_ivp(rhs, (0.0, t_final), y0, t_eval=ts, rtol=tol, atol=tol,
                        method="DOP853")
    except DomainError as exc:
        raise BlowupError(str(exc)) from exc
    if not sol.success:
        raise BlowupError(f"integration stopped: {sol.message}")
    states = [PhaseState(replace(chart0, q1=q1, q2=q2), p1, p2)
              for q1, q2, p1, p2 in sol.y.T]
    return sol.t, states


# ----------------------------------------------------------------------
# per-family extra constants of motion
# ----------------------------------------------------------------------

def residual_constant(spec: PotentialSpec, name: str, state: PhaseState) -> float:
    """Value of a potential-specific constant of motion.

    Implemented: DIII_V5 R1, R2, R3 (the coupling corrections in parabolic
    variables added to X1, X2, K) and DIV_V4 R3 = mu p_mu + nu p_nu.
    """
    sp = spec.space
    if spec.family == "DIII_V5":
        if name == "R3":
            return observable_value(sp, "K", state)
        st = transform_state(sp, state, "uv") if state.chart.name != "uv" else state
        par = transform_state(sp, st, "parabolic")
        xi, eta = par.chart.q1, par.chart.q2
        hq = sp.hbar ** 2 / (2.0 * sp.mass)
        v0 = spec.c("v0")
        den = sp.a + 0.25 * sp.b * (xi * xi + eta * eta)
        # coupling corrections fixed by the conservation requirement itself
        if name == "R1":
            return observable_value(sp, "X1", st) + 0.125 * hq * v0 * v0 * (
                eta * eta - xi * xi
            ) / den
        if name == "R2":
            return observable_value(sp, "X2", st) + 0.25 * hq * v0 * v0 * xi * eta / den
    if spec.family == "DIV_V4" and name == "R3":
        st = state if state.chart.name == "horospherical" else transform_state(
            sp, state, "horospherical"
        )
        return st.chart.q1 * st.p1 + st.chart.q2 * st.p2
    raise UnsupportedError(f"{spec.family} has no implemented constant {name!r}")


def drift(values) -> float:
    """Relative drift of a conserved quantity along a trajectory."""
    v = np.asarray(values, dtype=float)
    scale = max(np.abs(v).max(), 1e-12)
    return float((v.max() - v.min()) / scale)
