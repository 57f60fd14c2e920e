import math

import numpy as np
import pytest

from darboux.errors import DomainError, ParamError, UnsupportedError
from darboux.geometry import (
    DIII,
    DIV,
    Chart,
    SpaceParams,
    TRANSFORMABLE,
    chart_transform,
    curvature_closed,
    curvature_numeric,
    metric_diag,
)


def test_space_params_validation():
    with pytest.raises(ParamError):
        SpaceParams(DIII, -1.0, 1.0)
    with pytest.raises(ParamError):
        SpaceParams(DIV, 1.0, 1.0)  # needs a >= 2b
    sp = SpaceParams(DIV, 3.0, 1.0)
    assert sp.a_plus == pytest.approx(1.25)
    assert sp.a_minus == pytest.approx(0.25)
    # hyperboloid limit a = 2b is allowed
    SpaceParams(DIV, 2.0, 1.0)


def test_metric_examples():
    assert metric_diag(SpaceParams(DIII, 1, 1), Chart("uv", 0.0, 0.0)) == (2.0, 2.0)
    g = metric_diag(SpaceParams(DIII, 1, 4), Chart("polar", 1.0, 0.2))
    assert g == (pytest.approx(2.0), pytest.approx(2.0))
    g = metric_diag(SpaceParams(DIV, 4, 0), Chart("uv", math.pi / 4, 0.0))
    assert g == (pytest.approx(4.0), pytest.approx(4.0))


def test_hyperbolic_metric_signed():
    sp = SpaceParams(DIII, 1.0, 1.0)
    g11, g22 = metric_diag(sp, Chart("hyperbolic", 2.0, 1.0))
    f = (1.0 + 0.5 * (2.0 - 1.0)) * 3.0
    assert g11 == pytest.approx(f / 4.0)
    assert g22 == pytest.approx(-f / 1.0)
    with pytest.raises(DomainError):
        metric_diag(sp, Chart("hyperbolic", 0.5, 4.0))  # a + b(mu-nu)/2 < 0


def test_positive_definite_conformal_charts():
    rng = np.random.default_rng(0)
    for fam in (DIII, DIV):
        for _ in range(5):
            if fam == DIII:
                sp = SpaceParams(fam, rng.uniform(0.5, 2), rng.uniform(0.5, 2))
                charts = [Chart("uv", rng.uniform(-1, 1), rng.uniform(0, 2)),
                          Chart("parabolic", rng.uniform(0.2, 2), rng.uniform(0.2, 2)),
                          Chart("elliptic", rng.uniform(0.2, 1.5), rng.uniform(0.1, 1.4))]
            else:
                b = rng.uniform(0.3, 1.0)
                sp = SpaceParams(fam, 2 * b + rng.uniform(0.1, 1), b)
                charts = [Chart("uv", rng.uniform(0.2, 1.3), rng.uniform(-1, 1)),
                          Chart("horospherical", rng.uniform(0.2, 2), rng.uniform(0.2, 2)),
                          Chart("degelliptic2", rng.uniform(0.2, 1.2), rng.uniform(0.1, 0.7))]
            for c in charts:
                g11, g22 = metric_diag(sp, c)
                assert g11 > 0 and g22 > 0


def test_curvature_consistency_random():
    rng = np.random.default_rng(1)
    for fam in (DIII, DIV):
        for _ in range(5):
            if fam == DIII:
                sp = SpaceParams(fam, rng.uniform(0.5, 3), rng.uniform(0.5, 3))
                us = np.linspace(-1.2, 1.2, 10)
            else:
                b = rng.uniform(0.3, 1.5)
                sp = SpaceParams(fam, 2 * b + rng.uniform(0.05, 2), b)
                us = np.linspace(0.15, math.pi / 2 - 0.15, 10)
            for u in us:
                for v in np.linspace(0, 1, 10):
                    gn = curvature_numeric(sp, Chart("uv", float(u), float(v)))
                    gc = curvature_closed(sp, (float(u), 0.0))
                    assert abs(gn - gc) / (1 + abs(gc)) < 1e-6


def test_flat_and_hyperboloid_limits():
    sp = SpaceParams(DIII, 1.0, 0.0)
    for u in np.linspace(-1, 1, 20):
        assert abs(curvature_numeric(sp, Chart("uv", float(u), 0.3))) < 1e-8
    sp = SpaceParams(DIV, 2.0, 1.0)
    for u in np.linspace(0.2, 1.3, 20):
        assert curvature_numeric(sp, Chart("uv", float(u), -0.2)) == pytest.approx(-1.0, abs=1e-8)
        assert curvature_closed(sp, (float(u), 0.0)) == pytest.approx(-1.0, abs=1e-12)


def test_curvature_closed_examples():
    assert curvature_closed(SpaceParams(DIII, 1, 0), (0.4, 0)) == 0.0
    assert curvature_closed(SpaceParams(DIII, 1, 1), (0.0, 0)) == pytest.approx(-1 / 16)


def test_chart_roundtrips():
    sp3 = SpaceParams(DIII, 1.3, 0.7)
    cases3 = [Chart("polar", 1.2, 0.8), Chart("parabolic", 0.5, 1.1),
              Chart("elliptic", 0.7, 0.9), Chart("uv", 0.2, 1.0)]
    for c in cases3:
        back = chart_transform(sp3, chart_transform(sp3, c, "uv"), c.name)
        assert abs(back.q1 - c.q1) < 1e-10 and abs(back.q2 - c.q2) < 1e-10
    sp4 = SpaceParams(DIV, 3.0, 1.0)
    cases4 = [Chart("horospherical", 1.2, 0.8), Chart("degelliptic2", 0.7, 0.5),
              Chart("elliptic", 0.7, 0.9), Chart("uv", 0.6, -0.4)]
    for c in cases4:
        back = chart_transform(sp4, chart_transform(sp4, c, "uv"), c.name)
        assert abs(back.q1 - c.q1) < 1e-10 and abs(back.q2 - c.q2) < 1e-10


def test_transform_examples():
    sp = SpaceParams(DIII, 1.0, 1.0)
    c = chart_transform(sp, Chart("parabolic", 2.0, 1e-13), "uv")
    assert c.q1 == pytest.approx(0.0, abs=1e-12)
    c = chart_transform(sp, Chart("polar", 2.0, 0.0), "parabolic")
    assert (c.q1, c.q2) == (pytest.approx(2.0), pytest.approx(0.0))
    same = chart_transform(sp, Chart("polar", 1.5, 0.3), "polar")
    assert (same.q1, same.q2) == (1.5, 0.3)


def test_hyperbolic_transform_unsupported():
    sp = SpaceParams(DIII, 1.0, 1.0)
    with pytest.raises(UnsupportedError):
        chart_transform(sp, Chart("hyperbolic", 2.0, 1.0), "uv")
    assert chart_transform(sp, Chart("hyperbolic", 2.0, 1.0), "hyperbolic").q1 == 2.0


def test_scalar_invariance_across_charts():
    sp3 = SpaceParams(DIII, 1.3, 0.7)
    base = Chart("uv", 0.4, 0.9)
    ref = curvature_numeric(sp3, base)
    for other in ("parabolic", "elliptic"):
        c = chart_transform(sp3, base, other)
        assert abs(curvature_numeric(sp3, c, 1e-4) - ref) < 1e-5
    sp4 = SpaceParams(DIV, 3.0, 1.0)
    base = Chart("uv", 0.5, -0.3)
    ref = curvature_numeric(sp4, base)
    for other in ("horospherical", "degelliptic2", "elliptic"):
        c = chart_transform(sp4, base, other)
        assert abs(curvature_numeric(sp4, c, 1e-4) - ref) < 1e-5


def test_curvature_domain_errors():
    sp = SpaceParams(DIV, 3.0, 1.0)
    with pytest.raises(DomainError):
        curvature_numeric(sp, Chart("uv", 1e-5, 0.0))  # stencil leaves the domain
    with pytest.raises(DomainError):
        curvature_numeric(SpaceParams(DIII, 1, 1), Chart("polar", 1.0, 0.0))  # not conformal
