import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpzlab import (
    ArgumentError,
    RangeError,
    Rng,
    SampledPath,
    build_field,
    holder_statistic,
    rescale_environment,
    sample_brownian,
    variation,
    weight_function,
)
from kpzlab.landscape import LandscapeQuery, geodesic_between, landscape_approx


@pytest.fixture(scope="module")
def field():
    return build_field(Rng(202), 32, -3.0, 3.0, 1.0 / 24)


@pytest.fixture(scope="module")
def geo(field):
    return geodesic_between(field, 0.0, 0.0, 0.0, 1.0)


def test_weight_endpoints_and_additivity(field, geo):
    w = weight_function(field, geo)
    assert w.values[0] == 0.0
    assert w.values[-1] == pytest.approx(geo.value, abs=1e-12)
    gen = np.random.default_rng(4)
    for _ in range(20):
        cuts = np.sort(gen.choice(np.arange(1, w.n_points - 1), size=4, replace=False))
        idx = np.concatenate(([0], cuts, [w.n_points - 1]))
        assert np.sum(np.diff(w.values[idx])) == pytest.approx(geo.value, abs=1e-9)
    other = build_field(Rng(203), 32, -3.0, 3.0, 1.0 / 24)
    with pytest.raises(ArgumentError):
        weight_function(other, geo)


# -- variation ---------------------------------------------------------------


def test_variation_examples():
    m = 10
    f = SampledPath(0.0, 1.0 / (4 * m), np.linspace(0.0, 1.0, 4 * m + 1))
    assert variation(f, 1.0, 1.0 / m) == pytest.approx(1.0, abs=1e-12)
    assert variation(f, 2.0, 1.0 / m) == pytest.approx(1.0 / m, abs=1e-12)
    const = SampledPath(0.0, 0.1, np.full(11, 3.7))
    for alpha in (0.5, 1.0, 1.5, 2.0):
        assert variation(const, alpha, 0.2) == 0.0


def test_variation_errors():
    f = SampledPath(0.0, 0.1, np.arange(11.0))
    with pytest.raises(ArgumentError):
        variation(f, 1.0, 0.05)  # eps below grid step
    with pytest.raises(ArgumentError):
        variation(f, 1.0, 0.25)  # not an integer multiple
    with pytest.raises(ArgumentError):
        variation(f, -1.0, 0.2)


def test_variation_absolute_lattice():
    # u ranges over multiples of eps (the absolute lattice), not offsets of
    # t0: here u in [0.5, 1.0] picks {0.6, 0.8, 1.0}, three increments of 2
    f = SampledPath(0.3, 0.1, np.arange(8.0))
    assert variation(f, 1.0, 0.2) == pytest.approx(6.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-5.0, 5.0).filter(lambda c: abs(c) > 1e-3),
    st.floats(0.5, 3.0),
    st.integers(1, 5),
)
def test_variation_scaling_identity(c, alpha, m):
    gen = np.random.default_rng(12)
    f = SampledPath(0.0, 0.05, gen.normal(size=41))
    scaled = SampledPath(0.0, 0.05, c * f.values)
    v1 = variation(scaled, alpha, m * 0.05)
    v2 = abs(c) ** alpha * variation(f, alpha, m * 0.05)
    assert v1 == pytest.approx(v2, rel=1e-12)


def test_variation_subinterval_monotone():
    gen = np.random.default_rng(13)
    f = SampledPath(0.0, 1.0 / 64, gen.normal(size=65).cumsum())
    inner = f.restrict(0.25, 0.75)
    for alpha in (1.0, 1.5, 3.0):
        assert variation(inner, alpha, 1.0 / 16) <= variation(f, alpha, 1.0 / 16) + 1e-12


def test_quadratic_variation_of_brownian():
    # V_2 over [0,1] within 10% of sigma^2 for eps in [10 dt, 100 dt]
    dt = 1.0 / 1000
    sigma2 = 2.0
    for eps_mult in (10, 100):
        vals = [
            variation(
                sample_brownian(Rng(77).replica(i), 0.0, dt, 1001, 0.0, sigma2),
                2.0,
                eps_mult * dt,
            )
            for i in range(1000)
        ]
        assert abs(np.mean(vals) / sigma2 - 1.0) < 0.10


# -- Hoelder statistic -------------------------------------------------------


def test_holder_examples():
    const = SampledPath(0.0, 0.1, np.full(11, 2.0))
    assert holder_statistic(const, 2.0 / 3.0) == 0.0
    lin = SampledPath(0.0, 1.0 / 32, np.linspace(0.0, 1.0, 33))
    assert holder_statistic(lin, 2.0 / 3.0) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ArgumentError):
        holder_statistic(SampledPath(0.0, 0.1, np.array([1.0])), 0.5)


def test_holder_refinement_monotone():
    gen = np.random.default_rng(5)
    vals = gen.normal(size=129).cumsum()
    fine = SampledPath(0.0, 1.0 / 128, vals)
    coarse = SampledPath(0.0, 1.0 / 32, vals[::4])
    for lp in (0.0, 1.0 / 3.0):
        assert holder_statistic(coarse, 2 / 3, lp) <= holder_statistic(fine, 2 / 3, lp) + 1e-12


def test_holder_pruned_equals_bruteforce():
    gen = np.random.default_rng(6)
    vals = gen.normal(size=5001).cumsum()  # size > 4096 turns pruning on
    f = SampledPath(0.0, 1.0 / 5000, vals)
    got = holder_statistic(f, 0.5, 0.0)
    sub = SampledPath(0.0, 1.0 / 500, vals[::10])  # brute force on the subgrid
    best = 0.0
    v, dt = sub.values, sub.dt
    for lag in range(1, v.size):
        d = np.abs(v[lag:] - v[:-lag]).max()
        best = max(best, d / (lag * dt) ** 0.5)
    assert got >= best - 1e-12


# -- environment rescaling ---------------------------------------------------


def test_rescale_environment_contract(field, geo):
    eps = (8 / field.n) ** (1 / 3)  # 8-line window
    env = rescale_environment(field, geo, 0.375, eps)
    assert env.F.at(0.0) == 0.0
    assert env.G.at(0.0) == 0.0
    assert env.W_eps.values[0] == 0.0
    assert env.pi_eps.t0 == 0.0
    assert env.pi_eps.t_end == pytest.approx(1.0)
    # argmax property: F + G <= 0 everywhere on the grid
    assert np.all(env.F.values + env.G.values <= 1e-9)
    # pi_eps(0) consistent with the recentering location
    pi_r = geo.path.at(0.375)
    assert env.pi_eps.values[0] == pytest.approx((pi_r - env.x_eps) / eps**2, abs=1e-9)
    # the rescaled landscape view agrees with a direct query
    direct = landscape_approx(
        field, LandscapeQuery(env.x_eps, 0.375, env.x_eps, 0.375 + eps**3)
    )
    assert env.L_eps(0.0, 0.0, 0.0, 1.0) == pytest.approx(direct / eps, abs=1e-12)


def test_rescale_environment_errors(field, geo):
    with pytest.raises(RangeError):
        rescale_environment(field, geo, 0.0, (8 / field.n) ** (1 / 3))
    with pytest.raises(ArgumentError):
        rescale_environment(field, geo, 0.375, (0.5 / field.n) ** (1 / 3))
    with pytest.raises(ArgumentError):
        rescale_environment(field, geo, 0.3751, (8 / field.n) ** (1 / 3))
