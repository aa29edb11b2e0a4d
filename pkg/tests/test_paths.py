import math

import numpy as np
import pytest

from kpzlab import (
    ArgumentError,
    Rng,
    SampledPath,
    meander_weight,
    sample_bessel3,
    sample_brownian,
    sample_brownian_bridge,
)
from kpzlab.stats import two_sample_distance


def test_sampled_path_validation():
    with pytest.raises(ArgumentError):
        SampledPath(0.0, -1.0, np.zeros(3))
    with pytest.raises(ArgumentError):
        SampledPath(0.0, 0.1, np.array([]))
    with pytest.raises(ArgumentError):
        SampledPath(0.0, 0.1, np.array([1.0, np.nan]))
    p = SampledPath(0.0, 0.5, np.array([0.0, 1.0, 2.0]))
    assert p.t_end == 1.0
    assert p.at(0.5) == 1.0
    with pytest.raises(ArgumentError):
        p.at(0.3)


def test_brownian_anchor_and_single_point():
    p = sample_brownian(Rng(5), 0.0, 0.1, 1)
    assert p.values.tolist() == [0.0]
    q = sample_brownian(Rng(5), -0.5, 0.1, 11)
    assert q.at(0.0) == 0.0
    assert np.any(q.values[:5] != 0.0)


def test_brownian_determinism():
    a = sample_brownian(Rng(9, 3), -1.0, 0.01, 201, drift=1.0, diffusion=2.0)
    b = sample_brownian(Rng(9, 3), -1.0, 0.01, 201, drift=1.0, diffusion=2.0)
    assert np.array_equal(a.values, b.values)
    c = sample_brownian(Rng(9, 4), -1.0, 0.01, 201, drift=1.0, diffusion=2.0)
    assert not np.array_equal(a.values, c.values)


def test_brownian_drift_mean():
    # value at t=1 with drift -2, diffusion 2, over 10^4 replicas
    vals = np.array(
        [
            sample_brownian(Rng(11).replica(i), 0.0, 0.25, 5, drift=-2.0, diffusion=2.0).at(1.0)
            for i in range(10_000)
        ]
    )
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() + 2.0) < 3 * se


def test_brownian_increment_moments():
    # 10^5 increments: |mean| < 4 SE and relative variance error < 5%
    p = sample_brownian(Rng(13), 0.0, 0.01, 100_001, drift=0.0, diffusion=2.0)
    inc = np.diff(p.values)
    theory_var = 2.0 * 0.01
    se = math.sqrt(theory_var / inc.size)
    assert abs(inc.mean()) < 4 * se
    assert abs(inc.var() / theory_var - 1) < 0.05


def test_brownian_scaling_invariance():
    # sigma * B(t / sigma^2) has the same increment law as B
    sigma2 = 4.0
    n = 10_000
    base = sample_brownian(Rng(17).replica(0), 0.0, 0.01, n + 1)
    scaled = sample_brownian(Rng(17).replica(1), 0.0, 0.01 / sigma2, n + 1)
    inc_a = np.diff(base.values)
    inc_b = math.sqrt(sigma2) * np.diff(scaled.values)
    stat, thr = two_sample_distance(inc_a, inc_b, level=0.01)
    assert stat < thr


def test_brownian_argument_errors():
    with pytest.raises(ArgumentError):
        sample_brownian(Rng(1), 0.0, 0.0, 5)
    with pytest.raises(ArgumentError):
        sample_brownian(Rng(1), 0.0, 0.1, 0)
    with pytest.raises(ArgumentError):
        sample_brownian(Rng(1), 0.0, 0.1, 5, diffusion=-1.0)


def test_bessel3_properties():
    p = sample_bessel3(Rng(3), -1.0, 0.125, 17)
    assert p.at(0.0) == 0.0
    assert np.all(p.values >= 0.0)
    r1sq = np.array(
        [sample_bessel3(Rng(29).replica(i), 0.0, 0.5, 3).at(1.0) ** 2 for i in range(10_000)]
    )
    se = r1sq.std(ddof=1) / math.sqrt(r1sq.size)
    assert abs(r1sq.mean() - 3.0) < 3 * se


def test_bridge_pinning_and_moments():
    n = 64
    p = sample_brownian_bridge(Rng(7), 1.0 / n, n, 1.0)
    assert p.values[0] == 0.0 and p.values[n] == 0.0
    mids = np.array(
        [
            sample_brownian_bridge(Rng(31).replica(i), 1.0 / 16, 16, 1.0).at(0.5)
            for i in range(10_000)
        ]
    )
    se = mids.std(ddof=1) / math.sqrt(mids.size)
    assert abs(mids.mean()) < 3 * se
    # Var B_bridge(1/2) = t(1-t) = 1/4
    var = mids.var(ddof=1)
    se_var = var * math.sqrt(2.0 / (mids.size - 1))
    assert abs(var - 0.25) < 3 * se_var
    with pytest.raises(ArgumentError):
        sample_brownian_bridge(Rng(1), 0.1, 5, 1.0)  # n*dt != 1


def test_meander_weight_values():
    path = SampledPath(0.0, 0.5, np.array([0.0, 0.7, 1.0]))
    assert meander_weight(path) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-12)
    path2 = SampledPath(0.0, 0.5, np.array([0.0, 0.7, 2.0]))
    assert meander_weight(path2) == pytest.approx(math.sqrt(math.pi / 2) / 2, abs=1e-12)
    with pytest.raises(ArgumentError):
        meander_weight(SampledPath(0.0, 0.1, np.array([0.0, 0.5])))  # no time 1


def test_meander_weight_normalization():
    w = np.array(
        [meander_weight(sample_bessel3(Rng(37).replica(i), 0.0, 0.2, 6)) for i in range(10_000)]
    )
    se = w.std(ddof=1) / math.sqrt(w.size)
    assert abs(w.mean() - 1.0) < 3 * se
