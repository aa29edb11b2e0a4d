"""The limiting boundary-value problem for the local geodesic environment.

Samples the maximizer (X, Y) of

    B(x) - R(x) + L(x, 0; y, 1) - B(y) - R(y)

over a truncated window, where B is a two-sided Brownian motion and R a
two-sided Bessel-3 process (both diffusion parameter 1, so their sum and
difference carry parameter 2), and L is the approximate landscape of a
fresh field.  X, Y are the endpoints of the limiting rescaled geodesic and
L(X, 0; Y, 1) its length; their moments give the variation constants
nu = E|Y - X|^(3/2) and mu = E|length|^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dp import NEG_INF, _point_profile, sweep_backward, sweep_forward
from .errors import ArgumentError
from .field import LppField, build_field, plan_grid
from .paths import sample_bessel3, sample_brownian
from .rng import Rng

_LANE_FIELD = 0
_LANE_BOUNDARY = 1


@dataclass
class LimitSample:
    """One draw of the truncated boundary maximization."""

    x: float
    y: float
    length: float
    objective: float
    window: float


@dataclass
class MomentEstimate:
    """Monte-Carlo moment with its standard error.

    Estimates merge associatively through (count, sum, sum of squares),
    which mean / std_error / n_samples determine exactly.
    """

    mean: float
    std_error: float
    n_samples: int
    exponent: float

    def __post_init__(self):
        if self.n_samples < 2:
            raise ArgumentError("need at least 2 samples")
        if self.std_error < 0:
            raise ArgumentError("std_error must be nonnegative")

    @classmethod
    def from_samples(cls, values, exponent: float) -> "MomentEstimate":
        v = np.asarray(values, dtype=float)
        if v.size < 2:
            raise ArgumentError("need at least 2 samples")
        return cls(
            mean=float(v.mean()),
            std_error=float(v.std(ddof=1) / math.sqrt(v.size)),
            n_samples=int(v.size),
            exponent=exponent,
        )

    def _moments(self):
        n = self.n_samples
        s = self.mean * n
        var = self.std_error**2 * n
        ss = var * (n - 1) + self.mean**2 * n
        return n, s, ss

    def merge(self, other: "MomentEstimate") -> "MomentEstimate":
        if self.exponent != other.exponent:
            raise ArgumentError("cannot merge estimates of different exponents")
        n1, s1, ss1 = self._moments()
        n2, s2, ss2 = other._moments()
        n, s, ss = n1 + n2, s1 + s2, ss1 + ss2
        mean = s / n
        var = max((ss - n * mean**2) / (n - 1), 0.0)
        return MomentEstimate(mean, math.sqrt(var / n), n, self.exponent)

    def ci95(self):
        half = 1.96 * self.std_error
        return self.mean - half, self.mean + half


def _symmetric_field(rng: Rng, n: int, window: float, delta: float, margin: float) -> LppField:
    """Field on a symmetric window [-w, w] whose grid contains 0 exactly."""
    d_actual, _, _ = plan_grid(n, -(window + margin), window + margin, delta)
    half_cells = math.ceil((window + margin) / d_actual - 1e-9)
    half = half_cells * d_actual
    return build_field(rng, n, -half, half, d_actual)


def _draw_ingredients(rng: Rng, n, window, delta, field_margin):
    field = _symmetric_field(rng.lane(_LANE_FIELD), n, window, delta, field_margin)
    xs = field.spatial_grid()
    brng = rng.lane(_LANE_BOUNDARY)
    b = sample_brownian(brng.replica(0), xs[0], field.delta, xs.size, 0.0, 1.0)
    r = sample_bessel3(brng.replica(1), xs[0], field.delta, xs.size)
    return field, xs, b.values, r.values


def _argmax_on_window(field, xs, b, r, window) -> LimitSample:
    inside = np.abs(xs) <= window + 1e-9
    h0 = np.where(inside, b - r, NEG_INF)
    g0 = np.where(inside, -b - r, NEG_INF)
    bonus = field.n * field.b_n
    shear = field.c_n * xs  # +c_n * (y - x) split into endpoint terms
    # P(x) = max_y [L(x,0;y,1) + g0(y)] for all x in one backward sweep
    X_term = np.full(field.n_nodes, NEG_INF)
    X_term[field.m_a :] = g0 + shear
    P = sweep_backward(field, field.n - 1, 0, X_term)[: field.m_w + 1] + bonus - shear
    xi = int(np.argmax(h0 + P))
    # profile from the chosen X picks Y
    F = (
        sweep_forward(field, 0, field.n - 1, _point_profile(field, xi))[field.m_a :]
        + bonus
        + (shear - shear[xi])
    )
    yi = int(np.argmax(F + g0))
    return LimitSample(
        x=float(xs[xi]),
        y=float(xs[yi]),
        length=float(F[yi]),
        objective=float(h0[xi] + F[yi] + g0[yi]),
        window=window,
    )


def sample_limit_environment(
    rng: Rng, n: int, window: float, delta: float, field_margin: float = 2.0
) -> LimitSample:
    """One replica of the truncated boundary maximization.

    The boundary processes are restricted to [-window, window] (bottom
    outside); the field extends ``field_margin`` beyond so near-edge
    geodesics are not pinched.  The grid argmax is exact, computed with one
    backward sweep (all x at once), then one forward sweep from the chosen
    X; ties break leftmost in x, then in y.
    """
    if window <= 0:
        raise ArgumentError("window must be positive")
    field, xs, b, r = _draw_ingredients(rng, n, window, delta, field_margin)
    return _argmax_on_window(field, xs, b, r, window)


def _limit_replica(rng: Rng, params: tuple, i: int):
    n, window, delta, margin = params
    s = sample_limit_environment(rng.replica(i), n, window, delta, margin)
    return np.array([s.x, s.y, s.length])


def collect_limit_samples(
    rng: Rng, n, window, delta, n_samples, field_margin=2.0, workers: int = 1
) -> np.ndarray:
    """(n_samples, 3) array of (X, Y, length) replica draws."""
    from functools import partial

    from .runner import run_replicas

    fn = partial(_limit_replica, rng, (n, window, delta, field_margin))
    return np.stack(run_replicas(fn, n_samples, workers))


def truncation_stability(
    rng: Rng, n, delta, windows, n_samples, field_margin=2.0
):
    """Fraction of replicas whose (X, Y) change when the truncation window
    grows, with field and boundary processes coupled across windows (all are
    drawn once on the largest window)."""
    windows = sorted(windows)
    changed = np.zeros(len(windows) - 1)
    for i in range(n_samples):
        field, xs, b, r = _draw_ingredients(
            rng.replica(i), n, windows[-1], delta, field_margin
        )
        picks = [
            (s.x, s.y)
            for s in (_argmax_on_window(field, xs, b, r, w) for w in windows)
        ]
        for j in range(len(windows) - 1):
            changed[j] += picks[j] != picks[j + 1]
    return {
        "windows": windows,
        "changed_fraction": (changed / n_samples).tolist(),
    }


def _replica_samples(rng: Rng, n, window, delta, n_samples, field_margin=2.0):
    return collect_limit_samples(rng, n, window, delta, n_samples, field_margin)


def estimate_nu(rng: Rng, n: int, window: float, delta: float, n_samples: int) -> MomentEstimate:
    """Monte-Carlo estimate of nu = E|Y - X|^(3/2)."""
    if n_samples < 2:
        raise ArgumentError("need at least 2 samples")
    xyl = _replica_samples(rng, n, window, delta, n_samples)
    return MomentEstimate.from_samples(np.abs(xyl[:, 1] - xyl[:, 0]) ** 1.5, 1.5)


def estimate_mu(rng: Rng, n: int, window: float, delta: float, n_samples: int) -> MomentEstimate:
    """Monte-Carlo estimate of mu = E|length|^3."""
    if n_samples < 2:
        raise ArgumentError("need at least 2 samples")
    xyl = _replica_samples(rng, n, window, delta, n_samples)
    return MomentEstimate.from_samples(np.abs(xyl[:, 2]) ** 3, 3.0)


def tail_samples_boundary_argmax(
    rng: Rng, n: int, window: float, delta: float, n_samples: int
):
    """Raw |X|, |Y - X|, |length| arrays for downstream tail fitting."""
    if n_samples < 1:
        raise ArgumentError("need at least 1 sample")
    xyl = _replica_samples(rng, n, window, delta, n_samples)
    return (
        np.abs(xyl[:, 0]),
        np.abs(xyl[:, 1] - xyl[:, 0]),
        np.abs(xyl[:, 2]),
    )
