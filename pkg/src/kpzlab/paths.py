"""Seeded samplers for boundary and reference processes.

Brownian motion with drift and diffusion, Brownian bridge, the Bessel-3
process (norm of a 3-d Brownian motion), and the importance weight relating
the Brownian meander law to the Bessel-3 law on [0, 1].

Two-sided processes are realized as two independent one-sided paths glued at
the anchor time 0, where the path value is exactly 0.  All sampling is on
uniform grids; downstream consumers never need anything finer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .rng import Rng

_TOL = 1e-9


@dataclass
class SampledPath:
    """A real-valued function on a uniform grid: values[k] is the value at
    t0 + k*dt."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.dt <= 0:
            raise ArgumentError("dt must be positive")
        if self.values.ndim != 1 or self.values.size < 1:
            raise ArgumentError("values must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.values)):
            raise ArgumentError("path values must be finite")

    @property
    def n_points(self) -> int:
        return self.values.size

    @property
    def t_end(self) -> float:
        return self.t0 + (self.values.size - 1) * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def index_of(self, t: float) -> int:
        """Grid index of time t; t must lie on the grid up to rounding."""
        k = (t - self.t0) / self.dt
        ki = int(round(k))
        if abs(k - ki) > 1e-6 or not 0 <= ki < self.values.size:
            raise ArgumentError(f"time {t} is not on the path grid")
        return ki

    def at(self, t: float) -> float:
        return float(self.values[self.index_of(t)])

    def restrict(self, t_lo: float, t_hi: float) -> "SampledPath":
        """Sub-path on [t_lo, t_hi]; both ends must be grid times."""
        i, j = self.index_of(t_lo), self.index_of(t_hi)
        if j < i:
            raise ArgumentError("empty restriction")
        return SampledPath(self.t0 + i * self.dt, self.dt, self.values[i : j + 1].copy())


def _anchored_gaussian_walk(gen, t0, dt, n, mean_step, sd_step, dims=1):
    """Walk on t0 + k*dt anchored to 0 at time 0.

    Grid points right of 0 are filled by a forward walk, points left of 0 by
    an independent forward walk in reverse time (negated increments so the
    anchor value is exactly 0).  If 0 is off-grid the nearest grid point
    anchors an initial increment covering the gap.
    """
    t_end = t0 + (n - 1) * dt
    out = np.zeros((dims, n))
    # index of the grid point closest to time 0, clipped to the grid
    i0 = min(max(int(round(-t0 / dt)), 0), n - 1)
    gap = abs(t0 + i0 * dt)
    n_right = n - 1 - i0
    if n_right > 0:
        steps = gen.normal(mean_step, sd_step, size=(dims, n_right))
        out[:, i0 + 1 :] = np.cumsum(steps, axis=1)
    if i0 > 0:
        steps = gen.normal(mean_step, sd_step, size=(dims, i0))
        # B(t - dt) = B(t) - increment; accumulate leftwards
        out[:, :i0] = -np.cumsum(steps, axis=1)[:, ::-1]
    if gap > _TOL * max(1.0, dt):
        # anchor off-grid: bridge the gap with one increment of the right law
        sd_gap = sd_step * math.sqrt(gap / dt)
        sign = 1.0 if t0 + i0 * dt > 0 else -1.0
        out += sign * (mean_step * gap / dt + gen.normal(0.0, 1.0, size=(dims, 1)) * sd_gap)
    return out


def sample_brownian(
    rng: Rng, t0: float, dt: float, n: int, drift: float = 0.0, diffusion: float = 1.0
) -> SampledPath:
    """Two-sided Brownian motion with the given drift and variance per unit
    time, anchored to value 0 at time 0.

    Increments between consecutive grid points are independent Gaussians with
    mean drift*dt and variance diffusion*dt.
    """
    if dt <= 0 or n < 1:
        raise ArgumentError("dt must be positive and n >= 1")
    if diffusion < 0:
        raise ArgumentError("diffusion must be nonnegative")
    gen = rng.generator()
    walk = _anchored_gaussian_walk(
        gen, t0, dt, n, drift * dt, math.sqrt(diffusion * dt)
    )
    return SampledPath(t0, dt, walk[0])


def sample_bessel3(rng: Rng, t0: float, dt: float, n: int) -> SampledPath:
    """Two-sided Bessel-3 process: Euclidean norm of a standard 3-d Brownian
    motion.  Nonnegative everywhere, exactly 0 at the anchor time 0."""
    if dt <= 0 or n < 1:
        raise ArgumentError("dt must be positive and n >= 1")
    gen = rng.generator()
    walk = _anchored_gaussian_walk(gen, t0, dt, n, 0.0, math.sqrt(dt), dims=3)
    return SampledPath(t0, dt, np.linalg.norm(walk, axis=0))


def sample_brownian_bridge(rng: Rng, dt: float, n: int, diffusion: float) -> SampledPath:
    """Brownian bridge on [0, 1] pinned to 0 at both ends; n*dt must equal 1
    up to rounding, and the path has n+1 points."""
    if dt <= 0 or n < 1:
        raise ArgumentError("dt must be positive and n >= 1")
    if abs(n * dt - 1.0) > 1e-6:
        raise ArgumentError("bridge grid must cover [0, 1]: n*dt must equal 1")
    if diffusion <= 0:
        raise ArgumentError("diffusion must be positive")
    free = sample_brownian(rng, 0.0, dt, n + 1, 0.0, diffusion)
    t = free.times()
    pinned = free.values - t * free.values[-1]
    pinned[-1] = 0.0
    return SampledPath(0.0, dt, pinned)


def meander_weight(bessel_path: SampledPath) -> float:
    """Importance weight of the Brownian meander law against the Bessel-3 law
    on [0, 1]: sqrt(pi/2) / R(1).

    The path must cover time 1 with a positive value there; under the
    Bessel-3 law these weights average to 1.
    """
    try:
        r1 = bessel_path.at(1.0)
    except ArgumentError as exc:
        raise ArgumentError("path does not cover time 1") from exc
    if r1 <= 0.0:
        raise ArgumentError("R(1) must be positive")
    return math.sqrt(math.pi / 2.0) / r1
