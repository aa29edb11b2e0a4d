"""Geodesic observables: weight functions, variation at scale, local
environment rescaling, overlap, and Hoelder-ratio statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dp import Geodesic, _point_profile, _prefix_sums, sweep_backward, sweep_forward
from .errors import ArgumentError, RangeError
from .field import LppField
from .landscape import LandscapeQuery, landscape_approx
from .paths import SampledPath

_TOL = 1e-9


def weight_function(field: LppField, g: Geodesic) -> SampledPath:
    """Running passage value along the geodesic, as a function of time.

    W(start time) = 0 and W(end time) = g.value; interior values accumulate
    the per-line increment sums plus the per-line bonus, so increments of W
    over any partition add up to the total exactly.
    """
    if g.field is not field:
        raise ArgumentError("geodesic does not belong to this field")
    rows = np.arange(g.line_lo - 1, g.line_hi)
    entries_g = np.concatenate(([g.entry_node], g.exit_nodes[:-1]))
    w = np.empty(g.n_lines + 1)
    w[0] = 0.0
    acc = 0.0
    for i, r in enumerate(rows):
        S = _prefix_sums(field.increments[r])
        lo = int(entries_g[i] - r * field.m_a)
        hi = int(g.exit_nodes[i] - r * field.m_a)
        acc += S[hi] - S[lo]
        w[i + 1] = (
            acc
            + (i + 1) * g.bonus_per_line
            + g.tilt * (g.breakpoints[i + 1] - g.breakpoints[0])
        )
    return SampledPath(g.path.t0, g.path.dt, w)


def variation(f: SampledPath, alpha: float, eps: float) -> float:
    """Sum of |f(u) - f(u - eps)|^alpha over u in [t0 + eps, t_end]
    intersected with the absolute lattice eps * Z.

    eps must be a whole multiple of the grid step, and the grid must sit on
    the lattice; values are then exactly the defining sums on the available
    grid, with no interpolation.
    """
    if alpha <= 0:
        raise ArgumentError("alpha must be positive")
    if eps < f.dt - _TOL:
        raise ArgumentError("eps must be at least the grid step")
    m = round(eps / f.dt)
    if abs(eps - m * f.dt) > 1e-6 * f.dt:
        raise ArgumentError("eps must be an integer multiple of the grid step")
    r0 = round(f.t0 / f.dt)
    if abs(f.t0 - r0 * f.dt) > 1e-6 * f.dt:
        raise ArgumentError("path grid is not aligned with the eps lattice")
    npts = f.n_points
    # u = i * eps  <->  grid index i * m - r0
    i_lo = -(-(r0 + m) // m)  # ceil((t0 + eps) / eps) in index units
    i_hi = (r0 + npts - 1) // m
    if i_hi < i_lo:
        return 0.0
    idx = np.arange(i_lo, i_hi + 1) * m - r0
    diffs = f.values[idx] - f.values[idx - m]
    return float(np.sum(np.abs(diffs) ** alpha))


def holder_statistic(f: SampledPath, exponent: float, log_power: float = 0.0) -> float:
    """sup over grid pairs s != t of
    |f(t) - f(s)| / (|t-s|^exponent * log^log_power(2 / |t-s|)).

    Exact over all O(m^2) pairs for paths up to 4096 points; beyond that,
    lags whose coarse oscillation bound cannot beat the running sup are
    skipped (the result is still the exact supremum).
    """
    if exponent <= 0:
        raise ArgumentError("exponent must be positive")
    v = f.values
    if v.size < 2:
        raise ArgumentError("path needs at least 2 points")
    prune = v.size > 4096
    osc = float(v.max() - v.min())
    best = 0.0
    for lag in range(1, v.size):
        gap = lag * f.dt
        denom = gap**exponent
        if log_power:
            denom *= np.log(2.0 / gap) ** log_power
        if prune and osc / denom <= best:
            continue
        d = np.abs(v[lag:] - v[:-lag]).max()
        best = max(best, float(d / denom))
    return best


@dataclass
class OverlapResult:
    """Agreement set of two geodesics, as line indices."""

    lines: np.ndarray
    contiguous: bool

    def __len__(self):
        return self.lines.size


def overlap(g1: Geodesic, g2: Geodesic) -> OverlapResult:
    """Lines on which two geodesics of the same field occupy the same
    staircase segment, and whether that set is one contiguous interval."""
    if g1.field is not g2.field:
        raise ArgumentError("geodesics come from different fields")
    lo = max(g1.line_lo, g2.line_lo)
    hi = min(g1.line_hi, g2.line_hi)
    if hi < lo:
        raise ArgumentError("geodesics share no line range")
    e1 = g1.exit_nodes[lo - g1.line_lo : hi - g1.line_lo + 1]
    e2 = g2.exit_nodes[lo - g2.line_lo : hi - g2.line_lo + 1]
    in1 = np.concatenate(([g1.entry_node], e1[:-1])) if lo == g1.line_lo else \
        g1.exit_nodes[lo - g1.line_lo - 1 : hi - g1.line_lo]
    in2 = np.concatenate(([g2.entry_node], e2[:-1])) if lo == g2.line_lo else \
        g2.exit_nodes[lo - g2.line_lo - 1 : hi - g2.line_lo]
    agree = (e1 == e2) & (in1 == in2)
    lines = np.arange(lo, hi + 1)[agree]
    contiguous = lines.size == 0 or bool(np.all(np.diff(lines) == 1))
    return OverlapResult(lines=lines, contiguous=contiguous)


class RescaledLandscape:
    """Landscape restricted to the rescaled window around (X, r): maps
    (z, s'; y, t') with 0 <= s' < t' <= 1 through the 1-2-3 dictionary."""

    def __init__(self, field: LppField, x_center: float, r: float, eps: float):
        self.field = field
        self.x_center = x_center
        self.r = r
        self.eps = eps

    def __call__(self, z: float, s: float, y: float, t: float) -> float:
        e = self.eps
        q = LandscapeQuery(
            self.x_center + e * e * z,
            self.r + e**3 * s,
            self.x_center + e * e * y,
            self.r + e**3 * t,
        )
        return landscape_approx(self.field, q) / e


@dataclass
class EnvironmentQuintuple:
    """Rescaled environment around an interior geodesic point.

    F and G are the rescaled evolved initial/final conditions centered at
    the recentering location X_eps (both are 0 at z = 0); pi_eps and W_eps
    are the rescaled geodesic and weight increments on [0, 1]; L_eps is the
    rescaled landscape restricted to the window.
    """

    x_eps: float
    F: SampledPath
    G: SampledPath
    L_eps: RescaledLandscape
    pi_eps: SampledPath
    W_eps: SampledPath
    eps: float


def rescale_environment(
    field: LppField, g: Geodesic, r: float, eps: float
) -> EnvironmentQuintuple:
    """Environment around (g, r) at scale eps.

    X_eps is the grid argmax of L(p; x, r) + L(x, r + eps^3; q) over the
    window (p, q the geodesic's endpoints; two profile sweeps; leftmost
    ties).  F, G, pi_eps and W_eps are recentered at X_eps and rescaled by
    the 1-2-3 dictionary: space / eps^2, time / eps^3, values / eps.

    r must lie on the line grid and eps^3 must be a whole number of line
    spacings, with [r, r + eps^3] strictly inside the geodesic's time span.
    """
    if g.field is not field:
        raise ArgumentError("geodesic does not belong to this field")
    n = field.n
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    k_lines = round(eps**3 * n)
    if k_lines < 1 or abs(eps**3 * n - k_lines) > 1e-6:
        raise ArgumentError("eps^3 must be a whole number of line spacings (>= 1)")
    l_r = round(r * n)
    if abs(r * n - l_r) > 1e-6:
        raise ArgumentError("r must lie on the line-time grid")
    l_hi = l_r + k_lines
    l0, l1 = g.line_lo - 1, g.line_hi
    if not (l0 < l_r and l_hi < l1):
        raise RangeError("[r, r + eps^3] must be strictly inside the geodesic span")

    # forward profile to the exits of line l_r, backward to entries of l_hi+1
    fwd = sweep_forward(
        field, l0, l_r - 1, _point_profile(field, field.local_node(g.entry_node, l0 + 1))
    )
    end_local = field.local_node(int(g.exit_nodes[-1]), l1)
    bwd = sweep_backward(field, l1 - 1, l_hi, _point_profile(field, end_local))
    xs = field.spatial_grid()
    f_prof = (
        fwd[field.m_a :]
        + (l_r - l0) * g.bonus_per_line
        + g.tilt * (xs - g.breakpoints[0])
    )
    g_prof = (
        bwd[: field.m_w + 1]
        + (l1 - l_hi) * g.bonus_per_line
        + g.tilt * (g.breakpoints[-1] - xs)
    )
    # both profiles are finite on one contiguous stretch (the intersection
    # of the forward and backward reachability cones); F and G live there
    finite = np.isfinite(f_prof) & np.isfinite(g_prof)
    if not np.any(finite):
        raise RangeError("window after rescaling exits the field")
    k_lo = int(np.argmax(finite))
    k_hi = int(len(finite) - np.argmax(finite[::-1]) - 1)
    f_prof = f_prof[k_lo : k_hi + 1]
    g_prof = g_prof[k_lo : k_hi + 1]
    xi = int(np.argmax(f_prof + g_prof))
    x_eps = field.x_min + (k_lo + xi) * field.delta

    e2, e3 = eps * eps, eps**3
    z0 = (field.x_min + k_lo * field.delta - x_eps) / e2
    F = SampledPath(z0, field.delta / e2, (f_prof - f_prof[xi]) / eps)
    G = SampledPath(z0, field.delta / e2, (g_prof - g_prof[xi]) / eps)

    bp = g.breakpoints[l_r - l0 : l_hi - l0 + 1]
    pi_eps = SampledPath(0.0, 1.0 / k_lines, (bp - x_eps) / e2)
    w = weight_function(field, g)
    w_slice = w.values[l_r - l0 : l_hi - l0 + 1]
    W_eps = SampledPath(0.0, 1.0 / k_lines, (w_slice - w_slice[0]) / eps)
    L_eps = RescaledLandscape(field, x_eps, l_r / n, eps)
    return EnvironmentQuintuple(
        x_eps=x_eps, F=F, G=G, L_eps=L_eps, pi_eps=pi_eps, W_eps=W_eps, eps=eps
    )
