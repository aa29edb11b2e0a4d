"""Rescaled landscape queries on top of the raw grid DP.

A space-time query (x, s; y, t) maps onto the grid through the affine
dictionary: time r uses the lines ``floor(s*n) + 1 .. floor(t*n)``, spatial
position z at time index l sits at unrolled node ``l * m_a +
round((z - x_min) / delta)``, and each line crossed contributes the
centering bonus b_n on top of the raw staircase sum.

Metric composition and the reverse triangle inequality hold exactly (to
float round-off) at every grid triple because they are restrictions of one
dynamic program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dp import (
    Geodesic,
    NEG_INF,
    _point_profile,
    extract_geodesic,
    sweep_backward,
    sweep_forward,
)
from .errors import ArgumentError, RangeError
from .field import LppField

_IDX_TOL = 1e-9


@dataclass(frozen=True)
class LandscapeQuery:
    """Rescaled coordinates (x, s; y, t) with s < t."""

    x: float
    s: float
    y: float
    t: float

    def __post_init__(self):
        if not self.s < self.t:
            raise ArgumentError("need s < t")


def time_index(field: LppField, t: float) -> int:
    """Line index floor(t * n) under the adopted time convention."""
    idx = int(np.floor(t * field.n + _IDX_TOL))
    if not 0 <= idx <= field.n:
        raise RangeError(f"time {t} outside the field's [0, 1] span")
    return idx


def space_node(field: LppField, z: float, line_index: int) -> int:
    """Unrolled node of spatial position z at the given time index; z snaps
    to the nearest grid point and must lie inside the window."""
    if not field.x_min - _IDX_TOL <= z <= field.x_max + _IDX_TOL:
        raise RangeError(f"position {z} outside window [{field.x_min}, {field.x_max}]")
    k = int(round((z - field.x_min) / field.delta))
    k = min(max(k, 0), field.m_w)
    return line_index * field.m_a + k


def _query_nodes(field: LppField, q: LandscapeQuery):
    l0 = time_index(field, q.s)
    l1 = time_index(field, q.t)
    if l1 <= l0:
        raise RangeError(
            f"query spans no line: [{q.s}, {q.t}] maps to indices [{l0}, {l1}]"
        )
    g0 = space_node(field, q.x, l0)
    g1 = space_node(field, q.y, l1)
    return l0, l1, g0, g1


def landscape_approx(field: LppField, q: LandscapeQuery) -> float:
    """Approximate directed-landscape value at q: raw passage value over the
    mapped staircase, plus one bonus b_n per line crossed, plus the grid
    shear correction c_n * (y - x) (both gauge terms telescope through
    composition)."""
    l0, l1, g0, g1 = _query_nodes(field, q)
    E = sweep_forward(field, l0, l1 - 1, _point_profile(field, field.local_node(g0, l0 + 1)))
    v = E[field.local_node(g1, l1)]
    if v == NEG_INF:
        raise RangeError("query endpoints not connected inside the window")
    x_snap = field.x_min + (g0 - l0 * field.m_a) * field.delta
    y_snap = field.x_min + (g1 - l1 * field.m_a) * field.delta
    return float(v) + (l1 - l0) * field.b_n + field.c_n * (y_snap - x_snap)


def landscape_profile(field: LppField, x: float, s: float, t: float) -> np.ndarray:
    """landscape_approx(x, s; ., t) over the whole spatial grid in one sweep;
    entry i corresponds to position x_min + i * delta."""
    l0 = time_index(field, s)
    l1 = time_index(field, t)
    if l1 <= l0:
        raise RangeError("query spans no line")
    g0 = space_node(field, x, l0)
    E = sweep_forward(field, l0, l1 - 1, _point_profile(field, field.local_node(g0, l0 + 1)))
    x_snap = field.x_min + (g0 - l0 * field.m_a) * field.delta
    gauge = field.b_n * (l1 - l0) + field.c_n * (field.spatial_grid() - x_snap)
    return E[field.m_a :] + gauge


def landscape_profile_to(field: LppField, s: float, y: float, t: float) -> np.ndarray:
    """landscape_approx(., s; y, t) over the spatial grid via one backward
    sweep; entry i corresponds to position x_min + i * delta."""
    l0 = time_index(field, s)
    l1 = time_index(field, t)
    if l1 <= l0:
        raise RangeError("query spans no line")
    g1 = space_node(field, y, l1)
    X = _point_profile(field, field.local_node(g1, l1))
    Y = sweep_backward(field, l1 - 1, l0, X)
    y_snap = field.x_min + (g1 - l1 * field.m_a) * field.delta
    gauge = field.b_n * (l1 - l0) + field.c_n * (y_snap - field.spatial_grid())
    return Y[: field.m_w + 1] + gauge


def geodesic_between(
    field: LppField, x: float, s: float, y: float, t: float, tie_break: str = "leftmost"
) -> Geodesic:
    """Maximizing staircase for the query (x, s; y, t); its value is the
    landscape value (bonus included) and its path is time-parametrized on
    [floor(s*n)/n, floor(t*n)/n]."""
    l0, l1, g0, g1 = _query_nodes(field, LandscapeQuery(x, s, y, t))
    return extract_geodesic(
        field,
        (g0, l0 + 1),
        (g1, l1),
        tie_break=tie_break,
        bonus_per_line=field.b_n,
        tilt=field.c_n,
    )


def kpz_evolve(field: LppField, h0: np.ndarray, s: float, t: float) -> np.ndarray:
    """Max-plus evolution of an initial condition on the spatial grid:
    h_t(y) = max_x (h0(x) + L(x, s; y, t)).

    ``h0[i]`` is the value at x_min + i * delta, with -inf marking bottom
    (excluded) points.  Implemented as successive profile sweeps, costing
    O(lines * cells) rather than a cells-squared max-plus product.
    """
    h0 = np.asarray(h0, dtype=float)
    if h0.shape != (field.m_w + 1,):
        raise ArgumentError(f"h0 must have {field.m_w + 1} entries, one per grid point")
    if np.all(np.isneginf(h0)):
        raise ArgumentError("h0 is identically bottom")
    if np.any(np.isposinf(h0)) or np.any(np.isnan(h0)):
        raise ArgumentError("h0 entries must be finite or -inf")
    l0 = time_index(field, s)
    l1 = time_index(field, t)
    if l1 <= l0:
        raise RangeError("evolution spans no line")
    xs = field.spatial_grid()
    D = np.full(field.n_nodes, NEG_INF)
    # the shear +c_n * (y - x) splits into endpoint terms: -c_n x folded
    # into the initial condition, +c_n y into the result
    D[: field.m_w + 1] = h0 - field.c_n * xs
    E = sweep_forward(field, l0, l1 - 1, D)
    return E[field.m_a :] + (l1 - l0) * field.b_n + field.c_n * xs
