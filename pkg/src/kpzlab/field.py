"""The discretized Brownian last-passage field.

A field holds n independent lines of Gaussian increments on a uniform
spatial grid.  Line j (1-based) carries a two-sided Brownian motion with
drift ``-2 n^(1/3)`` and diffusion parameter 2; a directed path crosses the
lines in order, paying the staircase shift ``a_n = n^(-2/3) / 2`` per line
transition and collecting a per-line centering bonus ``b_n``.  Under the
time convention ``line index = floor(t * n)``, passage values between
points at unit time separation converge to an order-one limit with GUE
Tracy-Widom one-point marginals.

Storage is banded: line j only ever sees spatial positions within one
staircase shift of the query window, so each line keeps ``m_a + m_w`` cells,
where ``m_a = a_n / delta`` is the shift in grid cells and ``m_w`` spans the
window.  The grid step is snapped so that ``m_a`` is a whole number of
cells, which keeps every grid identity (metric composition, triangle
inequality, weight additivity) exact in floating point.

The per-line bonus is ``b_n = -(gamma(m_a) - 1) * n^(-1/3)`` where
``gamma(m)`` is the linear-growth constant of grid Brownian last passage
with m cells per shift.  In the continuum ``gamma = 2`` (the classical
Brownian LPP constant) and the bonus reduces to ``-n^(-1/3)``; on a grid
the constant is smaller because breakpoints are restricted to grid nodes,
and using the continuum value would tilt all passage values by a
deterministic linear-in-time drift.  The table below was calibrated by
corner-to-corner simulation (see tools/calibrate_line_constant.py) with a
two-term ``gamma*k + c*k^(1/3)`` fit over k up to 2048 lines; entries are
accurate to about +-0.003.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ArgumentError
from .rng import Rng

#: gamma(m): linear-growth constant of grid Brownian LPP with m cells per
#: staircase shift and per-cell increment variance 1/m.  gamma(inf) = 2.
GRID_LINE_CONSTANT = {
    1: 1.312669,
    2: 1.477012,
    3: 1.560728,
    4: 1.613499,
    5: 1.650854,
    6: 1.677307,
    8: 1.723110,
    10: 1.735818,
    12: 1.766382,
    16: 1.802125,
    24: 1.843003,
    32: 1.855697,
}

#: tau(m): the grid's spatial shear.  Restricting breakpoints to grid nodes
#: blunts the entropy gained per unit of extra spatial span, so the drift of
#: the lines is no longer exactly cancelled and every passage value picks up
#: a deterministic tilt  -tau(m) * n^(1/3) * (y - x).  The tilt telescopes
#: through metric composition, so adding the opposite shear is a pure gauge
#: choice that leaves geodesics and all identities untouched while restoring
#: the spatially level limit profile.  tau(inf) = 0; values calibrated by
#: regression of the mean profile against the parabola (see
#: tools/calibrate_grid_constants.py).
GRID_TILT_CONSTANT = {
    1: 0.18757,
    2: 0.08626,
    3: 0.05417,
    4: 0.03607,
    5: 0.01860,
    6: 0.01190,
    8: 0.00500,
}

_CHECKPOINT_MAGIC = b"KPZF\x01\x00"


def grid_line_constant(m_a: int) -> float:
    """gamma(m_a), interpolated through (2 - gamma) * sqrt(m) between
    calibrated entries and extended by the sqrt(m) law beyond them."""
    if m_a < 1:
        raise ArgumentError("m_a must be >= 1")
    if m_a in GRID_LINE_CONSTANT:
        return GRID_LINE_CONSTANT[m_a]
    keys = sorted(GRID_LINE_CONSTANT)
    if m_a > keys[-1]:
        anchor = keys[-1]
        coef = (2.0 - GRID_LINE_CONSTANT[anchor]) * math.sqrt(anchor)
        return 2.0 - coef / math.sqrt(m_a)
    lo = max(k for k in keys if k < m_a)
    hi = min(k for k in keys if k > m_a)
    # interpolate the slowly varying combination (2 - gamma) * sqrt(m)
    clo = (2.0 - GRID_LINE_CONSTANT[lo]) * math.sqrt(lo)
    chi = (2.0 - GRID_LINE_CONSTANT[hi]) * math.sqrt(hi)
    w = (math.log(m_a) - math.log(lo)) / (math.log(hi) - math.log(lo))
    return 2.0 - ((1 - w) * clo + w * chi) / math.sqrt(m_a)


def grid_tilt_constant(m_a: int) -> float:
    """tau(m_a), interpolated through tau * m^2 between calibrated entries
    and extended by the m^-2 law beyond them."""
    if m_a < 1:
        raise ArgumentError("m_a must be >= 1")
    if m_a in GRID_TILT_CONSTANT:
        return GRID_TILT_CONSTANT[m_a]
    keys = sorted(GRID_TILT_CONSTANT)
    if m_a > keys[-1]:
        anchor = keys[-1]
        return GRID_TILT_CONSTANT[anchor] * (anchor / m_a) ** 2
    lo = max(k for k in keys if k < m_a)
    hi = min(k for k in keys if k > m_a)
    clo = GRID_TILT_CONSTANT[lo] * lo**2
    chi = GRID_TILT_CONSTANT[hi] * hi**2
    w = (math.log(m_a) - math.log(lo)) / (math.log(hi) - math.log(lo))
    return ((1 - w) * clo + w * chi) / m_a**2


def staircase_shift(n: int) -> float:
    """Per-line staircase shift a_n = n^(-2/3) / 2."""
    return 0.5 * n ** (-2.0 / 3.0)


def line_drift(n: int) -> float:
    """Per-unit-space drift of each Brownian line."""
    return -2.0 * n ** (1.0 / 3.0)


def line_bonus(n: int, m_a: int) -> float:
    """Per-line centering bonus b_n for a grid with m_a cells per shift."""
    return -(grid_line_constant(m_a) - 1.0) * n ** (-1.0 / 3.0)


def spatial_tilt(n: int, m_a: int) -> float:
    """Deterministic shear constant c_n; every landscape value carries the
    correction +c_n * (y - x) on a grid with m_a cells per shift."""
    return grid_tilt_constant(m_a) * n ** (1.0 / 3.0)


@dataclass
class LppField:
    """n lines of Gaussian increments on a banded uniform grid.

    ``increments[r, c]`` is the increment of line ``r + 1`` across local cell
    c.  Local node k of line j sits at spatial position
    ``x_min - a_n + k * delta``; exits of a line live on ``[x_min, x_max]``
    (local nodes ``m_a .. m_a + m_w``) and entries on
    ``[x_min - a_n, x_max - a_n]`` (local nodes ``0 .. m_w``).  The unrolled
    node index ``g = k + (j - 1) * m_a`` is preserved by line transitions,
    which is the coordinate all path-level APIs use.

    Fields are immutable after construction and safe to share across workers.
    """

    n: int
    x_min: float
    x_max: float
    delta: float
    m_a: int
    m_w: int
    a_n: float
    b_n: float
    c_n: float
    drift: float
    diffusion: float
    increments: np.ndarray
    seed: int = 0
    stream: int = 0
    synthetic: bool = dc_field(default=False, repr=False)

    def __post_init__(self):
        if self.increments.shape != (self.n, self.m_a + self.m_w):
            raise ArgumentError("increment array shape mismatch")
        if not np.all(np.isfinite(self.increments)):
            raise ArgumentError("increments must be finite")

    # -- grid geometry -------------------------------------------------

    @property
    def n_cells(self) -> int:
        return self.m_a + self.m_w

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    def spatial_grid(self) -> np.ndarray:
        """Window grid x_min .. x_max (m_w + 1 points)."""
        return self.x_min + self.delta * np.arange(self.m_w + 1)

    def node_range(self, line: int):
        """Valid unrolled node indices [lo, hi] on the given line."""
        self._check_line(line)
        lo = (line - 1) * self.m_a
        return lo, lo + self.n_cells

    def local_node(self, g: int, line: int) -> int:
        lo, hi = self.node_range(line)
        if not lo <= g <= hi:
            raise ArgumentError(
                f"node {g} outside line {line} band [{lo}, {hi}]"
            )
        return g - lo

    def position(self, g: int, line: int) -> float:
        """Paper-coordinate position of unrolled node g interpreted as a
        breakpoint between line `line` and line `line + 1`."""
        return self.x_min + (g - line * self.m_a) * self.delta

    def _check_line(self, line: int):
        if not 1 <= line <= self.n:
            raise ArgumentError(f"line {line} outside [1, {self.n}]")

    def same_grid(self, other: "LppField") -> bool:
        return (
            self.n == other.n
            and self.m_a == other.m_a
            and self.m_w == other.m_w
            and self.x_min == other.x_min
            and self.delta == other.delta
        )

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_increments(
        cls,
        increments,
        *,
        delta: float = 1.0,
        x_min: float = 0.0,
        m_a: int = 0,
        b_n: float = 0.0,
        c_n: float = 0.0,
        diffusion: float = 2.0,
    ) -> "LppField":
        """Hand-built field for tests and oracle checks.

        The staircase shift is m_a cells (0 gives a plain shared-node
        staircase model); constants are not tied to the line count.
        """
        inc = np.asarray(increments, dtype=float)
        if inc.ndim != 2 or inc.shape[1] <= m_a:
            raise ArgumentError("need a 2-d increment array wider than the shift")
        n = inc.shape[0]
        m_w = inc.shape[1] - m_a
        return cls(
            n=n,
            x_min=x_min,
            x_max=x_min + m_w * delta,
            delta=delta,
            m_a=m_a,
            m_w=m_w,
            a_n=m_a * delta,
            b_n=b_n,
            c_n=c_n,
            drift=0.0,
            diffusion=diffusion,
            increments=inc,
            synthetic=True,
        )


def plan_grid(n: int, x_min: float, x_max: float, delta: float):
    """Snap a requested grid step to the field geometry.

    Returns (delta_actual, m_a, m_w).  The step is adjusted so the staircase
    shift a_n is a whole number of cells; the window is widened to a whole
    number of cells.
    """
    if n < 1:
        raise ArgumentError("n must be >= 1")
    if not x_min < x_max:
        raise ArgumentError("need x_min < x_max")
    if delta <= 0:
        raise ArgumentError("delta must be positive")
    a_n = staircase_shift(n)
    m_a = max(1, round(a_n / delta))
    delta_actual = a_n / m_a
    if x_max - x_min < delta_actual * (1 - 1e-9):
        raise ArgumentError(
            f"window [{x_min}, {x_max}] too small: needs width >= "
            f"{delta_actual:.6g} (one grid cell at the snapped step) on top "
            f"of the staircase shift {a_n:.6g} held in the band"
        )
    m_w = math.ceil((x_max - x_min) / delta_actual - 1e-9)
    return delta_actual, m_a, m_w


def build_field(rng: Rng, n: int, x_min: float, x_max: float, delta: float) -> LppField:
    """Sample a fresh field; deterministic in (rng, parameters).

    ``delta`` is a request: the actual step is ``a_n / round(a_n / delta)``
    so the staircase shift is grid-exact, and ``x_max`` is rounded up to a
    whole cell.  Both snapped values are stored on the field.
    """
    delta_actual, m_a, m_w = plan_grid(n, x_min, x_max, delta)
    drift = line_drift(n)
    diffusion = 2.0
    gen = rng.generator()
    inc = gen.normal(
        drift * delta_actual,
        math.sqrt(diffusion * delta_actual),
        size=(n, m_a + m_w),
    )
    return LppField(
        n=n,
        x_min=x_min,
        x_max=x_min + m_w * delta_actual,
        delta=delta_actual,
        m_a=m_a,
        m_w=m_w,
        a_n=staircase_shift(n),
        b_n=line_bonus(n, m_a),
        c_n=spatial_tilt(n, m_a),
        drift=drift,
        diffusion=diffusion,
        increments=inc,
        seed=rng.seed,
        stream=rng.stream,
    )


def resample_field(rng: Rng, field: LppField, time_lo: float, time_hi: float) -> LppField:
    """Fresh copy of ``field`` whose lines inside [time_lo, time_hi) are
    independently resampled; all other lines are equal to the original.

    Line j occupies the time slab [(j-1)/n, j/n); it is resampled when the
    slab lies inside the interval.  Queries whose time support avoids the
    interval therefore return identical values.
    """
    if not 0.0 <= time_lo < time_hi:
        raise ArgumentError("need 0 <= time_lo < time_hi")
    n = field.n
    rows = [
        r
        for r in range(n)
        if r / n >= time_lo - 1e-9 and (r + 1) / n <= time_hi + 1e-9
    ]
    if not rows:
        raise ArgumentError("interval covers no whole line slab")
    inc = field.increments.copy()
    gen = rng.generator()
    inc[rows] = gen.normal(
        field.drift * field.delta,
        math.sqrt(field.diffusion * field.delta),
        size=(len(rows), field.n_cells),
    )
    return LppField(
        n=field.n,
        x_min=field.x_min,
        x_max=field.x_max,
        delta=field.delta,
        m_a=field.m_a,
        m_w=field.m_w,
        a_n=field.a_n,
        b_n=field.b_n,
        c_n=field.c_n,
        drift=field.drift,
        diffusion=field.diffusion,
        increments=inc,
        seed=rng.seed,
        stream=rng.stream,
        synthetic=field.synthetic,
    )


def save_field(field: LppField, path: str):
    """Binary checkpoint: header + row-major increment array.  Debugging aid
    for reproducibility, not an interchange format."""
    header = struct.pack(
        "<6sqddd qq qq",
        _CHECKPOINT_MAGIC,
        field.n,
        field.x_min,
        field.x_max,
        field.delta,
        field.m_a,
        field.m_w,
        field.seed,
        field.stream,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(field.increments, dtype="<f8").tobytes())


def load_field(path: str) -> LppField:
    with open(path, "rb") as fh:
        head = fh.read(struct.calcsize("<6sqddd qq qq"))
        magic, n, x_min, x_max, delta, m_a, m_w, seed, stream = struct.unpack(
            "<6sqddd qq qq", head
        )
        if magic != _CHECKPOINT_MAGIC:
            raise ArgumentError(f"{path} is not a field checkpoint")
        inc = np.frombuffer(fh.read(), dtype="<f8").reshape(n, m_a + m_w).copy()
    return LppField(
        n=n,
        x_min=x_min,
        x_max=x_max,
        delta=delta,
        m_a=m_a,
        m_w=m_w,
        a_n=staircase_shift(n),
        b_n=line_bonus(n, m_a),
        c_n=spatial_tilt(n, m_a),
        drift=line_drift(n),
        diffusion=2.0,
        increments=inc,
        seed=seed,
        stream=stream,
    )
