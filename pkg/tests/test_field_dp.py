import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpzlab import (
    ArgumentError,
    LppField,
    Rng,
    build_field,
    extract_geodesic,
    load_field,
    passage_profile,
    raw_last_passage,
    resample_field,
    save_field,
)
from kpzlab.dp import enumerate_last_passage
from kpzlab.field import grid_line_constant, line_bonus, staircase_shift
from kpzlab.landscape import LandscapeQuery, landscape_approx


def small_field(seed=0, lines=3, cells=5, m_a=1, ties=False):
    gen = np.random.default_rng(seed)
    inc = gen.normal(0, 1, (lines, cells))
    if ties:
        inc = np.round(inc * 2) / 2
    return LppField.from_increments(inc, m_a=m_a)


def test_constants_and_grid_snap():
    f = build_field(Rng(1), 8, -2.0, 2.0, 1.0 / 16)
    assert f.a_n == pytest.approx(8 ** (-2 / 3) / 2)
    assert f.drift == pytest.approx(-2 * 8 ** (1 / 3))
    assert f.diffusion == 2.0
    # the staircase shift is exactly m_a cells
    assert f.m_a * f.delta == pytest.approx(f.a_n, rel=1e-15)
    assert f.b_n == pytest.approx(-(grid_line_constant(f.m_a) - 1) * 8 ** (-1 / 3))
    # stored constants recomputable from n (and the grid)
    assert f.a_n == staircase_shift(f.n)
    assert f.b_n == line_bonus(f.n, f.m_a)


def test_build_determinism_and_errors():
    a = build_field(Rng(5, 2), 6, -1.0, 1.0, 0.05)
    b = build_field(Rng(5, 2), 6, -1.0, 1.0, 0.05)
    assert np.array_equal(a.increments, b.increments)
    c = build_field(Rng(5, 3), 6, -1.0, 1.0, 0.05)
    assert not np.array_equal(a.increments, c.increments)
    with pytest.raises(ArgumentError):
        build_field(Rng(1), 0, -1.0, 1.0, 0.05)
    with pytest.raises(ArgumentError):
        build_field(Rng(1), 4, 1.0, -1.0, 0.05)
    with pytest.raises(ArgumentError):
        build_field(Rng(1), 4, 0.0, 1e-9, 0.05)


def test_grid_line_constant_interpolation():
    assert grid_line_constant(1) == pytest.approx(1.312669)
    mid = grid_line_constant(7)
    assert grid_line_constant(6) < mid < grid_line_constant(8)
    assert 1.85 < grid_line_constant(64) < 2.0
    with pytest.raises(ArgumentError):
        grid_line_constant(0)


def test_checkpoint_roundtrip(tmp_path):
    f = build_field(Rng(7, 9), 12, -1.5, 1.5, 0.02)
    p = tmp_path / "field.bin"
    save_field(f, str(p))
    g = load_field(str(p))
    assert g.n == f.n and g.m_a == f.m_a and g.m_w == f.m_w
    assert g.delta == f.delta and g.x_min == f.x_min
    assert np.array_equal(g.increments, f.increments)
    assert (g.seed, g.stream) == (f.seed, f.stream)


# -- raw DP ----------------------------------------------------------------


def test_single_line_is_prefix_sum():
    f = small_field(seed=3, lines=1, cells=6, m_a=0)
    inc = f.increments[0]
    for a in range(7):
        for b in range(a, 7):
            assert raw_last_passage(f, (a, 1), (b, 1)) == pytest.approx(
                inc[a:b].sum(), abs=1e-12
            )


def test_all_zero_increments():
    f = LppField.from_increments(np.zeros((3, 4)), m_a=0)
    assert raw_last_passage(f, (0, 1), (4, 3)) == 0.0
    g = extract_geodesic(f, (0, 1), (4, 3))
    assert g.exit_nodes.tolist() == [0, 0, 4]  # leftmost: earliest admissible
    gr = extract_geodesic(f, (0, 1), (4, 3), tie_break="rightmost")
    assert gr.exit_nodes.tolist() == [4, 4, 4]


def test_two_by_three_example():
    # jumping before the first cell collects the whole second line
    f = LppField.from_increments([[1.0, 0.0, 2.0], [3.0, 1.0, 0.0]], m_a=0)
    assert raw_last_passage(f, (0, 1), (3, 2)) == 4.0
    g = extract_geodesic(f, (0, 1), (3, 2))
    assert g.value == 4.0
    assert g.exit_nodes.tolist() == [0, 3]
    v_or, e_or = enumerate_last_passage(f, (0, 1), (3, 2))
    assert v_or == 4.0 and e_or.tolist() == [0, 3]


def test_profile_matches_pointwise():
    f = small_field(seed=11, lines=4, cells=7, m_a=1)
    prof = passage_profile(f, (0, 1), 4)
    lo, _ = f.node_range(4)
    gen = np.random.default_rng(0)
    for k in gen.integers(0, f.n_nodes, size=10):
        g1 = lo + int(k)
        if np.isneginf(prof[k]):
            with pytest.raises(ArgumentError):
                raw_last_passage(f, (0, 1), (g1, 4))
        else:
            assert raw_last_passage(f, (0, 1), (g1, 4)) == pytest.approx(
                float(prof[k]), abs=1e-12
            )


def test_profile_single_line_prefix():
    f = small_field(seed=2, lines=2, cells=5, m_a=0)
    prof = passage_profile(f, (1, 1), 1)
    S = np.concatenate(([0.0], np.cumsum(f.increments[0])))
    expect = S - S[1]
    assert np.isneginf(prof[0])
    assert np.allclose(prof[1:], expect[1:], atol=1e-12)


def _random_instance(gen):
    lines = int(gen.integers(1, 5))
    m_a = int(gen.integers(0, 3))
    cells = int(gen.integers(m_a + 1, 9))
    ties = bool(gen.integers(0, 2))
    inc = gen.normal(0, 1, (lines, cells))
    if ties:
        inc = np.round(inc * 2) / 2
    f = LppField.from_increments(inc, m_a=m_a)
    lo0, hi0 = f.node_range(1)
    lo1, hi1 = f.node_range(lines)
    g0 = int(gen.integers(lo0, hi0 + 1))
    g1 = int(gen.integers(max(g0, lo1), hi1 + 1))
    return f, lines, m_a, g0, g1


def test_oracle_equivalence_and_tie_breaks():
    gen = np.random.default_rng(42)
    checked = 0
    while checked < 120:
        f, lines, m_a, g0, g1 = _random_instance(gen)
        try:
            v = raw_last_passage(f, (g0, 1), (g1, lines))
        except ArgumentError:
            continue
        checked += 1
        offs = np.arange(lines) * m_a
        for tie in ("leftmost", "rightmost"):
            v_or, e_or = enumerate_last_passage(f, (g0, 1), (g1, lines), tie_break=tie)
            geo = extract_geodesic(f, (g0, 1), (g1, lines), tie_break=tie)
            assert abs(v - v_or) <= 1e-12
            assert geo.value == pytest.approx(v, abs=1e-12)
            assert np.array_equal(geo.exit_nodes - offs, e_or), (tie, f.increments)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(0, 2),
    st.integers(1, 6),
    st.integers(0, 10_000),
)
def test_oracle_equivalence_property(lines, m_a, extra_cells, seed):
    cells = m_a + extra_cells
    gen = np.random.default_rng(seed)
    inc = np.round(gen.normal(0, 1, (lines, cells)) * 4) / 4
    f = LppField.from_increments(inc, m_a=m_a)
    g0 = 0
    _, hi1 = f.node_range(lines)
    g1 = hi1
    if g0 > g1:
        return
    v = raw_last_passage(f, (g0, 1), (g1, lines))
    v_or, _ = enumerate_last_passage(f, (g0, 1), (g1, lines))
    assert abs(v - v_or) <= 1e-12


def test_geodesic_breakpoints_follow_shift_convention():
    f = build_field(Rng(23), 6, -2.0, 2.0, 0.05)
    g0, _ = f.node_range(1)
    lo1, hi1 = f.node_range(6)
    geo = extract_geodesic(f, (g0 + 2, 1), (hi1 - 1, 6))
    # unrolled exits nondecreasing <=> pi_{j-1} - a_n <= pi_j
    assert np.all(np.diff(np.concatenate(([geo.entry_node], geo.exit_nodes))) >= 0)
    bp = geo.breakpoints
    assert np.all(np.diff(bp) >= -f.a_n - 1e-12)
    assert geo.path.values[0] == pytest.approx(bp[0])
    assert geo.path.values[-1] == pytest.approx(bp[-1])


def test_endpoint_validation():
    f = small_field(seed=1, lines=3, cells=5, m_a=1)
    with pytest.raises(ArgumentError):
        raw_last_passage(f, (0, 2), (0, 1))  # start line after end line
    with pytest.raises(ArgumentError):
        raw_last_passage(f, (4, 1), (1, 3))  # start node beyond end node
    with pytest.raises(ArgumentError):
        raw_last_passage(f, (99, 1), (4, 3))  # outside band


# -- resampling ------------------------------------------------------------


def test_resample_shares_and_refreshes():
    f = build_field(Rng(31), 8, -2.0, 2.0, 0.05)
    r = resample_field(Rng(77), f, 0.25, 0.75)
    rows = slice(2, 6)  # lines 3..6 lie inside [0.25, 0.75)
    assert not np.array_equal(r.increments[rows], f.increments[rows])
    mask = np.ones(8, dtype=bool)
    mask[rows] = False
    assert np.array_equal(r.increments[mask], f.increments[mask])
    # queries supported before the interval are identical
    q = LandscapeQuery(0.0, 0.0, 0.1, 0.25)
    assert landscape_approx(f, q) == landscape_approx(r, q)
    # queries inside differ (fresh lines)
    q2 = LandscapeQuery(0.0, 0.25, 0.0, 0.75)
    assert landscape_approx(f, q2) != landscape_approx(r, q2)
    with pytest.raises(ArgumentError):
        resample_field(Rng(1), f, 0.3, 0.3)
    with pytest.raises(ArgumentError):
        resample_field(Rng(1), f, 0.26, 0.3)  # covers no whole line slab


def test_resample_straddling_composition():
    f = build_field(Rng(41), 8, -2.0, 2.0, 0.05)
    r = resample_field(Rng(5), f, 0.25, 0.75)
    # composition across the interval boundary is exact on the new field
    whole = landscape_approx(r, LandscapeQuery(0.0, 0.0, 0.0, 1.0))
    from kpzlab.landscape import landscape_profile, landscape_profile_to

    first = landscape_profile(r, 0.0, 0.0, 0.25)
    second = landscape_profile_to(r, 0.25, 0.0, 1.0)
    com = first + second
    assert np.nanmax(np.where(np.isfinite(com), com, -np.inf)) == pytest.approx(
        whole, abs=1e-9
    )
