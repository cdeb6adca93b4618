"""Kernel functions against high-precision oracles and their shape
properties.

Expected values below were frozen from 50-digit mpmath evaluations of the
defining sums (the oracle helpers `mp_*` reproduce them at test time).
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import jsccexp as jx
from conftest import FIG_ROWS

mp.mp.dps = 50


def mp_distance(rows, x, xb):
    s = mp.fsum(mp.sqrt(mp.mpf(a) * mp.mpf(b)) for a, b in zip(rows[x], rows[xb]))
    return -mp.log(s)


def mp_source_exponent(rho, pmf):
    rho = mp.mpf(rho)
    return (1 + rho) * mp.log(mp.fsum(mp.mpf(p) ** (1 / (1 + rho)) for p in pmf if p > 0))


def mp_cross(rows, qa, qb, rho):
    rho = mp.mpf(rho)
    total = mp.fsum(
        mp.mpf(qa[x]) * mp.mpf(qb[xb]) * mp.e ** (-mp_distance(rows, x, xb) / rho)
        for x in range(len(qa))
        for xb in range(len(qb))
        if qa[x] > 0 and qb[xb] > 0
    )
    return -rho * mp.log(total)


# frozen oracle values for the fig channel / source / pair
DB_01 = 3.9071349763314872
DB_02 = 1.1138192570390852
ES_RHO1 = 0.27174314488425274
CROSS_Q1Q2_RHO1 = 0.7471816217107695
CROSS_Q1Q1_RHO2 = 1.0596152062285395
CROSS_Q1Q2_RHO2 = 1.1196733141777161


def test_distance_matrix_matches_oracle(fig_db):
    assert fig_db.dist[0, 1] == pytest.approx(DB_01, abs=1e-13)
    assert fig_db.dist[0, 2] == pytest.approx(DB_02, abs=1e-13)
    assert fig_db.dist[0, 1] == pytest.approx(float(mp_distance(FIG_ROWS, 0, 1)), abs=1e-14)


def test_distance_matrix_invariants(fig_db):
    d = fig_db.dist
    assert np.all(np.diag(d) == 0.0)
    assert np.array_equal(d, d.T)  # bit-exact symmetry
    assert np.all(d >= 0.0)


def test_distance_infinite_iff_disjoint_support():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]]))
    assert db.dist[0, 1] == math.inf
    db2 = jx.bhattacharyya_matrix(jx.ChannelSpec([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]]))
    assert math.isfinite(db2.dist[0, 1])


def test_identical_rows_have_zero_distance():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[0.3, 0.7], [0.3, 0.7]]))
    assert db.dist[0, 1] == 0.0


def test_source_exponent_values(skewed_source):
    assert jx.source_exponent(0.0, skewed_source) == pytest.approx(0.0, abs=1e-12)
    assert jx.source_exponent(1.0, skewed_source) == pytest.approx(ES_RHO1, abs=1e-13)
    degenerate = jx.SourceSpec([1.0, 0.0])
    for rho in (0.0, 1.0, 7.5):
        assert jx.source_exponent(rho, degenerate) == 0.0


def test_source_exponent_rejects_negative_rho(skewed_source):
    with pytest.raises(jx.ValidationError):
        jx.source_exponent(-0.5, skewed_source)


@given(st.floats(min_value=0.0, max_value=50.0))
def test_source_exponent_nonnegative(rho):
    src = jx.SourceSpec([0.3, 0.7])
    assert jx.source_exponent(rho, src) >= 0.0


def test_expurgated_single_input_is_zero():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[0.2, 0.8]]))
    q = jx.InputDistribution([1.0])
    for rho in (1.0, 3.0, 50.0):
        assert jx.expurgated_exponent(q, rho, db) == 0.0


def test_expurgated_identity_channel_uniform():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]]))
    q = jx.InputDistribution([0.5, 0.5])
    assert jx.expurgated_exponent(q, 1.0, db) == pytest.approx(math.log(2.0), abs=1e-14)


def test_expurgated_identical_rows_is_zero():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[0.3, 0.7], [0.3, 0.7]]))
    for q in ([0.5, 0.5], [1.0, 0.0], [0.2, 0.8]):
        assert jx.expurgated_exponent(jx.InputDistribution(q), 2.5, db) == 0.0


def test_cross_exponent_values(fig_db, q1, q2):
    assert jx.cross_exponent(q1, q2, 1.0, fig_db) == pytest.approx(CROSS_Q1Q2_RHO1, abs=1e-13)
    assert jx.cross_exponent(q1, q1, 2.0, fig_db) == pytest.approx(CROSS_Q1Q1_RHO2, abs=1e-13)
    assert jx.cross_exponent(q1, q2, 2.0, fig_db) == pytest.approx(CROSS_Q1Q2_RHO2, abs=1e-13)
    live = float(mp_cross(FIG_ROWS, [0.4, 0.4, 0.2], [0.5, 0.5, 0.0], 1))
    assert jx.cross_exponent(q1, q2, 1.0, fig_db) == pytest.approx(live, abs=1e-13)


def test_cross_exponent_self_equals_expurgated(fig_db, q1):
    for rho in (1.0, 2.0, 17.0):
        assert jx.cross_exponent(q1, q1, rho, fig_db) == jx.expurgated_exponent(q1, rho, fig_db)


def test_cross_exponent_disjoint_supports_is_infinite():
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]]))
    qa = jx.InputDistribution([1.0, 0.0])
    qb = jx.InputDistribution([0.0, 1.0])
    assert jx.cross_exponent(qa, qb, 2.0, db) == math.inf


def test_cross_exponent_rejects_rho_below_one(fig_db, q1):
    with pytest.raises(jx.ValidationError):
        jx.cross_exponent(q1, q1, 0.99, fig_db)


def test_cross_exponent_dimension_mismatch(fig_db):
    with pytest.raises(jx.DimensionMismatch):
        jx.cross_exponent(jx.InputDistribution([0.5, 0.5]),
                          jx.InputDistribution([0.5, 0.5]), 1.0, fig_db)


@st.composite
def channel_and_pair(draw):
    nx = draw(st.integers(2, 4))
    ny = draw(st.integers(2, 4))
    def pvec(n):
        raw = draw(st.lists(st.floats(1e-3, 1.0), min_size=n, max_size=n))
        return [x / sum(raw) for x in raw]
    rows = [pvec(ny) for _ in range(nx)]
    return rows, pvec(nx), pvec(nx), draw(st.floats(1.0, 40.0))


@given(channel_and_pair())
@settings(max_examples=60, deadline=None)
def test_cross_exponent_symmetry_bit_exact(data):
    rows, qa, qb, rho = data
    db = jx.bhattacharyya_matrix(jx.ChannelSpec(rows))
    a = jx.cross_exponent(jx.InputDistribution(qa), jx.InputDistribution(qb), rho, db)
    b = jx.cross_exponent(jx.InputDistribution(qb), jx.InputDistribution(qa), rho, db)
    assert a == b


@given(channel_and_pair())
@settings(max_examples=40, deadline=None)
def test_expurgated_monotone_and_cross_concave_in_rho(data):
    rows, qa, qb, _ = data
    db = jx.bhattacharyya_matrix(jx.ChannelSpec(rows))
    pa = jx.InputDistribution(qa)
    pb = jx.InputDistribution(qb)
    grid = np.geomspace(1.0, 50.0, 20)
    self_vals = np.array([jx.expurgated_exponent(pa, float(r), db) for r in grid])
    assert np.all(np.diff(self_vals) >= -1e-10)
    cross_vals = np.array([jx.cross_exponent(pa, pb, float(r), db) for r in grid])
    for i in range(1, len(grid) - 1):
        lam = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1])
        chord = (1 - lam) * cross_vals[i - 1] + lam * cross_vals[i + 1]
        assert cross_vals[i] >= chord - 1e-9


@given(channel_and_pair())
@settings(max_examples=40, deadline=None)
def test_rho_limit_matches_weighted_distance(data):
    rows, qa, qb, _ = data
    db = jx.bhattacharyya_matrix(jx.ChannelSpec(rows))
    limit = math.fsum(
        qa[x] * qb[xb] * db.dist[x, xb]
        for x in range(len(qa)) for xb in range(len(qb))
    )
    got = jx.cross_exponent(jx.InputDistribution(qa), jx.InputDistribution(qb), 1e6, db)
    assert got == pytest.approx(limit, rel=1e-3, abs=1e-9)


def test_min_cross_singleton_and_duplicates(fig_db, q1):
    singleton = jx.DistributionSet((q1,))
    dup = jx.DistributionSet((q1, q1))
    for rho in (1.0, 3.0):
        ex = jx.expurgated_exponent(q1, rho, fig_db)
        assert jx.min_cross_exponent(q1, singleton, rho, fig_db) == ex
        assert jx.min_cross_exponent(q1, dup, rho, fig_db) == ex


def test_min_cross_is_min_of_cross_values(fig_db, fig_pair, q1):
    got = jx.min_cross_exponent(q1, fig_pair, 2.0, fig_db)
    expected = min(CROSS_Q1Q1_RHO2, CROSS_Q1Q2_RHO2)
    assert got == pytest.approx(expected, abs=1e-13)


def test_min_cross_dominated_by_self(fig_db, fig_pair):
    for q in fig_pair:
        for rho in (1.0, 2.0, 9.0):
            assert (jx.min_cross_exponent(q, fig_pair, rho, fig_db)
                    <= jx.expurgated_exponent(q, rho, fig_db))


def test_set_max_ties_break_to_lowest_index(fig_db, q1):
    dup = jx.DistributionSet((q1, q1))
    value, idx = jx.set_max_exponent(dup, 2.0, fig_db)
    assert idx == 0
    assert value == jx.expurgated_exponent(q1, 2.0, fig_db)


def test_set_max_curve_matches_scalar(fig_db, fig_pair):
    rho = np.geomspace(1.0, 60.0, 40)
    fast = jx.set_max_exponent_curve(fig_pair, rho, fig_db)
    exact = jx.set_max_exponent_grid(fig_pair, rho, fig_db)
    np.testing.assert_allclose(fast, exact, rtol=1e-12, atol=1e-12)


def test_gallager_e0_zero_at_rho_zero(fig_channel):
    q = jx.uniform_input(3)
    assert jx.gallager_e0(q, 0.0, fig_channel) == pytest.approx(0.0, abs=1e-12)


def test_gallager_e0_useless_channel_is_zero():
    ch = jx.ChannelSpec([[0.25, 0.75], [0.25, 0.75]])
    for rho in (0.0, 0.4, 1.0):
        assert jx.gallager_e0(jx.uniform_input(2), rho, ch) == pytest.approx(0.0, abs=1e-12)


def test_gallager_e0_identity_uniform():
    ch = jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]])
    assert jx.gallager_e0(jx.uniform_input(2), 1.0, ch) == pytest.approx(math.log(2.0), abs=1e-14)


def test_gallager_e0_rejects_rho_outside_unit_interval(fig_channel):
    with pytest.raises(jx.ValidationError):
        jx.gallager_e0(jx.uniform_input(3), 1.5, fig_channel)


def test_growth_rates(fig_db, fig_pair):
    # all distances finite: growth is exactly 0
    assert jx.set_growth_rate(fig_pair, fig_db) == 0.0
    db = jx.bhattacharyya_matrix(jx.ChannelSpec([[1.0, 0.0], [0.0, 1.0]]))
    u = jx.uniform_input(2)
    assert jx.cross_growth_rate(u, u, db) == pytest.approx(math.log(2.0), abs=1e-14)
    assert jx.finite_pair_mass(u, u, db) == pytest.approx(0.5, abs=1e-15)
