import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

import oracles
from starry.errors import InvalidArgument, SubsetError
from starry.excursion import ExcursionGrid, brownian_excursion, zigzag_grid
from starry.snake import (SnakeLabels, check_bounds, label_plan, map_metric, select_subset,
                          shortest_path_closure, simulate_labels, simulate_labels_batch)
from starry.treemetric import TreeMetric


@pytest.fixture(scope="module")
def brownian_tm():
    return TreeMetric(brownian_excursion(1024, 11))


def test_root_label_and_determinism(brownian_tm):
    a = simulate_labels(brownian_tm, 5)
    b = simulate_labels(brownian_tm, 5)
    assert a.z[0] == 0 and a.z[-1] == 0
    assert np.array_equal(a.z, b.z)
    assert not np.array_equal(a.z, simulate_labels(brownian_tm, 6).z)


def test_batch_rows_equal_single_runs(brownian_tm):
    seeds = [3, 99, 2**40]
    batch = simulate_labels_batch(brownian_tm, seeds)
    for row, s in zip(batch, seeds):
        assert np.array_equal(row, simulate_labels(brownian_tm, s).z)


def test_increasing_prefix_has_independent_increments():
    # heights 0, 1, 3, 6: every step rises, so each label adds one fresh normal
    plan = label_plan([0.0, 1.0, 3.0, 6.0, 0.0])
    assert plan.sd[plan.point_node[1:4]].tolist() == [1.0, math.sqrt(2), math.sqrt(3)]
    assert plan.point_node[-1] == 0


def test_labels_require_tree_metric():
    with pytest.raises(InvalidArgument):
        simulate_labels(zigzag_grid(2, 8), 0)


@pytest.mark.slow
def test_second_moments_against_interval_minima():
    g = zigzag_grid(4, 64)
    tm = TreeMetric(g)
    z = simulate_labels_batch(tm, range(10_000))
    for i, j in [(8, 24), (3, 40), (10, 10), (17, 63)]:
        prod = z[:, i] * z[:, j]
        assert abs(prod.mean() - tm.interval_min(i, j)) < 3 * prod.std() / math.sqrt(prod.size)
        sq = (z[:, i] - z[:, j]) ** 2
        assert abs(sq.mean() - tm.dist(i, j)) < 3 * sq.std() / math.sqrt(sq.size) + 1e-15


def test_d_circ_examples():
    g = ExcursionGrid(2, [0.0, 1.0, 0.0])
    sl = SnakeLabels(g, [0.0, 1.0, 0.0], 0)
    assert sl.d_circ(0, 1) == 1.0
    assert sl.d_circ(1, 1) == 0.0
    assert sl.d_circ(2, 1) == sl.d_circ(0, 1)


@st.composite
def label_arrays(draw):
    n = draw(st.integers(2, 30))
    inner = draw(st.lists(st.integers(-4, 4), min_size=n - 1, max_size=n - 1))
    return [0.0] + [v / 4 for v in inner] + [0.0]


@given(label_arrays())
def test_d_circ_matches_oracle(z):
    n = len(z) - 1
    sl = SnakeLabels(ExcursionGrid(n, np.r_[0.0, np.ones(n - 1), 0.0]), z, 0)
    idx = np.arange(n + 1)
    got = sl.d_circ_matrix(idx)
    want = np.array([[oracles.d_circ(z, i, j) for j in idx] for i in idx])
    assert np.array_equal(got, want)
    assert np.array_equal(got, got.T)
    assert np.all(np.diag(got) == 0)


def test_d_circ_zero_when_labels_equal_the_cyclic_minimum():
    z = [0.0, 2.0, 1.0, 3.0, 1.0, 2.0, 0.0]
    sl = SnakeLabels(ExcursionGrid(6, [0, 1, 1, 1, 1, 1, 0]), z, 0)
    assert sl.d_circ(2, 4) == 0.0
    assert sl.d_circ(0, 6) == 0.0


def test_cyclic_min_range_check():
    sl = SnakeLabels(ExcursionGrid(2, [0.0, 1.0, 0.0]), [0.0, 1.0, 0.0], 0)
    with pytest.raises(InvalidArgument):
        sl.cyclic_min(0, 3)


# -- map metric -----------------------------------------------------------------------

def test_closure_matches_floyd_warshall():
    rng = np.random.default_rng(0)
    x = rng.random((12, 12)) * 3
    d = np.triu(x, 1) + np.triu(x, 1).T
    assert np.allclose(shortest_path_closure(d), oracles.floyd_warshall(d), rtol=0, atol=1e-12)


def test_two_point_map_equals_d_circ(brownian_tm):
    sl = simulate_labels(brownian_tm, 1)
    mm = map_metric(sl, 2)
    assert np.array_equal(mm.d_map, mm.d_circ)


@pytest.mark.parametrize("strategy", ["stride", "extremes", "uniform-stride", "include-extremes"])
def test_map_metric_is_pseudometric_below_d_circ(brownian_tm, strategy):
    sl = simulate_labels(brownian_tm, 2)
    mm = map_metric(sl, 96, strategy)
    d = mm.d_map
    assert len(mm) == 96 and np.all(np.diff(mm.sample_indices) > 0)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0) and np.all(np.diag(mm.d_circ) == 0)
    assert np.all(d <= mm.d_circ)
    assert not np.any(d[:, None, :] > d[:, :, None] + d[None, :, :])


def test_extremes_strategy_contains_global_extremes(brownian_tm):
    sl = simulate_labels(brownian_tm, 4)
    idx = select_subset(sl, 32, "extremes")
    assert int(np.argmin(sl.z)) in idx and int(np.argmax(sl.z)) in idx


def test_more_chain_points_never_increase_distances(brownian_tm):
    sl = simulate_labels(brownian_tm, 8)
    small, big = map_metric(sl, 16), map_metric(sl, 64)
    shared = np.intersect1d(small.sample_indices, big.sample_indices)
    assert shared.size == 16
    assert np.all(big.distances(shared, shared) <= small.distances(shared, shared))


def test_subset_errors(brownian_tm):
    sl = simulate_labels(brownian_tm, 0)
    with pytest.raises(InvalidArgument):
        map_metric(sl, 1)
    with pytest.raises(InvalidArgument):
        select_subset(sl, 8, "random")
    mm = map_metric(sl, 8)
    with pytest.raises(SubsetError):
        mm.rows([1])
    assert mm.rows([0]).tolist() == mm.rows([1024]).tolist()


def test_included_points_are_kept(brownian_tm):
    sl = simulate_labels(brownian_tm, 0)
    mm = map_metric(sl, 20, include=[5, 777, 1024])
    assert {0, 5, 777} <= set(mm.sample_indices.tolist())


@pytest.mark.parametrize("seed", range(20))
def test_bounds_report(seed):
    tm = TreeMetric(brownian_excursion(1024, seed))
    sl = simulate_labels(tm, seed)
    mm = map_metric(sl, 128)
    rep = check_bounds(sl, tm, mm)
    assert rep.upper_violations == 0
    diag = rep.pairs[:, 0] == rep.pairs[:, 1]
    assert np.all(rep.lca_margin[diag] == 0) and np.all(rep.label_margin[diag] == 0)
    # the label-difference bound survives chain minimisation up to rounding
    assert rep.label_negative == 0
    print(f"seed {seed}: {rep.lca_negative} of {len(rep.pairs)} pairs below the ancestor bound")


def test_bounds_grid_mismatch():
    a = TreeMetric(brownian_excursion(64, 0))
    sl = simulate_labels(TreeMetric(brownian_excursion(128, 0)), 0)
    with pytest.raises(InvalidArgument):
        check_bounds(sl, a, map_metric(sl, 8))
