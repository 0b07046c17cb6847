import numpy as np
import pytest

from corrfs.analysis import (
    aggregate_heatmaps,
    conditional_heatmap,
    mean_size_trajectory,
    size_trajectory,
    write_heatmap_csv,
    write_trajectory_csv,
)
from corrfs.eda import ProbabilityModel, TraceRecord, apply_im_update, conditional_distribution, init_model


def _trace(sizes):
    return [TraceRecord(i + 1, s, 1.0, 1.0, True) for i, s in enumerate(sizes)]


def test_uniform_initial_heatmap():
    H = conditional_heatmap(init_model(10))
    off = ~np.eye(10, dtype=bool)
    np.testing.assert_array_equal(np.diag(H), 0)
    np.testing.assert_allclose(H[off], 1 / 9, rtol=1e-15)


def test_rows_are_conditionals():
    rng = np.random.default_rng(0)
    n = 6
    im = rng.uniform(0.5, 2, (n, n))
    im = (im + im.T) / 2
    m = ProbabilityModel(rng.uniform(0.5, 2, n), im)
    H = conditional_heatmap(m)
    for i in range(n):
        np.testing.assert_allclose(H[i], conditional_distribution(m, [i]), rtol=1e-12)
        assert abs(H[i].sum() - 1) < 1e-9


def test_lowered_pair_is_row_minimum():
    m = init_model(10)
    w = np.zeros(10, int)
    w[4] = 1
    l = np.zeros(10, int)
    l[[4, 9]] = 1
    for _ in range(20):
        apply_im_update(m, w, l)
    H = conditional_heatmap(m)
    row = np.where(np.eye(10, dtype=bool)[4], np.inf, H[4])
    assert np.argmin(row) == 9
    row = np.where(np.eye(10, dtype=bool)[9], np.inf, H[9])
    assert np.argmin(row) == 4


def test_aggregate_identities():
    H = conditional_heatmap(ProbabilityModel(np.arange(1.0, 5), np.ones((4, 4))))
    np.testing.assert_allclose(aggregate_heatmaps([H]), H, rtol=1e-15)
    np.testing.assert_allclose(aggregate_heatmaps([H, H]), H, rtol=1e-15)
    U = conditional_heatmap(init_model(4))
    np.testing.assert_allclose(aggregate_heatmaps([U, U, U]), U, rtol=1e-15)


def test_aggregate_order_invariant_and_normalised():
    rng = np.random.default_rng(1)
    hs = [conditional_heatmap(ProbabilityModel(rng.uniform(0.1, 3, 5), np.ones((5, 5)))) for _ in range(4)]
    a = aggregate_heatmaps(hs)
    b = aggregate_heatmaps(hs[::-1])
    np.testing.assert_allclose(a, b, rtol=1e-14)
    np.testing.assert_allclose(a.sum(axis=1), 1, atol=1e-12)


def test_aggregate_errors():
    with pytest.raises(ValueError):
        aggregate_heatmaps([])
    with pytest.raises(ValueError):
        aggregate_heatmaps([np.eye(3), np.eye(4)])


def test_trajectories():
    t = size_trajectory(_trace([3] * 250))
    assert t.shape == (250, 2)
    np.testing.assert_array_equal(t[:, 1], 3)
    runs = [_trace(np.arange(1, 11) * k) for k in range(1, 11)]
    m = mean_size_trajectory(runs)
    np.testing.assert_allclose(m[:, 1], np.arange(1, 11) * 5.5)
    with pytest.raises(ValueError):
        size_trajectory([])
    with pytest.raises(ValueError):
        mean_size_trajectory([_trace([1, 2]), _trace([1])])


def test_csv_exports(tmp_path):
    H = conditional_heatmap(init_model(3))
    write_heatmap_csv(H, tmp_path / "h.csv")
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert lines[0] == "0.000000,0.500000,0.500000"
    assert len(lines) == 3
    write_trajectory_csv(size_trajectory(_trace([4, 2])), tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().splitlines() == ["iteration,size", "1,4", "2,2"]
