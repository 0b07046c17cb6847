import numpy as np
import pytest

from corrfs.data import (
    DataError,
    Dataset,
    SplitDataset,
    generate_synthetic,
    generate_wide,
    load_csv,
    make_split,
    normalize_minmax,
    project,
    write_csv,
)
from corrfs.rng import RandomSource
from corrfs.subset import FeatureSubset


@pytest.fixture
def small_csv(tmp_path):
    p = tmp_path / "small.csv"
    p.write_text("a,b,class\n1.0,2.0,yes\n3.5,-1,no\n0,0,yes\n", encoding="utf-8")
    return p


def test_load_small(small_csv):
    ds = load_csv(small_csv, "class")
    assert (ds.n_samples, ds.n_features, ds.class_count) == (3, 2, 2)
    np.testing.assert_array_equal(ds.labels, [0, 1, 0])
    assert ds.feature_names == ("a", "b")
    assert ds.class_names == ("yes", "no")


def test_label_by_name_equals_index(small_csv):
    a, b, c = load_csv(small_csv, "class"), load_csv(small_csv, 2), load_csv(small_csv, -1)
    for other in (b, c):
        np.testing.assert_array_equal(a.features, other.features)
        np.testing.assert_array_equal(a.labels, other.labels)


def test_label_in_first_column(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("y,u,v\nA,1,2\nB,3,4\n")
    ds = load_csv(p, "y")
    np.testing.assert_array_equal(ds.features, [[1, 2], [3, 4]])


def test_unparsable_cell_names_row_and_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,class\n1,2,x\n3,4z,y\n")
    with pytest.raises(DataError, match=r"row 3, column 2 \('b'\)"):
        load_csv(p, "class")


@pytest.mark.parametrize("content,msg", [
    ("a,a,class\n1,2,x\n3,4,y\n", "duplicate header"),
    ("a,b,class\n1,2,x\n3,4,x\n", "single-class"),
    ("a,b,class\n1,2,x\n3,4\n", "cells"),
])
def test_load_errors(tmp_path, content, msg):
    p = tmp_path / "e.csv"
    p.write_text(content)
    with pytest.raises(DataError, match=msg):
        load_csv(p, "class")


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv")


def test_write_read_roundtrip(tmp_path):
    ds = generate_synthetic(RandomSource(1))
    p = tmp_path / "s.csv"
    write_csv(ds, p)
    back = load_csv(p, "label")
    np.testing.assert_array_equal(back.features, ds.features)
    # ids are assigned by first appearance; the original ids survive as tokens
    decoded = [int(back.class_names[i]) for i in back.labels]
    np.testing.assert_array_equal(decoded, ds.labels)


def _split(train, test):
    mk = lambda X: Dataset(np.asarray(X, float), np.arange(len(X)) % 2, ("x", "c"), 2)
    return SplitDataset(mk(train), mk(test))


class TestNormalize:
    def test_affine_and_constant(self):
        s = normalize_minmax(_split([[0, 4], [5, 4], [10, 4]], [[12, 9], [-5, 4]]))
        np.testing.assert_allclose(s.train.features[:, 0], [0, 0.5, 1])
        np.testing.assert_array_equal(s.train.features[:, 1], 0)
        np.testing.assert_array_equal(s.test.features[:, 1], 0)
        np.testing.assert_allclose(s.test.features[:, 0], [1.2, -0.5])
        np.testing.assert_array_equal(s.scale_min, [0, 4])
        np.testing.assert_array_equal(s.scale_max, [10, 4])


class TestProject:
    def setup_method(self):
        self.ds = Dataset(np.arange(12.0).reshape(4, 3), [0, 1, 0, 1], ("a", "b", "c"), 2)

    def test_identity(self):
        full = project(self.ds, FeatureSubset((0, 1, 2), 3))
        np.testing.assert_array_equal(full.features, self.ds.features)
        np.testing.assert_array_equal(full.labels, self.ds.labels)

    def test_single_column(self):
        p = project(self.ds, [2])
        np.testing.assert_array_equal(p.features, self.ds.features[:, [2]])
        assert p.feature_names == ("c",)

    def test_order_follows_subset(self):
        p = project(self.ds, FeatureSubset((2, 0), 3))
        np.testing.assert_array_equal(p.features, self.ds.features[:, [2, 0]])

    @pytest.mark.parametrize("bad", [[], [0, 0], [3], [-1]])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            project(self.ds, bad)


class TestSynthetic:
    def setup_method(self):
        self.ds = generate_synthetic(RandomSource(2024))

    def test_exact_relations(self):
        X = self.ds.features
        np.testing.assert_array_equal(X[:, 6], 10 * X[:, 0])
        np.testing.assert_array_equal(X[:, 7], X[:, 1] + 3 * X[:, 2])
        np.testing.assert_array_equal(X[:, 8], X[:, 3])
        np.testing.assert_array_equal(X[:, 9], X[:, 4] / 1000)

    def test_perfect_correlations(self):
        X = self.ds.features
        assert np.corrcoef(X[:, 3], X[:, 8])[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert np.corrcoef(X[:, 4], X[:, 9])[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_shape_and_balance(self):
        assert self.ds.features.shape == (250, 10)
        counts = np.bincount(self.ds.labels)
        assert counts.size == 2 and counts.min() >= 100

    def test_bit_identical(self):
        again = generate_synthetic(RandomSource(2024))
        assert again.features.tobytes() == self.ds.features.tobytes()
        assert again.labels.tobytes() == self.ds.labels.tobytes()

    def test_noise_feature_uninformative(self):
        rs = []
        for seed in range(20):
            ds = generate_synthetic(RandomSource(seed))
            rs.append(np.corrcoef(ds.features[:, 5], ds.labels)[0, 1])
        assert np.max(np.abs(rs)) < 0.15 or np.mean(np.abs(rs) < 0.15) >= 0.95

    def test_noise_free_labels_follow_score(self):
        ds = generate_synthetic(RandomSource(5), m=100, noise_rate=0.0)
        f = ds.features
        score = f[:, 0] + 0.8 * f[:, 1] + 0.6 * f[:, 2] + 0.4 * f[:, 3] + 0.2 * f[:, 4]
        np.testing.assert_array_equal(ds.labels, (score > np.median(score)).astype(int))

    def test_small_m_rejected(self):
        with pytest.raises(ValueError):
            generate_synthetic(RandomSource(0), m=9)


def test_wide_generator_layout():
    ds = generate_wide(RandomSource(0), m=120)
    X = ds.features
    assert X.shape == (120, 100)
    np.testing.assert_allclose(X[:, 10], X[:, 0] * 1.0)
    np.testing.assert_allclose(X[:, 11], X[:, 1] * 2.0)
    np.testing.assert_allclose(X[:, 20], X[:, 0] * 11.0)


def test_make_split_stratified_and_covering():
    ds = generate_synthetic(RandomSource(3))
    s = make_split(ds, RandomSource(4))
    assert s.train.n_samples + s.test.n_samples == 250
    assert s.train.n_samples == 188
    assert set(s.train.labels) == set(s.test.labels) == {0, 1}


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset([[1.0, np.nan]], [0], ("a", "b"), 2)
    with pytest.raises(DataError):
        Dataset([[1.0, 2.0]], [2], ("a", "b"), 2)
    with pytest.raises(DataError):
        Dataset([[1.0, 2.0]], [0], ("a", "b"), 1)
