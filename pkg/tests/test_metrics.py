import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrfs.metrics import acc_pdf, basic_metrics, confusion, report


def brute_metrics(truths, preds, n_classes):
    """Independent per-sample tally of the binary / macro definitions."""
    total = len(truths)
    acc = sum(t == p for t, p in zip(truths, preds)) / total
    per = []
    for c in range(n_classes):
        tp = sum(1 for t, p in zip(truths, preds) if t == c and p == c)
        fp = sum(1 for t, p in zip(truths, preds) if t != c and p == c)
        fn = sum(1 for t, p in zip(truths, preds) if t == c and p != c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 0.0
        per.append((prec, rec, f1))
    if n_classes == 2:
        return (acc, *per[1])
    return (acc, *(sum(v[i] for v in per) / n_classes for i in range(3)))


def test_confusion_counts():
    cm = confusion([0, 0, 1, 1], [0, 1, 1, 1], 2)
    np.testing.assert_array_equal(cm, [[1, 1], [0, 2]])


def test_confusion_diagonal():
    cm = confusion([0, 1, 2, 2], [0, 1, 2, 2], 3)
    assert np.count_nonzero(cm - np.diag(np.diag(cm))) == 0


@pytest.mark.parametrize("t,p", [([], []), ([0, 1], [0]), ([0, 3], [0, 1])])
def test_confusion_errors(t, p):
    with pytest.raises(ValueError):
        confusion(t, p, 2)


def test_hand_example():
    # TP=2, TN=1, FP=1, FN=0 with class 1 positive
    acc, prec, rec, f1 = basic_metrics([[1, 1], [0, 2]])
    assert acc == 0.75
    assert prec == pytest.approx(2 / 3, abs=1e-15)
    assert rec == 1.0
    assert f1 == pytest.approx(0.8, abs=1e-15)


def test_perfect():
    assert basic_metrics(np.diag([3, 4, 5])) == (1.0, 1.0, 1.0, 1.0)


def test_empty_matrix():
    with pytest.raises(ValueError):
        basic_metrics(np.zeros((2, 2)))


def test_unpredicted_class_contributes_zero_precision():
    _, prec, rec, _ = basic_metrics([[2, 0, 0], [0, 2, 0], [1, 1, 0]])
    assert prec == pytest.approx((2 / 3 + 2 / 3 + 0) / 3)
    assert rec == pytest.approx((1 + 1 + 0) / 3)


@pytest.mark.parametrize("acc,size,n,expected", [(0.8, 2, 10, 0.64), (0.9, 10, 10, 0.0)])
def test_acc_pdf(acc, size, n, expected):
    assert acc_pdf(acc, size, n) == pytest.approx(expected, abs=1e-15)


def test_acc_pdf_limit():
    assert acc_pdf(1.0, 1, 10**6) == pytest.approx(1.0, abs=1e-5)


def test_acc_pdf_range():
    with pytest.raises(ValueError):
        acc_pdf(0.5, 0, 10)


def test_report_fields():
    r = report([0, 1, 1, 0], [0, 1, 0, 0], 2, 3, 12)
    assert r.subset_size == 3 and r.sfr == 0.25
    assert r.acc_pdf == pytest.approx(r.accuracy * (1 - r.sfr))


labels = st.integers(min_value=2, max_value=5).flatmap(
    lambda c: st.tuples(
        st.just(c),
        st.lists(st.tuples(st.integers(0, c - 1), st.integers(0, c - 1)), min_size=1, max_size=40),
    )
)


@settings(max_examples=200, deadline=None)
@given(labels)
def test_matches_bruteforce_and_bounds(case):
    c, pairs = case
    t, p = zip(*pairs)
    got = basic_metrics(confusion(t, p, c))
    np.testing.assert_allclose(got, brute_metrics(t, p, c), rtol=0, atol=1e-12)
    assert all(0.0 <= v <= 1.0 for v in got)


@settings(max_examples=100, deadline=None)
@given(labels, st.randoms())
def test_macro_invariant_under_relabelling(case, rnd):
    c, pairs = case
    if c == 2:
        return
    perm = list(range(c))
    rnd.shuffle(perm)
    t, p = zip(*pairs)
    a = basic_metrics(confusion(t, p, c))
    b = basic_metrics(confusion([perm[x] for x in t], [perm[x] for x in p], c))
    np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_binary_f1_identity(tp, fp, fn, tn):
    if tp + fp + fn + tn == 0:
        return
    _, P, R, f1 = basic_metrics([[tn, fp], [fn, tp]])
    if P + R > 0:
        assert f1 == pytest.approx(2 * P * R / (P + R), abs=1e-12)
