# coding: utf-8

import numpy as np
import pytest

from fairway.learners.cart import cart_fit, cart_mse, cart_predict, cart_predict_many
from fairway.models.exceptions import DimensionMismatch, EmptyInput, InvalidParameter
from fairway.models.learner import CartLeaf, CartSplit


def test_constant_response_is_a_single_leaf():
    tree = cart_fit([((i, i % 3), 2.5) for i in range(10)])

    assert isinstance(tree.root, CartLeaf)
    assert tree.root.count == 10
    for v in [(0, 0), (100, -4), (3.3, 1)]:
        assert cart_predict(tree, v) == 2.5


def test_two_clusters():
    tree = cart_fit([((0,), 0.0), ((1,), 0.0), ((10,), 5.0), ((11,), 5.0)], min_samples_split=2)

    assert isinstance(tree.root, CartSplit)
    assert 1 < tree.root.threshold < 10
    assert [leaf.value for leaf in tree.leaves()] == [0.0, 5.0]
    assert cart_predict(tree, (0.5,)) == 0.0
    assert cart_predict(tree, (12,)) == 5.0


def test_threshold_goes_left():
    tree = cart_fit([((0,), 0.0), ((2,), 1.0)], min_samples_split=2)
    assert tree.root.threshold == 1.0
    assert cart_predict(tree, (1.0,)) == 0.0
    assert cart_predict(tree, (1.0 + 1e-9,)) == 1.0


def test_full_tree_memorizes_distinct_points():
    rng = np.random.default_rng(4)
    vectors = rng.permutation(np.array([(a, b) for a in range(6) for b in range(4)]))
    points = [(v, float(rng.normal())) for v in vectors]
    tree = cart_fit(points, min_samples_split=2, max_depth=None)

    for v, y in points:
        assert cart_predict(tree, v) == pytest.approx(y, abs=1e-12)
    assert cart_mse(tree, points) == pytest.approx(0.0, abs=1e-20)


def test_mse_non_increasing_in_depth():
    rng = np.random.default_rng(8)
    points = [((a, b, c), float(np.sin(a) + b * c + rng.normal(scale=0.1)))
              for a in range(5) for b in range(4) for c in range(3)]
    errors = [cart_mse(cart_fit(points, min_samples_split=2, max_depth=depth), points) for depth in range(8)]

    assert all(later <= earlier + 1e-12 for earlier, later in zip(errors, errors[1:]))


def test_leaves_and_limits():
    points = [((i,), float(i * i)) for i in range(40)]
    tree = cart_fit(points, min_samples_split=4, max_depth=3)

    assert tree.depth <= 3
    assert sum(leaf.count for leaf in tree.leaves()) == 40
    assert all(leaf.count >= 1 for leaf in tree.leaves())


def test_duplicate_vectors_with_different_responses():
    tree = cart_fit([((1, 1), 0.0), ((1, 1), 2.0)], min_samples_split=2, max_depth=None)
    assert isinstance(tree.root, CartLeaf)
    assert cart_predict(tree, (1, 1)) == 1.0


def test_deterministic():
    rng = np.random.default_rng(2)
    points = [((int(a), int(b)), float(rng.normal())) for a, b in rng.integers(0, 5, size=(30, 2))]
    assert cart_fit(points) == cart_fit(points)


def test_errors():
    with pytest.raises(EmptyInput):
        cart_fit([])
    with pytest.raises(InvalidParameter):
        cart_fit([((0,), 1.0)], min_samples_split=1)

    tree = cart_fit([((0, 1), 1.0), ((1, 0), 2.0)])
    with pytest.raises(DimensionMismatch):
        cart_predict(tree, (0, 1, 2))
    assert cart_predict_many(tree, [(0, 0), (5, 5)]).shape == (2,)


def test_config_vectors_of_mixed_length():
    with pytest.raises(DimensionMismatch, match='one length'):
        cart_fit([((0, 1), 1.0), ((1,), 2.0), ((2, 2), 3.0)])
