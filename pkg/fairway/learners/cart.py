# coding: utf-8

"""
CART regression tree, used as the optimizer's surrogate model.

Greedy splitting on the variance (sum of squared errors) reduction, candidate
thresholds are midpoints between consecutive distinct values of a feature.
Ties between equally good splits go to the lower feature index, then the lower threshold.
"""

import logging

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from fairway.models.exceptions import DimensionMismatch, EmptyInput, InvalidParameter
from fairway.models.learner import CartLeaf, CartNode, CartSplit, CartTree

logger = logging.getLogger('Learner')


def _best_split(x: np.ndarray, y: np.ndarray) -> Optional[Tuple[int, float]]:
    n = y.shape[0]
    best_sse, best = np.inf, None
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind='stable')
        xs, ys = x[order, j], y[order]
        valid = np.nonzero(xs[:-1] < xs[1:])[0]
        if valid.size == 0:
            continue

        csum, csum2 = np.cumsum(ys), np.cumsum(ys * ys)
        n_left = valid + 1.0
        n_right = n - n_left
        sse_left = csum2[valid] - csum[valid] ** 2 / n_left
        sse_right = (csum2[-1] - csum2[valid]) - (csum[-1] - csum[valid]) ** 2 / n_right
        sse = sse_left + sse_right

        k = int(np.argmin(sse))
        if sse[k] < best_sse:
            i = valid[k]
            best_sse, best = sse[k], (j, float((xs[i] + xs[i + 1]) / 2.0))
    return best


def _grow(x: np.ndarray, y: np.ndarray, depth: int, min_samples_split: int,
          max_depth: Optional[int]) -> CartNode:
    n = y.shape[0]
    if n < min_samples_split or (max_depth is not None and depth >= max_depth) or np.ptp(y) == 0:
        return CartLeaf(value=float(y.mean()), count=n)

    split = _best_split(x, y)
    if split is None:
        # identical configurations with different responses
        return CartLeaf(value=float(y.mean()), count=n)

    feature, threshold = split
    mask = x[:, feature] <= threshold
    return CartSplit(
        feature=feature,
        threshold=threshold,
        left=_grow(x[mask], y[mask], depth + 1, min_samples_split, max_depth),
        right=_grow(x[~mask], y[~mask], depth + 1, min_samples_split, max_depth)
    )


def cart_fit(points: Iterable[Tuple[Sequence[float], float]], min_samples_split: int = 4,
             max_depth: Optional[int] = 12) -> CartTree:
    """
    Fit a regression tree on (config vector, score) pairs.

    :param points: training pairs
    :param min_samples_split: nodes with fewer rows become leaves
    :param max_depth: maximum depth, None for unbounded
    :return: CartTree
    """
    points = list(points)
    if not points:
        raise EmptyInput('cart_fit needs at least one point')
    if min_samples_split < 2:
        raise InvalidParameter(f'min_samples_split must be >= 2, got {min_samples_split}')
    if max_depth is not None and max_depth < 0:
        raise InvalidParameter(f'max_depth must be >= 0, got {max_depth}')

    vectors = [np.atleast_1d(np.asarray(p[0], dtype=np.float64)) for p in points]
    if len({v.shape for v in vectors}) != 1:
        raise DimensionMismatch(f'cart_fit needs config vectors of one length, got '
                                f'{sorted({v.shape[0] for v in vectors})}')
    x = np.array(vectors)
    y = np.array([float(p[1]) for p in points])
    root = _grow(x, y, 0, min_samples_split, max_depth)
    return CartTree(root=root, n_features=x.shape[1],
                    min_samples_split=min_samples_split, max_depth=max_depth)


def cart_predict(tree: CartTree, vector: Sequence[float]) -> float:
    vector = np.atleast_1d(np.asarray(vector, dtype=np.float64))
    if vector.shape[0] != tree.n_features:
        raise DimensionMismatch(f'tree expects {tree.n_features} features, got {vector.shape[0]}')

    node = tree.root
    while isinstance(node, CartSplit):
        node = node.left if vector[node.feature] <= node.threshold else node.right
    return node.value


def cart_predict_many(tree: CartTree, vectors) -> np.ndarray:
    return np.array([cart_predict(tree, v) for v in vectors], dtype=np.float64)


def cart_mse(tree: CartTree, points) -> float:
    points = list(points)
    pred = cart_predict_many(tree, [p[0] for p in points])
    return float(np.mean((pred - np.array([p[1] for p in points], dtype=np.float64)) ** 2))
