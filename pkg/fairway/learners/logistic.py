# coding: utf-8

"""
L2-regularized binary logistic regression.

Objective (intercept not penalized):

    mean_i[ log(1 + exp(z_i)) - y_i * z_i ] + ||w[1:]||^2 / (2 * c * n),   z = w[0] + X @ w[1:]

Solved by full-batch gradient descent from zero, Barzilai-Borwein step proposals and
Armijo backtracking, so the objective never increases between iterations.
Stops once the max-norm of the gradient drops below `tol` or after `max_iter` steps.
"""

import logging

import numpy as np

from fairway.models.exceptions import DimensionMismatch, SingleClass
from fairway.models.learner import LogisticModel, LrHyper

logger = logging.getLogger('Learner')

_ARMIJO = 1e-4
_MIN_STEP = 1e-20
_MAX_STEP = 1e8


def _with_intercept(features: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((features.shape[0], 1)), features])


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def objective(weights: np.ndarray, features: np.ndarray, labels: np.ndarray, c: float) -> float:
    xb = _with_intercept(np.asarray(features, dtype=np.float64))
    return _objective(weights, xb, np.asarray(labels, dtype=np.float64), c)


def gradient(weights: np.ndarray, features: np.ndarray, labels: np.ndarray, c: float) -> np.ndarray:
    xb = _with_intercept(np.asarray(features, dtype=np.float64))
    return _gradient(weights, xb, np.asarray(labels, dtype=np.float64), c)


def data_loss(weights: np.ndarray, features: np.ndarray, labels: np.ndarray) -> float:
    """Mean logistic loss without the penalty term."""
    z = _with_intercept(np.asarray(features, dtype=np.float64)) @ weights
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def _objective(w, xb, y, c) -> float:
    n = xb.shape[0]
    z = xb @ w
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + (w[1:] @ w[1:]) / (2.0 * c * n))


def _gradient(w, xb, y, c) -> np.ndarray:
    n = xb.shape[0]
    g = xb.T @ (sigmoid(xb @ w) - y) / n
    g[1:] += w[1:] / (c * n)
    return g


def _check_fit_input(features, labels):
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels).reshape(-1)
    if features.ndim != 2:
        raise DimensionMismatch(f'features must be a 2-D matrix, got shape {features.shape}')
    if features.shape[0] != labels.shape[0]:
        raise DimensionMismatch(f'{features.shape[0]} feature rows but {labels.shape[0]} labels')
    if features.shape[0] < 2:
        raise SingleClass(f'need at least 2 rows to fit, got {features.shape[0]}')
    if not np.all(np.isfinite(features)):
        raise DimensionMismatch('features contain non-finite values')
    if np.unique(labels).shape[0] < 2:
        raise SingleClass(f'all {labels.shape[0]} labels are {labels[0]}, both classes are required')
    return features, labels.astype(np.float64)


def lr_fit(features, labels, hyper: LrHyper = LrHyper()) -> LogisticModel:
    features, y = _check_fit_input(features, labels)
    xb = _with_intercept(features)
    c = hyper.c

    w = np.zeros(xb.shape[1])
    f = _objective(w, xb, y, c)
    g = _gradient(w, xb, y, c)
    history = [f]
    step = 1.0
    w_prev = g_prev = None
    converged = False
    iterations = 0

    while iterations < hyper.max_iter:
        if np.max(np.abs(g)) < hyper.tol:
            converged = True
            break

        if w_prev is not None:
            s, r = w - w_prev, g - g_prev
            sr = s @ r
            if sr > 0:
                step = min((s @ s) / sr, _MAX_STEP)

        gg = g @ g
        while True:
            w_new = w - step * g
            f_new = _objective(w_new, xb, y, c)
            if f_new <= f - _ARMIJO * step * gg:
                break
            step *= 0.5
            if step < _MIN_STEP:
                break

        if step < _MIN_STEP:
            logger.debug(f'Line search stalled after {iterations} iterations (objective {f:.6g})')
            break

        w_prev, g_prev = w, g
        w, f = w_new, f_new
        g = _gradient(w, xb, y, c)
        history.append(f)
        iterations += 1
    else:
        converged = bool(np.max(np.abs(g)) < hyper.tol)

    if not converged:
        logger.debug(f'No convergence within {hyper.max_iter} iterations '
                     f'(|grad|max={np.max(np.abs(g)):.3g}, tol={hyper.tol})')

    return LogisticModel(weights=w, hyper=hyper, converged=converged,
                         iterations_used=iterations, loss_history=tuple(history))


def lr_logit(model: LogisticModel, features) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features.reshape(1, -1)
    if features.shape[1] != model.n_features:
        raise DimensionMismatch(f'model expects {model.n_features} features, got {features.shape[1]}')
    return model.weights[0] + features @ model.weights[1:]


def lr_predict_proba(model: LogisticModel, features) -> np.ndarray:
    return sigmoid(lr_logit(model, features))


def lr_predict(model: LogisticModel, features) -> np.ndarray:
    # ties (logit exactly 0) go to the favorable class
    return (lr_logit(model, features) >= 0).astype(np.int8)
