# coding: utf-8

"""
FLASH-style sequential model-based optimization over a discrete configuration space.

A random initial pool is evaluated, then each round fits a CART surrogate on everything
evaluated so far, evaluates the unevaluated configuration with the highest predicted
score and loses one life whenever that evaluation does not beat the best score so far.
"""

import logging

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from fairway.fairness.metrics import measure_predictions
from fairway.learners.cart import cart_fit, cart_predict_many
from fairway.learners.logistic import lr_fit, lr_predict
from fairway.models.dataset import EncodedDataset
from fairway.models.exceptions import SpaceTooSmall
from fairway.models.fairness import MeasureSet
from fairway.models.flash import (
    ConfigSpace, FlashBudget, FlashResult, FlashState, ObjectiveWeights, SurrogateParams, TraceEntry
)
from fairway.models.learner import LrHyper

logger = logging.getLogger('FLASH')


def composite(m: MeasureSet, w: ObjectiveWeights = ObjectiveWeights()) -> float:
    """Scalar score, higher is better: recall rewarded, false alarm, AOD and EOD penalized."""
    return w.w_recall * m.recall - w.w_far * m.false_alarm - w.w_aod * m.aod - w.w_eod * m.eod


def evaluate_config(hyper: LrHyper, train: EncodedDataset, validation: EncodedDataset,
                    attribute: str) -> MeasureSet:
    model = lr_fit(train.features, train.labels, hyper)
    predictions = lr_predict(model, validation.features)
    return measure_predictions(validation.labels, predictions, validation.group(attribute))


def flash_search(space: ConfigSpace, objective: Callable[[int], float], budget: FlashBudget = FlashBudget(),
                 seed: int = 0, surrogate: SurrogateParams = SurrogateParams(),
                 max_workers: Optional[int] = None) -> Tuple[FlashResult, FlashState]:
    """
    Maximize `objective` (configuration index -> score) over `space`.

    :return: (FlashResult, final FlashState)
    """
    if space.size < budget.initial_pool:
        raise SpaceTooSmall(f'configuration space has {space.size} entries, '
                            f'initial pool needs {budget.initial_pool}')

    rng = np.random.default_rng(seed)
    initial = sorted(int(i) for i in rng.choice(space.size, size=budget.initial_pool, replace=False))
    vectors = np.array(space.all_vectors(), dtype=np.float64)

    with ThreadPoolExecutor(max_workers=max_workers) as ex:
        scores = list(ex.map(objective, initial))

    state = FlashState(build_pool=list(zip(initial, (float(s) for s in scores))),
                       rest_pool=sorted(set(range(space.size)) - set(initial)),
                       life=budget.life, evaluations_used=len(initial))
    trace = [TraceEntry(config=i, score=float(s)) for i, s in zip(initial, scores)]
    logger.debug(f'Initial pool of {len(initial)} evaluated, best {state.best[1]:.4f} (config {state.best[0]})')

    rounds = 0
    while state.life > 0 and state.rest_pool:
        tree = cart_fit([(vectors[i], s) for i, s in state.build_pool],
                        min_samples_split=surrogate.min_samples_split, max_depth=surrogate.max_depth)
        predicted = cart_predict_many(tree, vectors[state.rest_pool])
        # argmax returns the first maximum, rest_pool is sorted so ties go to the lowest index
        pick = int(np.argmax(predicted))
        config = state.rest_pool.pop(pick)

        best_before = state.best[1]
        score = float(objective(config))
        state.build_pool.append((config, score))
        state.evaluations_used += 1
        trace.append(TraceEntry(config=config, score=score, predicted=float(predicted[pick])))
        rounds += 1

        if score < best_before:
            state.life -= 1
        logger.debug(f'Round {rounds}: config {config} predicted {predicted[pick]:.4f}, '
                     f'measured {score:.4f}, life {state.life}')

    best_config, best_score = state.best
    result = FlashResult(best_config=best_config, best_score=best_score, trace=tuple(trace),
                         surrogate_rounds=rounds, final_life=state.life)
    return result, state


def run_flash(space: ConfigSpace, weights: ObjectiveWeights, budget: FlashBudget,
              train: EncodedDataset, validation: EncodedDataset, attribute: str, seed: int,
              surrogate: SurrogateParams = SurrogateParams(),
              max_workers: Optional[int] = None) -> Tuple[int, Tuple[TraceEntry, ...]]:
    """
    Tune the logistic regression hyperparameters on the validation split.

    :return: (best configuration index, evaluation trace in evaluation order)
    """
    measures: Dict[int, MeasureSet] = {}

    def _objective(index: int) -> float:
        m = evaluate_config(space.hyper(index), train, validation, attribute)
        measures[index] = m
        return composite(m, weights)

    result, _ = flash_search(space, _objective, budget, seed, surrogate, max_workers)
    trace = tuple(TraceEntry(config=e.config, score=e.score, predicted=e.predicted, measures=measures[e.config])
                  for e in result.trace)
    logger.info(f'FLASH finished after {result.evaluations_used} evaluations: config {result.best_config} '
                f'{space.values(result.best_config)} scored {result.best_score:.4f}')
    return result.best_config, trace
