# coding: utf-8

import logging

import numpy as np

from fairway.data.ingest import flip_protected
from fairway.learners.logistic import lr_predict
from fairway.models.dataset import EncodedDataset
from fairway.models.exceptions import AttributeAbsent, DimensionMismatch
from fairway.models.fairness import SituationResult
from fairway.models.learner import LogisticModel

logger = logging.getLogger('Situation')


def situation_test(model: LogisticModel, data: EncodedDataset, attribute: str) -> SituationResult:
    """
    Predict every row twice, once as recorded and once with the protected
    attribute swapped; a row whose predicted class changes fails the test.
    """
    # resolve first so unknown attributes are reported as such
    data.attribute_position(attribute)
    if model.n_features != data.n_features:
        missing = data.n_features - model.n_features
        if 1 <= missing <= len(data.protected):
            raise AttributeAbsent(f'Model was trained without the protected indicator column(s), '
                                  f'situation testing on "{attribute}" is undefined')
        raise DimensionMismatch(f'model expects {model.n_features} features, data has {data.n_features}')

    original = lr_predict(model, data.features)
    flipped = lr_predict(model, flip_protected(data, attribute).features)
    n_flipped = int(np.sum(original != flipped))
    total = len(data)

    result = SituationResult(total=total, flipped=n_flipped,
                             fail_rate=n_flipped / total if total else 0.0, attribute=attribute)
    logger.debug(f'Situation test on "{attribute}": {n_flipped}/{total} rows change prediction')
    return result
