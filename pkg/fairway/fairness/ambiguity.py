# coding: utf-8

"""
Ambiguity (bias) filter.

The training rows are partitioned by the protected attribute(s), one logistic model is
fitted per group on the remaining features, and every training row is scored by every
group model. Rows on which the group models disagree are ambiguous and get dropped.
"""

import logging

from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fairway.learners.logistic import lr_fit, lr_predict
from fairway.models.dataset import EncodedDataset
from fairway.models.exceptions import DegenerateGroup, InvalidParameter
from fairway.models.fairness import FilterMode, FilterOutcome
from fairway.models.learner import LogisticModel, LrHyper

logger = logging.getLogger('Ambiguity')

# rows of each class a group needs before a model is fitted on it
MIN_CLASS_ROWS = 2

GroupKey = Tuple[int, ...]


def group_label(attributes: Sequence[str], key: GroupKey) -> str:
    return ','.join(f'{a}={v}' for a, v in zip(attributes, key))


def _group_masks(train: EncodedDataset, attributes: Sequence[str]) -> Dict[GroupKey, np.ndarray]:
    columns = [train.group(a) for a in attributes]
    masks = {}
    # privileged first: (1,), (0,) or (1, 1), (1, 0), (0, 1), (0, 0)
    for key in product((1, 0), repeat=len(attributes)):
        mask = np.ones(len(train), dtype=bool)
        for col, v in zip(columns, key):
            mask &= col == v
        masks[key] = mask
    return masks


def fit_group_models(train: EncodedDataset, attributes: Sequence[str], hyper: LrHyper = LrHyper(),
                     max_workers: Optional[int] = None) -> Dict[GroupKey, LogisticModel]:
    """
    Fit one model per protected group on the features without the groups' indicator columns.

    :raises DegenerateGroup: when a group has fewer than two rows of either class
    """
    masks = _group_masks(train, attributes)
    features = train.without_protected(attributes)

    for key, mask in masks.items():
        labels = train.labels[mask]
        positives = int(labels.sum())
        negatives = int(mask.sum()) - positives
        if positives < MIN_CLASS_ROWS or negatives < MIN_CLASS_ROWS:
            raise DegenerateGroup(f'Group {group_label(attributes, key)} of "{train.name or "dataset"}" has '
                                  f'{positives} favorable and {negatives} unfavorable rows, '
                                  f'at least {MIN_CLASS_ROWS} of each are needed to filter on it')

    keys = list(masks)
    with ThreadPoolExecutor(max_workers=max_workers or len(keys)) as ex:
        fitted = ex.map(lambda k: lr_fit(features[masks[k]], train.labels[masks[k]], hyper), keys)
        # map() yields in submission order regardless of completion order
        return dict(zip(keys, fitted))


def _filter(train: EncodedDataset, attributes: Sequence[str], hyper: LrHyper, mode: FilterMode,
            max_workers: Optional[int]) -> FilterOutcome:
    models = fit_group_models(train, attributes, hyper, max_workers)
    features = train.without_protected(attributes)

    predictions = np.vstack([lr_predict(models[k], features) for k in models])
    agree = np.all(predictions == predictions[0], axis=0)
    dropped = np.nonzero(~agree)[0]

    outcome = FilterOutcome(
        retained=train.subset(np.nonzero(agree)[0]),
        dropped_indices=tuple(int(i) for i in dropped),
        dropped_fraction=dropped.shape[0] / len(train),
        mode=mode,
        attributes=tuple(attributes),
        group_sizes={group_label(attributes, k): int(m.sum()) for k, m in _group_masks(train, attributes).items()}
    )
    logger.debug(f'{mode.value} filter on {", ".join(attributes)}: dropped {outcome.dropped_count} of '
                 f'{len(train)} rows ({outcome.dropped_fraction:.1%})')
    return outcome


def filter_single(train: EncodedDataset, attribute: str, hyper: LrHyper = LrHyper(),
                  max_workers: Optional[int] = None) -> FilterOutcome:
    """Drop rows on which the privileged-group and unprivileged-group models disagree."""
    return _filter(train, [attribute], hyper, FilterMode.SINGLE, max_workers)


def filter_joint(train: EncodedDataset, attributes: Sequence[str], hyper: LrHyper = LrHyper(),
                 max_workers: Optional[int] = None) -> FilterOutcome:
    """Four group models over two attributes, a row is kept only if all four agree."""
    attributes = list(attributes)
    if len(attributes) != 2 or attributes[0] == attributes[1]:
        raise InvalidParameter(f'joint filtering needs two distinct protected attributes, got {attributes}')
    return _filter(train, attributes, hyper, FilterMode.JOINT, max_workers)


def filter_train(train: EncodedDataset, attribute: str, mode: FilterMode, hyper: LrHyper = LrHyper(),
                 max_workers: Optional[int] = None) -> FilterOutcome:
    train.attribute_position(attribute)
    if mode == FilterMode.JOINT:
        if len(train.protected) != 2:
            raise InvalidParameter(f'joint filtering needs a dataset with two protected attributes, '
                                   f'"{train.name}" has {len(train.protected)}')
        return filter_joint(train, train.protected, hyper, max_workers)
    return filter_single(train, attribute, hyper, max_workers)
