# coding: utf-8

"""
Group confusion matrices and the four pipeline measures.

Rates with a zero denominator are 0. EOD and AOD are reported as absolute
values; AOD takes the absolute value after averaging the signed differences.
"""

from typing import Tuple

import numpy as np

from fairway.models.exceptions import LengthMismatch
from fairway.models.fairness import GroupConfusion, MeasureSet


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def confusion(labels, predictions, group) -> GroupConfusion:
    labels = np.asarray(labels).reshape(-1)
    predictions = np.asarray(predictions).reshape(-1)
    group = np.asarray(group).reshape(-1)
    if not (labels.shape == predictions.shape == group.shape):
        raise LengthMismatch(f'labels ({labels.shape[0]}), predictions ({predictions.shape[0]}) '
                             f'and group ({group.shape[0]}) must have equal length')
    if labels.shape[0] == 0:
        raise LengthMismatch('cannot build a confusion matrix from zero rows')

    y, p = labels == 1, predictions == 1
    priv = group == 1
    counts = {}
    for suffix, mask in (('p', priv), ('u', ~priv)):
        counts[f'tn_{suffix}'] = int(np.sum(mask & ~y & ~p))
        counts[f'fp_{suffix}'] = int(np.sum(mask & ~y & p))
        counts[f'fn_{suffix}'] = int(np.sum(mask & y & ~p))
        counts[f'tp_{suffix}'] = int(np.sum(mask & y & p))
    return GroupConfusion(**counts)


def rates(c: GroupConfusion) -> Tuple[float, float, float, float]:
    """(tpr_p, tpr_u, fpr_p, fpr_u)"""
    return (_ratio(c.tp_p, c.tp_p + c.fn_p), _ratio(c.tp_u, c.tp_u + c.fn_u),
            _ratio(c.fp_p, c.fp_p + c.tn_p), _ratio(c.fp_u, c.fp_u + c.tn_u))


def eod(c: GroupConfusion) -> float:
    tpr_p, tpr_u, _, _ = rates(c)
    return abs(tpr_u - tpr_p)


def aod(c: GroupConfusion) -> float:
    tpr_p, tpr_u, fpr_p, fpr_u = rates(c)
    return abs(0.5 * ((fpr_u - fpr_p) + (tpr_u - tpr_p)))


def performance(c: GroupConfusion) -> Tuple[float, float]:
    """Pooled (recall, false_alarm) over both groups."""
    tp, fn = c.tp_p + c.tp_u, c.fn_p + c.fn_u
    fp, tn = c.fp_p + c.fp_u, c.tn_p + c.tn_u
    return _ratio(tp, tp + fn), _ratio(fp, fp + tn)


def measure(c: GroupConfusion) -> MeasureSet:
    recall, false_alarm = performance(c)
    return MeasureSet(recall=recall, false_alarm=false_alarm, aod=aod(c), eod=eod(c))


def measure_predictions(labels, predictions, group) -> MeasureSet:
    return measure(confusion(labels, predictions, group))
