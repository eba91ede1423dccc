# coding: utf-8

import numpy as np
import pytest

from fairway.data.ingest import flip_protected
from fairway.fairness.situation import situation_test
from fairway.fairness.ambiguity import filter_single
from fairway.learners.logistic import lr_fit
from fairway.models.dataset import EncodedDataset
from fairway.models.exceptions import AttributeAbsent, DimensionMismatch, UnknownAttribute
from fairway.models.learner import LogisticModel, LrHyper


def _model(weights) -> LogisticModel:
    return LogisticModel(weights=np.asarray(weights, dtype=float), hyper=LrHyper(), converged=True,
                         iterations_used=0)


def test_zero_weight_on_indicator(biased):
    result = situation_test(_model([0.1, 1.0, -2.0, 0.0]), biased, 'sex')
    assert result.flipped == 0
    assert result.fail_rate == 0.0
    assert result.total == len(biased)


def test_indicator_only_model_always_flips():
    sex = np.array([1, 0, 1, 1, 0, 0], dtype=float)
    data = EncodedDataset(features=sex[:, None], labels=[1, 0, 1, 0, 1, 0], groups=sex,
                          column_names=('sex',), protected=('sex',), protected_column_index=(0,))
    # logit +1 for privileged rows, -1 for unprivileged ones
    result = situation_test(_model([-1.0, 2.0]), data, 'sex')
    assert result.fail_rate == 1.0
    assert result.flipped == 6


def test_flip_symmetry(biased):
    model = lr_fit(biased.features, biased.labels)
    assert situation_test(model, biased, 'sex') == situation_test(model, flip_protected(biased, 'sex'), 'sex')


def test_filtering_reduces_failures(biased):
    pre = lr_fit(biased.features, biased.labels)
    retained = filter_single(biased, 'sex').retained
    post = lr_fit(retained.features, retained.labels)

    assert situation_test(post, biased, 'sex').fail_rate <= situation_test(pre, biased, 'sex').fail_rate


def test_model_without_protected_column(biased):
    blind = lr_fit(biased.without_protected(), biased.labels)
    with pytest.raises(AttributeAbsent):
        situation_test(blind, biased, 'sex')


def test_dimension_and_attribute_errors(biased):
    with pytest.raises(DimensionMismatch):
        situation_test(_model(np.zeros(8)), biased, 'sex')
    with pytest.raises(UnknownAttribute):
        situation_test(_model(np.zeros(4)), biased, 'race')


def test_model_missing_one_of_two_indicators(biased_two):
    # biased_two has x0, x1, sex, race; a model without race (or without both) cannot be flipped
    with pytest.raises(AttributeAbsent):
        situation_test(_model(np.zeros(4)), biased_two, 'sex')
    with pytest.raises(AttributeAbsent):
        situation_test(_model(np.zeros(3)), biased_two, 'race')
    with pytest.raises(DimensionMismatch):
        situation_test(_model(np.zeros(7)), biased_two, 'sex')
