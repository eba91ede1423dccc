# coding: utf-8

from itertools import product

import numpy as np
import pytest

from fairway.fairness.ambiguity import filter_joint, filter_single, filter_train, fit_group_models
from fairway.learners.logistic import lr_fit, lr_predict
from fairway.models.dataset import EncodedDataset
from fairway.models.exceptions import DegenerateGroup, InvalidParameter, UnknownAttribute
from fairway.models.fairness import FilterMode

from conftest import make_biased


def _crafted(seed, rows_per_group=8) -> EncodedDataset:
    """Four groups over (sex, race), each with the same number of favorable and unfavorable rows."""
    rng = np.random.default_rng(seed)
    x, y, sex, race = [], [], [], []
    for s, r in product((1, 0), repeat=2):
        for i in range(rows_per_group):
            label = i % 2
            x.append(rng.normal(loc=(label - 0.5) * (1.5 if s else 0.5), size=2))
            y.append(label)
            sex.append(s)
            race.append(r)
    x = np.asarray(x)
    return EncodedDataset(
        features=np.column_stack([x, sex, race]),
        labels=y,
        groups=np.column_stack([sex, race]),
        column_names=('x0', 'x1', 'sex', 'race'),
        protected=('sex', 'race'),
        protected_column_index=(2, 3),
        numeric_columns=(0, 1),
    )


def _brute_force(data: EncodedDataset, attributes):
    """Fit per group by hand and compare every row's predictions."""
    drop_cols = [data.indicator_column(a) for a in attributes]
    features = np.delete(data.features, drop_cols, axis=1)
    predictions = []
    for key in product((0, 1), repeat=len(attributes)):
        rows = [i for i in range(len(data))
                if all(data.group(a)[i] == v for a, v in zip(attributes, key))]
        model = lr_fit(features[rows], data.labels[rows])
        predictions.append(lr_predict(model, features))
    return {i for i in range(len(data)) if len({int(p[i]) for p in predictions}) > 1}


@pytest.mark.parametrize('seed', range(5))
def test_single_matches_brute_force(seed):
    data = _crafted(seed)
    for attribute in ('sex', 'race'):
        outcome = filter_single(data, attribute)
        assert set(outcome.dropped_indices) == _brute_force(data, [attribute])


@pytest.mark.parametrize('seed', range(5))
def test_joint_matches_brute_force(seed):
    data = _crafted(seed)
    outcome = filter_joint(data, ['sex', 'race'])
    assert set(outcome.dropped_indices) == _brute_force(data, ['sex', 'race'])
    assert outcome.mode == FilterMode.JOINT
    assert outcome.group_sizes == {'sex=1,race=1': 8, 'sex=1,race=0': 8, 'sex=0,race=1': 8, 'sex=0,race=0': 8}


def test_outcome_accounting(biased):
    outcome = filter_single(biased, 'sex')

    assert len(outcome.retained) + outcome.dropped_count == len(biased)
    assert outcome.dropped_fraction == pytest.approx(outcome.dropped_count / len(biased))
    assert list(outcome.dropped_indices) == sorted(outcome.dropped_indices)
    assert outcome.retained.equals(biased.subset(outcome.retained_indices))
    # a label that leans on sex leaves rows the two group models read differently
    assert 0 < outcome.dropped_count < len(biased) // 2


def test_group_models_ignore_protected_columns(biased_two):
    single = fit_group_models(biased_two, ['sex'])
    joint = fit_group_models(biased_two, ['sex', 'race'])

    assert sorted(single) == [(0,), (1,)]
    assert all(m.n_features == biased_two.n_features - 1 for m in single.values())
    assert len(joint) == 4
    assert all(m.n_features == biased_two.n_features - 2 for m in joint.values())


def test_group_without_both_classes():
    data = _crafted(0)
    labels = data.labels.copy()
    # every privileged row becomes favorable
    labels[data.group('sex') == 1] = 1
    degenerate = EncodedDataset(features=data.features, labels=labels, groups=data.groups,
                                column_names=data.column_names, protected=data.protected,
                                protected_column_index=data.protected_column_index)
    with pytest.raises(DegenerateGroup, match='sex=1'):
        filter_single(degenerate, 'sex')
    assert DegenerateGroup.exit_code == 4


def test_filter_train_modes(biased, biased_two):
    assert filter_train(biased_two, 'race', FilterMode.SINGLE).attributes == ('race',)
    assert filter_train(biased_two, 'race', FilterMode.JOINT).attributes == ('sex', 'race')

    with pytest.raises(InvalidParameter):
        filter_train(biased, 'sex', FilterMode.JOINT)
    with pytest.raises(InvalidParameter):
        filter_joint(biased_two, ['sex', 'sex'])
    with pytest.raises(UnknownAttribute):
        filter_train(biased, 'age', FilterMode.SINGLE)


def test_filter_is_deterministic(biased):
    a = filter_single(biased, 'sex', max_workers=1)
    b = filter_single(biased, 'sex', max_workers=2)
    assert a.dropped_indices == b.dropped_indices


def test_second_pass_drops_less():
    data = make_biased(n=600, seed=21)
    first = filter_single(data, 'sex')
    second = filter_single(first.retained, 'sex')
    assert second.dropped_fraction <= first.dropped_fraction


def test_shared_separable_rule_drops_nothing():
    # the label follows x alone, the same way in both groups
    x = np.concatenate([np.linspace(-3, -1, 20), np.linspace(1, 3, 20)])
    sex = np.tile([0.0, 1.0], 20)
    data = EncodedDataset(features=np.column_stack([x, sex]), labels=(x > 0).astype(int), groups=sex,
                          column_names=('x', 'sex'), protected=('sex',), protected_column_index=(1,))

    outcome = filter_single(data, 'sex')
    assert outcome.dropped_fraction == 0.0
    assert len(outcome.retained) == 40
