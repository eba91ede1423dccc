# coding: utf-8

import numpy as np
import pytest

from fairway.data.ingest import describe_groups, encode_frame, flip_protected, load_dataset, read_raw, split, split_sizes
from fairway.data.specfile import load_spec
from fairway.models.exceptions import (
    EmptyAfterFilter, InvalidParameter, IoFailure, MissingColumn, NonBinaryProtected, TooFewRows
)
from fairway.models.dataset import RowFilter

from conftest import make_biased


def test_encoding_layout(toy_spec_file):
    data = load_dataset(load_spec(str(toy_spec_file)))

    assert data.column_names == ('age', 'band=high', 'band=low', 'band=mid', 'score', 'sex', 'race')
    assert data.protected == ('sex', 'race')
    assert data.protected_column_index == (5, 6)
    assert data.numeric_columns == (0, 4)
    # one-hot blocks have exactly one hot column per row
    assert np.all(data.features[:, 1:4].sum(axis=1) == 1)
    assert np.array_equal(data.group('sex'), data.features[:, 5])
    assert set(np.unique(data.labels)) == {0, 1}


def test_missing_rows_are_dropped_and_counted(toy_spec_file):
    data = load_dataset(load_spec(str(toy_spec_file)))

    assert len(data) == 238
    assert data.summary.rows_read == 240
    assert data.summary.rows_dropped_missing == 2
    assert data.summary.rows_dropped_filter == 0
    assert data.summary.d == 7


def test_row_filters_run_before_missing_drop(toy_spec_file):
    from dataclasses import replace

    spec = load_spec(str(toy_spec_file))
    frame = read_raw(spec)
    # unparsable cells ("?") fail a numeric filter instead of raising
    filtered = replace(spec, row_filters=(RowFilter.parse('score >= 50'),))
    data = encode_frame(filtered, frame)

    assert data.summary.rows_dropped_missing == 0
    assert data.summary.rows_dropped_filter + len(data) == 240


def test_everything_filtered(toy_spec_file):
    from dataclasses import replace

    spec = replace(load_spec(str(toy_spec_file)), row_filters=(RowFilter.parse('age > 1000'),))
    with pytest.raises(EmptyAfterFilter):
        load_dataset(spec)


def test_missing_column(toy_spec_file):
    text = toy_spec_file.read_text().replace('score = numeric', 'score = numeric\nheight = numeric')
    toy_spec_file.write_text(text)
    with pytest.raises(MissingColumn, match='height'):
        load_dataset(load_spec(str(toy_spec_file)))


def test_value_outside_both_groups(toy_spec_file):
    csv = toy_spec_file.parent / 'toy.csv'
    csv.write_text(csv.read_text().replace(',M,', ',X,'))
    with pytest.raises(NonBinaryProtected):
        load_dataset(load_spec(str(toy_spec_file)))


def test_missing_file(toy_spec_file):
    (toy_spec_file.parent / 'toy.csv').unlink()
    with pytest.raises(IoFailure):
        load_dataset(load_spec(str(toy_spec_file)))


@pytest.mark.parametrize('n, sizes', [
    (297, (207, 44, 46)),
    (100, (70, 15, 15)),
    (1000, (700, 150, 150)),
    (21, (14, 3, 4)),
])
def test_split_sizes(n, sizes):
    assert split_sizes(n) == sizes
    assert sum(sizes) == n
    assert abs(sizes[0] - 0.7 * n) <= 1


def test_split_is_seeded_partition():
    data = make_biased(n=297)
    a, b = split(data, 11), split(data, 11)

    assert a.sizes == (207, 44, 46)
    assert a.train.equals(b.train) and a.test.equals(b.test)
    assert not split(data, 12).train.equals(a.train)

    # partition: every row lands in exactly one part
    raw = split(data, 11, standardize=False)
    rows = np.vstack([raw.train.features, raw.validation.features, raw.test.features])
    assert sorted(map(tuple, rows)) == sorted(map(tuple, data.features))


def test_standardization_uses_train_statistics():
    triple = split(make_biased(n=500), 0)
    numeric = list(triple.train.numeric_columns)

    np.testing.assert_allclose(triple.train.features[:, numeric].mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(triple.train.features[:, numeric].std(axis=0), 1.0, atol=1e-12)
    # indicator columns are left alone
    assert set(np.unique(triple.test.features[:, 2])) <= {0.0, 1.0}


def test_too_few_rows():
    with pytest.raises(TooFewRows):
        split(make_biased(n=19), 0)


def test_flip_protected_is_an_involution(biased_two):
    once = flip_protected(biased_two, 'race')

    assert np.array_equal(once.group('race'), 1 - biased_two.group('race'))
    assert np.array_equal(once.group('sex'), biased_two.group('sex'))
    assert np.array_equal(once.features[:, 3], 1 - biased_two.features[:, 3])
    assert flip_protected(once, 'race').equals(biased_two)


def test_describe_groups(biased):
    balance = describe_groups(biased, 'sex')
    sex = biased.group('sex') == 1

    assert balance.privileged_rows + balance.unprivileged_rows == len(biased)
    assert balance.privileged_favorable == pytest.approx(biased.labels[sex].mean())
    # the label leans towards the privileged group
    assert balance.privileged_favorable > balance.unprivileged_favorable


def test_arrays_are_read_only(biased):
    with pytest.raises(ValueError):
        biased.features[0, 0] = 1.0


def test_negative_seed_is_rejected():
    with pytest.raises(InvalidParameter, match='seed'):
        split(make_biased(n=100), -1)


def test_encoding_is_deterministic(toy_spec_file):
    spec = load_spec(str(toy_spec_file))
    first, second = load_dataset(spec), load_dataset(spec)

    assert first.equals(second)
    assert first.column_names == second.column_names
    assert first.summary == second.summary
