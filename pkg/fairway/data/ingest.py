# coding: utf-8

import logging
import os

from typing import List, Tuple

import numpy as np
import pandas as pd

from fairway.models.dataset import (
    ColumnKind, DatasetSpec, EncodedDataset, GroupBalance, IngestSummary, SplitTriple, Standardization
)
from fairway.models.exceptions import (
    EmptyAfterFilter, InvalidParameter, IoFailure, MissingColumn, NonNumericValue, TooFewRows
)

logger = logging.getLogger('Ingest')

MIN_SPLIT_ROWS = 20
# split boundaries in percent
TRAIN_PCT, VALIDATION_PCT = 70, 15


def read_raw(spec: DatasetSpec) -> pd.DataFrame:
    """Read the spec's CSV as strings, whitespace stripped, nothing interpreted as NaN."""
    if not os.path.isfile(spec.csv_path):
        raise IoFailure(f'Dataset file "{spec.csv_path}" not found '
                        f'(run "fairway datasets fetch {spec.name}" if the spec has source urls)')

    kwargs = dict(dtype=str, keep_default_na=False, na_filter=False,
                  skipinitialspace=spec.skip_initial_space, comment=spec.comment)
    if spec.separator == 'whitespace':
        kwargs['sep'] = r'\s+'
    else:
        kwargs['sep'] = spec.separator
    if not spec.header:
        kwargs['header'] = None
        kwargs['names'] = list(spec.raw_columns)

    try:
        frame = pd.read_csv(spec.csv_path, **kwargs)
    except (OSError, pd.errors.ParserError) as e:
        raise IoFailure(f'Unable to read "{spec.csv_path}": {e!r}')

    if not spec.header and frame.shape[1] != len(spec.raw_columns):
        raise MissingColumn(f'"{spec.csv_path}" has {frame.shape[1]} fields per row, '
                            f'spec lists {len(spec.raw_columns)} raw columns')
    # headerless files with a trailing blank line yield an all-empty row
    frame = frame[~(frame == '').all(axis=1)]
    return frame.apply(lambda col: col.str.strip())


def _check_columns(spec: DatasetSpec, frame: pd.DataFrame):
    needed = spec.used_columns + [f.column for f in spec.row_filters]
    missing = [c for c in dict.fromkeys(needed) if c not in frame.columns]
    if missing:
        raise MissingColumn(f'Dataset "{spec.name}" is missing column(s): {", ".join(missing)}')


def encode_frame(spec: DatasetSpec, frame: pd.DataFrame) -> EncodedDataset:
    """
    Encode a raw string frame against the spec.

    Order of operations: row filters, missing-value drop, then encoding.
    """
    _check_columns(spec, frame)
    rows_read = len(frame)

    for f in spec.row_filters:
        frame = frame[frame[f.column].map(lambda v, p=f.predicate: _filter_pass(p, v))]
    rows_dropped_filter = rows_read - len(frame)

    used = spec.used_columns
    missing = frame[used].isin([spec.missing_token, '']).any(axis=1)
    frame = frame[~missing]
    rows_dropped_missing = int(missing.sum())

    if frame.empty:
        raise EmptyAfterFilter(f'No rows of "{spec.name}" survive filtering and missing-value removal '
                               f'(read {rows_read}, filtered {rows_dropped_filter}, '
                               f'missing {rows_dropped_missing})')

    protected_by_column = {p.column: p for p in spec.protected}
    blocks: List[np.ndarray] = []
    names: List[str] = []
    numeric: List[int] = []
    indicator_index = {}

    def _emit(values: np.ndarray, column_names: List[str], is_numeric=False):
        start = len(names)
        blocks.append(values.reshape(len(frame), -1))
        names.extend(column_names)
        if is_numeric:
            numeric.extend(range(start, len(names)))

    def _emit_protected(column: str):
        attr = protected_by_column[column]
        indicator = frame[column].map(attr.is_privileged).to_numpy(dtype=np.float64)
        indicator_index[attr.name] = len(names)
        _emit(indicator, [attr.name])

    for column, kind in spec.feature_columns:
        if column in protected_by_column:
            _emit_protected(column)
        elif kind == ColumnKind.NUMERIC:
            try:
                values = pd.to_numeric(frame[column], errors='raise').to_numpy(dtype=np.float64)
            except (ValueError, TypeError) as e:
                raise NonNumericValue(f'Column "{column}" of "{spec.name}" is declared numeric: {e}')
            _emit(values, [column], is_numeric=True)
        else:
            categories = sorted(frame[column].unique())
            onehot = (frame[column].to_numpy()[:, None] == np.array(categories)[None, :]).astype(np.float64)
            _emit(onehot, [f'{column}={c}' for c in categories])

    feature_names = {c for c, _ in spec.feature_columns}
    for p in spec.protected:
        if p.column not in feature_names:
            _emit_protected(p.column)

    features = np.hstack(blocks)
    labels = frame[spec.label_column].map(lambda v: _filter_pass(spec.favorable, v)).to_numpy(dtype=np.int8)
    groups = np.column_stack([features[:, indicator_index[name]] for name in spec.protected_names])

    summary = IngestSummary(rows_read=rows_read, rows_dropped_filter=rows_dropped_filter,
                            rows_dropped_missing=rows_dropped_missing, d=features.shape[1])
    logger.info(f'Loaded "{spec.name}": {summary.rows_read} rows read, {summary.rows_dropped_filter} '
                f'filtered, {summary.rows_dropped_missing} dropped for missing values, d={summary.d}')

    return EncodedDataset(
        features=features,
        labels=labels,
        groups=groups,
        column_names=tuple(names),
        protected=tuple(spec.protected_names),
        protected_column_index=tuple(indicator_index[n] for n in spec.protected_names),
        numeric_columns=tuple(numeric),
        name=spec.name,
        summary=summary
    )


def _filter_pass(predicate, raw) -> bool:
    # a row filter on a numeric column rejects unparsable cells instead of failing the load
    try:
        return predicate(raw)
    except NonNumericValue:
        return False


def load_dataset(spec: DatasetSpec) -> EncodedDataset:
    return encode_frame(spec, read_raw(spec))


def _fit_standardization(train: EncodedDataset) -> Standardization:
    cols = list(train.numeric_columns)
    if not cols:
        return Standardization(columns=(), mean=(), scale=())
    block = train.features[:, cols]
    mean = block.mean(axis=0)
    scale = block.std(axis=0)
    # constant columns are centered but not scaled
    scale[scale == 0] = 1.0
    return Standardization(columns=tuple(cols), mean=tuple(float(m) for m in mean),
                           scale=tuple(float(s) for s in scale))


def split_sizes(n: int) -> Tuple[int, int, int]:
    n_train = n * TRAIN_PCT // 100
    n_val = n * VALIDATION_PCT // 100
    return n_train, n_val, n - n_train - n_val


def split(data: EncodedDataset, seed: int, standardize: bool = True) -> SplitTriple:
    """
    Shuffle with a PRNG seeded by `seed` and cut 70/15/15 (floor for train and
    validation, remainder to test). Numeric columns are z-scored with train statistics.
    """
    n = len(data)
    if n < MIN_SPLIT_ROWS:
        raise TooFewRows(f'Need at least {MIN_SPLIT_ROWS} rows to split, got {n}')
    if seed < 0:
        raise InvalidParameter(f'Split seed must be >= 0, got {seed}')

    order = np.random.default_rng(seed).permutation(n)
    n_train, n_val, _ = split_sizes(n)
    train = data.subset(order[:n_train])
    validation = data.subset(order[n_train:n_train + n_val])
    test = data.subset(order[n_train + n_val:])

    if standardize:
        std = _fit_standardization(train)
    else:
        std = Standardization(columns=(), mean=(), scale=())

    logger.debug(f'Split "{data.name}" with seed {seed}: sizes {n_train}/{n_val}/{len(test)}')
    return SplitTriple(train=std.apply(train), validation=std.apply(validation), test=std.apply(test),
                       seed=seed, standardization=std)


def flip_protected(data: EncodedDataset, attribute: str) -> EncodedDataset:
    """Copy of `data` with the attribute's indicator complemented in features and groups."""
    pos = data.attribute_position(attribute)
    col = data.protected_column_index[pos]

    features = data.features.copy()
    features[:, col] = 1.0 - features[:, col]
    groups = data.groups.copy()
    groups[:, pos] = 1 - groups[:, pos]
    return EncodedDataset(
        features=features, labels=data.labels, groups=groups,
        column_names=data.column_names, protected=data.protected,
        protected_column_index=data.protected_column_index,
        numeric_columns=data.numeric_columns, name=data.name, summary=data.summary
    )


def describe_groups(data: EncodedDataset, attribute: str) -> GroupBalance:
    group = data.group(attribute)
    priv, unpriv = group == 1, group == 0

    def _share(mask):
        return float(data.labels[mask].mean()) if mask.any() else 0.0

    return GroupBalance(attribute=attribute,
                        privileged_rows=int(priv.sum()), unprivileged_rows=int(unpriv.sum()),
                        privileged_favorable=_share(priv), unprivileged_favorable=_share(unpriv))
