# coding: utf-8

import re

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from fairway.models.exceptions import (
    LengthMismatch, NonBinaryProtected, NonNumericValue, SpecError, UnknownAttribute
)


class ColumnKind(str, Enum):
    NUMERIC = 'numeric'
    CATEGORICAL = 'categorical'


_NUMERIC_OPS = {'<', '<=', '>', '>='}
_PREDICATE_RE = re.compile(r'^\s*(not in|in|==|!=|<=|>=|<|>)\s*(.*?)\s*$')


@dataclass(frozen=True)
class Predicate:
    """
    Test applied to a single raw (string) cell value.

    Text form is "<op> <operand>", e.g. "== Male", "in A91, A93, A94", "< 60".
    """
    op: str
    operand: Tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> 'Predicate':
        m = _PREDICATE_RE.match(text or '')
        if not m or not m.group(2):
            raise SpecError(f'Invalid predicate "{text}", expected "<op> <value>"')
        op, rest = m.group(1), m.group(2)
        if op in ('in', 'not in'):
            operand = tuple(v.strip() for v in rest.split(',') if v.strip())
        else:
            operand = (rest,)

        if op in _NUMERIC_OPS:
            try:
                float(operand[0])
            except ValueError:
                raise SpecError(f'Predicate "{text}" compares against non-numeric value "{operand[0]}"')
        return cls(op=op, operand=operand)

    @property
    def is_numeric(self) -> bool:
        return self.op in _NUMERIC_OPS

    def __call__(self, raw: str) -> bool:
        if self.op == '==':
            return raw == self.operand[0]
        elif self.op == '!=':
            return raw != self.operand[0]
        elif self.op == 'in':
            return raw in self.operand
        elif self.op == 'not in':
            return raw not in self.operand

        try:
            value = float(raw)
        except ValueError:
            raise NonNumericValue(f'Cannot compare non-numeric value "{raw}" with "{self}"')
        bound = float(self.operand[0])
        if self.op == '<':
            return value < bound
        elif self.op == '<=':
            return value <= bound
        elif self.op == '>':
            return value > bound
        return value >= bound

    def __str__(self):
        return f'{self.op} {", ".join(self.operand)}'


@dataclass(frozen=True)
class ProtectedAttribute:
    name: str
    column: str
    privileged: Predicate
    # when given, every value must satisfy exactly one of the two predicates
    unprivileged: Optional[Predicate] = None

    def is_privileged(self, raw: str) -> bool:
        try:
            priv = self.privileged(raw)
        except NonNumericValue:
            raise NonBinaryProtected(f'Protected attribute "{self.name}": value "{raw}" '
                                     f'cannot be tested against "{self.privileged}"')
        if self.unprivileged is not None:
            unpriv = self.unprivileged(raw)
            if priv == unpriv:
                raise NonBinaryProtected(f'Protected attribute "{self.name}": value "{raw}" maps to '
                                         f'{"both groups" if priv else "neither group"}')
        return priv


@dataclass(frozen=True)
class RowFilter:
    column: str
    predicate: Predicate

    @classmethod
    def parse(cls, text: str) -> 'RowFilter':
        parts = text.strip().split(None, 1)
        if len(parts) != 2:
            raise SpecError(f'Invalid row filter "{text}", expected "<column> <op> <value>"')
        return cls(column=parts[0], predicate=Predicate.parse(parts[1]))

    def __str__(self):
        return f'{self.column} {self.predicate}'


@dataclass(frozen=True)
class DatasetSpec:
    """
    Declarative schema of one tabular dataset.
    """
    name: str
    csv_path: str
    label_column: str
    favorable: Predicate
    feature_columns: Tuple[Tuple[str, ColumnKind], ...]
    protected: Tuple[ProtectedAttribute, ...]
    missing_token: str = '?'
    row_filters: Tuple[RowFilter, ...] = ()
    # source file layout
    header: bool = True
    raw_columns: Tuple[str, ...] = ()
    separator: str = ','
    skip_initial_space: bool = False
    comment: Optional[str] = None
    urls: Tuple[str, ...] = ()
    version: int = 1

    def __post_init__(self):
        if not 1 <= len(self.protected) <= 2:
            raise SpecError(f'Dataset "{self.name}" must declare one or two protected attributes, '
                            f'got {len(self.protected)}')
        feature_names = [c for c, _ in self.feature_columns]
        if self.label_column in feature_names:
            raise SpecError(f'Label column "{self.label_column}" must not be a feature column')
        if len(set(feature_names)) != len(feature_names):
            raise SpecError(f'Dataset "{self.name}" lists a feature column twice')
        names = [p.name for p in self.protected]
        if len(set(names)) != len(names) or len({p.column for p in self.protected}) != len(names):
            raise SpecError(f'Dataset "{self.name}" has duplicate protected attributes')
        if not self.header and not self.raw_columns:
            raise SpecError(f'Dataset "{self.name}" has no header row, raw_columns must be given')

    @property
    def protected_names(self) -> List[str]:
        return [p.name for p in self.protected]

    def attribute(self, name: str) -> ProtectedAttribute:
        for p in self.protected:
            if p.name == name:
                return p
        raise UnknownAttribute(f'Dataset "{self.name}" has no protected attribute "{name}" '
                               f'(available: {", ".join(self.protected_names)})')

    @property
    def used_columns(self) -> List[str]:
        cols = [c for c, _ in self.feature_columns]
        cols += [p.column for p in self.protected if p.column not in cols]
        cols.append(self.label_column)
        return cols


@dataclass(frozen=True)
class IngestSummary:
    rows_read: int
    rows_dropped_filter: int
    rows_dropped_missing: int
    d: int

    def to_json(self) -> Dict:
        return dict(rows_read=self.rows_read, rows_dropped_filter=self.rows_dropped_filter,
                    rows_dropped_missing=self.rows_dropped_missing, d=self.d)


def _frozen(a: np.ndarray, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    """
    Numeric feature matrix, binary labels (1 = favorable) and per-row group
    indicators (1 = privileged), one indicator column per protected attribute.
    Arrays are read-only; derived datasets are always copies.
    """
    features: np.ndarray
    labels: np.ndarray
    groups: np.ndarray
    column_names: Tuple[str, ...]
    protected: Tuple[str, ...]
    protected_column_index: Tuple[int, ...]
    numeric_columns: Tuple[int, ...] = ()
    name: str = ''
    summary: Optional[IngestSummary] = field(default=None, compare=False)

    def __post_init__(self):
        features = _frozen(self.features, np.float64)
        if features.ndim != 2:
            features = features.reshape(len(features), -1)
        labels = _frozen(self.labels, np.int8).reshape(-1)
        groups = _frozen(self.groups, np.int8)
        if groups.ndim == 1:
            groups = groups.reshape(-1, 1)
            groups.setflags(write=False)
        n = features.shape[0]
        if labels.shape[0] != n or groups.shape[0] != n:
            raise LengthMismatch(f'features have {n} rows, labels {labels.shape[0]}, groups {groups.shape[0]}')
        if features.shape[1] != len(self.column_names):
            raise LengthMismatch(f'{features.shape[1]} feature columns but {len(self.column_names)} names')
        if groups.shape[1] != len(self.protected) or len(self.protected_column_index) != len(self.protected):
            raise LengthMismatch('group indicators do not match the protected attributes')
        if not np.all(np.isfinite(features)):
            raise NonNumericValue('encoded features contain non-finite values')
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'groups', groups)
        object.__setattr__(self, 'column_names', tuple(self.column_names))
        object.__setattr__(self, 'protected', tuple(self.protected))
        object.__setattr__(self, 'protected_column_index', tuple(int(i) for i in self.protected_column_index))
        object.__setattr__(self, 'numeric_columns', tuple(int(i) for i in self.numeric_columns))

    def __len__(self):
        return self.features.shape[0]

    def equals(self, other: 'EncodedDataset') -> bool:
        return (self.column_names == other.column_names and self.protected == other.protected
                and self.protected_column_index == other.protected_column_index
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.groups, other.groups))

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def attribute_position(self, attribute: str) -> int:
        try:
            return self.protected.index(attribute)
        except ValueError:
            raise UnknownAttribute(f'Unknown protected attribute "{attribute}" '
                                   f'(available: {", ".join(self.protected)})')

    def group(self, attribute: str) -> np.ndarray:
        return self.groups[:, self.attribute_position(attribute)]

    def indicator_column(self, attribute: str) -> int:
        return self.protected_column_index[self.attribute_position(attribute)]

    def subset(self, rows) -> 'EncodedDataset':
        rows = np.asarray(rows, dtype=np.int64)
        return replace(self, features=self.features[rows], labels=self.labels[rows],
                       groups=self.groups[rows], summary=None)

    def with_features(self, features: np.ndarray) -> 'EncodedDataset':
        return replace(self, features=features)

    def without_protected(self, attributes=None) -> np.ndarray:
        """Feature matrix with the indicator columns of `attributes` (default: all) removed."""
        attributes = self.protected if attributes is None else attributes
        drop = sorted(self.indicator_column(a) for a in attributes)
        return np.delete(self.features, drop, axis=1)


@dataclass(frozen=True)
class Standardization:
    """Per-column z-score constants fitted on the train split."""
    columns: Tuple[int, ...]
    mean: Tuple[float, ...]
    scale: Tuple[float, ...]

    def apply(self, data: EncodedDataset) -> EncodedDataset:
        if not self.columns:
            return data
        features = data.features.copy()
        cols = list(self.columns)
        features[:, cols] = (features[:, cols] - np.asarray(self.mean)) / np.asarray(self.scale)
        return data.with_features(features)

    def to_json(self) -> Dict:
        return dict(columns=list(self.columns), mean=list(self.mean), scale=list(self.scale))


@dataclass(frozen=True)
class SplitTriple:
    train: EncodedDataset
    validation: EncodedDataset
    test: EncodedDataset
    seed: int
    standardization: Standardization
    fractions: Tuple[float, float, float] = (0.70, 0.15, 0.15)

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)


@dataclass(frozen=True)
class GroupBalance:
    """Row count and favorable-label share of each group of one protected attribute."""
    attribute: str
    privileged_rows: int
    unprivileged_rows: int
    privileged_favorable: float
    unprivileged_favorable: float
