# coding: utf-8

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from fairway.models.exceptions import InvalidParameter
from fairway.models.fairness import MeasureSet
from fairway.models.learner import LrHyper

DEFAULT_AXES = (
    ('c', (0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0)),
    ('max_iter', (50, 100, 200, 500)),
    ('tol', (1e-3, 1e-4, 1e-5)),
)
_HYPER_FIELDS = {'c': float, 'max_iter': int, 'tol': float}


@dataclass(frozen=True)
class ConfigSpace:
    """
    Cross product of ordered candidate lists. Configurations are numbered in
    row-major order (last axis varies fastest); a configuration's vector holds
    its position on every axis.
    """
    axes: Tuple[Tuple[str, Tuple], ...] = DEFAULT_AXES

    def __post_init__(self):
        axes = tuple((name, tuple(values)) for name, values in self.axes)
        if not axes:
            raise InvalidParameter('configuration space needs at least one axis')
        for name, values in axes:
            if not values:
                raise InvalidParameter(f'axis "{name}" has no candidate values')
            if name in _HYPER_FIELDS:
                for v in values:
                    LrHyper(**{name: _HYPER_FIELDS[name](v)})
        object.__setattr__(self, 'axes', axes)

    @classmethod
    def from_lists(cls, c_values=None, max_iter_values=None, tol_values=None) -> 'ConfigSpace':
        defaults = dict(DEFAULT_AXES)
        return cls(axes=(('c', tuple(c_values or defaults['c'])),
                         ('max_iter', tuple(max_iter_values or defaults['max_iter'])),
                         ('tol', tuple(tol_values or defaults['tol']))))

    @property
    def size(self) -> int:
        n = 1
        for _, values in self.axes:
            n *= len(values)
        return n

    def __len__(self):
        return self.size

    def vector(self, index: int) -> Tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(f'configuration {index} outside space of size {self.size}')
        out = []
        for _, values in reversed(self.axes):
            index, pos = divmod(index, len(values))
            out.append(pos)
        return tuple(reversed(out))

    def index(self, vector: Sequence[int]) -> int:
        idx = 0
        for (_, values), pos in zip(self.axes, vector):
            idx = idx * len(values) + int(pos)
        return idx

    def values(self, index: int) -> Dict:
        return {name: values[pos] for (name, values), pos in zip(self.axes, self.vector(index))}

    def hyper(self, index: int) -> LrHyper:
        kwargs = {k: _HYPER_FIELDS[k](v) for k, v in self.values(index).items() if k in _HYPER_FIELDS}
        return LrHyper(**kwargs)

    def all_vectors(self) -> List[Tuple[int, ...]]:
        return list(product(*(range(len(v)) for _, v in self.axes)))


@dataclass(frozen=True)
class ObjectiveWeights:
    w_recall: float = 1.0
    w_far: float = 1.0
    w_aod: float = 1.0
    w_eod: float = 1.0

    def __post_init__(self):
        if not any((self.w_recall, self.w_far, self.w_aod, self.w_eod)):
            raise InvalidParameter('objective weights must not all be zero')

    @classmethod
    def from_list(cls, values: Sequence[float]) -> 'ObjectiveWeights':
        if len(values) != 4:
            raise InvalidParameter(f'expected 4 objective weights (recall, false alarm, aod, eod), '
                                   f'got {len(values)}')
        return cls(*(float(v) for v in values))

    def to_list(self) -> List[float]:
        return [self.w_recall, self.w_far, self.w_aod, self.w_eod]


@dataclass(frozen=True)
class FlashBudget:
    initial_pool: int = 20
    life: int = 5

    def __post_init__(self):
        if self.initial_pool < 2:
            raise InvalidParameter(f'initial_pool must be >= 2, got {self.initial_pool}')
        if self.life < 1:
            raise InvalidParameter(f'life must be >= 1, got {self.life}')


@dataclass(frozen=True)
class SurrogateParams:
    min_samples_split: int = 4
    # None means unbounded
    max_depth: Optional[int] = 12


@dataclass
class FlashState:
    build_pool: List[Tuple[int, float]] = field(default_factory=list)
    rest_pool: List[int] = field(default_factory=list)
    life: int = 0
    evaluations_used: int = 0

    @property
    def best(self) -> Tuple[int, float]:
        # highest score, lowest configuration index on ties
        return min(self.build_pool, key=lambda e: (-e[1], e[0]))


@dataclass(frozen=True)
class TraceEntry:
    config: int
    score: float
    # None for the randomly seeded initial pool
    predicted: Optional[float] = None
    measures: Optional[MeasureSet] = None

    def to_json(self, space: ConfigSpace = None) -> Dict:
        out = dict(config=self.config, score=self.score, predicted=self.predicted)
        if space is not None:
            out['values'] = space.values(self.config)
        if self.measures is not None:
            out['measures'] = self.measures.to_json()
        return out


@dataclass(frozen=True)
class FlashResult:
    best_config: int
    best_score: float
    trace: Tuple[TraceEntry, ...]
    surrogate_rounds: int
    final_life: int

    @property
    def evaluations_used(self) -> int:
        return len(self.trace)
