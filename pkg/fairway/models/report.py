# coding: utf-8

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from fairway.models.exceptions import InvalidParameter
from fairway.models.fairness import FilterMode, MeasureSet
from fairway.models.flash import ConfigSpace, FlashBudget, ObjectiveWeights, SurrogateParams, TraceEntry

REPORT_SCHEMA = 1


class RunMode(str, Enum):
    BASELINE = 'baseline'
    PREPROCESS = 'preprocess'
    OPTIMIZE = 'optimize'
    FAIRWAY = 'fairway'
    # baseline learner trained without the protected indicator column(s)
    BLIND = 'blind'

    @property
    def filters(self) -> bool:
        return self in (RunMode.PREPROCESS, RunMode.FAIRWAY)

    @property
    def optimizes(self) -> bool:
        return self in (RunMode.OPTIMIZE, RunMode.FAIRWAY)


@dataclass(frozen=True)
class RunConfig:
    spec_path: str
    attribute: str
    mode: RunMode = RunMode.FAIRWAY
    repeats: int = 10
    base_seed: int = 0
    weights: ObjectiveWeights = ObjectiveWeights()
    filter_mode: FilterMode = FilterMode.SINGLE
    budget: FlashBudget = FlashBudget()
    output_path: Optional[str] = None
    space: ConfigSpace = ConfigSpace()
    surrogate: SurrogateParams = SurrogateParams()

    def __post_init__(self):
        if self.repeats < 1:
            raise InvalidParameter(f'repeats must be >= 1, got {self.repeats}')
        if self.base_seed < 0:
            raise InvalidParameter(f'base_seed must be >= 0, got {self.base_seed}')
        try:
            object.__setattr__(self, 'mode', RunMode(self.mode))
            object.__setattr__(self, 'filter_mode', FilterMode(self.filter_mode))
        except ValueError as e:
            raise InvalidParameter(str(e))

    def to_json(self) -> Dict:
        # output_path is deliberately left out so reports do not depend on where they are written
        return dict(
            spec=self.spec_path,
            attribute=self.attribute,
            mode=self.mode.value,
            repeats=self.repeats,
            base_seed=self.base_seed,
            weights=self.weights.to_list(),
            filter_mode=self.filter_mode.value,
            budget=dict(initial_pool=self.budget.initial_pool, life=self.budget.life),
            space={name: list(values) for name, values in self.space.axes},
            surrogate=dict(min_samples_split=self.surrogate.min_samples_split,
                           max_depth=self.surrogate.max_depth),
        )

    @classmethod
    def from_json(cls, json):
        return cls(
            spec_path=json['spec'],
            attribute=json['attribute'],
            mode=RunMode(json['mode']),
            repeats=int(json['repeats']),
            base_seed=int(json['base_seed']),
            weights=ObjectiveWeights.from_list(json['weights']),
            filter_mode=FilterMode(json['filter_mode']),
            budget=FlashBudget(**json['budget']),
            space=ConfigSpace(axes=tuple((k, tuple(v)) for k, v in json['space'].items())),
            surrogate=SurrogateParams(**json['surrogate']),
        )


@dataclass(frozen=True)
class RepeatResult:
    repeat: int
    seed: int
    measures: MeasureSet
    split_sizes: Tuple[int, int, int]
    dropped_fraction: float = 0.0
    dropped_count: int = 0
    # situation test fail rates; "pre" is the learner on unfiltered train rows,
    # "post" the learner on filtered rows, both audited on the full train split
    situation_fail_pre: Optional[float] = None
    situation_fail_post: Optional[float] = None
    situation_fail_pre_test: Optional[float] = None
    situation_fail_post_test: Optional[float] = None
    chosen_config: Optional[int] = None
    chosen_values: Optional[Dict] = None
    trace: Tuple[TraceEntry, ...] = ()

    def to_json(self, space: ConfigSpace = None) -> Dict:
        return dict(
            repeat=self.repeat,
            seed=self.seed,
            measures=self.measures.to_json(),
            split_sizes=list(self.split_sizes),
            dropped_fraction=self.dropped_fraction,
            dropped_count=self.dropped_count,
            situation_fail_pre=self.situation_fail_pre,
            situation_fail_post=self.situation_fail_post,
            situation_fail_pre_test=self.situation_fail_pre_test,
            situation_fail_post_test=self.situation_fail_post_test,
            chosen_config=self.chosen_config,
            chosen_values=self.chosen_values,
            trace=[e.to_json(space) for e in self.trace],
        )

    @classmethod
    def from_json(cls, json):
        return cls(
            repeat=int(json['repeat']),
            seed=int(json['seed']),
            measures=MeasureSet.from_json(json['measures']),
            split_sizes=tuple(json['split_sizes']),
            dropped_fraction=float(json['dropped_fraction']),
            dropped_count=int(json['dropped_count']),
            situation_fail_pre=json.get('situation_fail_pre'),
            situation_fail_post=json.get('situation_fail_post'),
            situation_fail_pre_test=json.get('situation_fail_pre_test'),
            situation_fail_post_test=json.get('situation_fail_post_test'),
            chosen_config=json.get('chosen_config'),
            chosen_values=json.get('chosen_values'),
            trace=tuple(TraceEntry(config=e['config'], score=e['score'], predicted=e['predicted'],
                                   measures=MeasureSet.from_json(e['measures']) if 'measures' in e else None)
                        for e in json.get('trace', [])),
        )

    def flat(self) -> Dict:
        """Scalar fields for median aggregation and CSV export."""
        return dict(
            recall=self.measures.recall,
            false_alarm=self.measures.false_alarm,
            aod=self.measures.aod,
            eod=self.measures.eod,
            dropped_fraction=self.dropped_fraction,
            situation_fail_pre=self.situation_fail_pre,
            situation_fail_post=self.situation_fail_post,
            situation_fail_pre_test=self.situation_fail_pre_test,
            situation_fail_post_test=self.situation_fail_post_test,
        )


MEDIAN_FIELDS = ('recall', 'false_alarm', 'aod', 'eod', 'dropped_fraction',
                 'situation_fail_pre', 'situation_fail_post',
                 'situation_fail_pre_test', 'situation_fail_post_test')


def component_medians(repeats: List[RepeatResult]) -> Dict[str, Optional[float]]:
    """Median of every field across repeats independently; fields absent in every repeat stay None."""
    medians = {}
    for name in MEDIAN_FIELDS:
        values = [r.flat()[name] for r in repeats]
        values = [v for v in values if v is not None]
        medians[name] = float(np.median(values)) if values else None
    return medians


@dataclass(frozen=True)
class FairnessReport:
    tool_version: str
    run_config: RunConfig
    dataset: str
    per_repeat: Tuple[RepeatResult, ...]
    medians: Dict[str, Optional[float]] = field(default_factory=dict)
    ingest: Optional[Dict] = None
    schema: int = REPORT_SCHEMA

    @classmethod
    def assemble(cls, tool_version: str, run_config: RunConfig, dataset: str,
                 repeats: List[RepeatResult], ingest: Optional[Dict] = None) -> 'FairnessReport':
        repeats = sorted(repeats, key=lambda r: r.repeat)
        return cls(tool_version=tool_version, run_config=run_config, dataset=dataset,
                   per_repeat=tuple(repeats), medians=component_medians(repeats), ingest=ingest)

    def to_json(self) -> Dict:
        return dict(
            schema=self.schema,
            tool_version=self.tool_version,
            dataset=self.dataset,
            run_config=self.run_config.to_json(),
            ingest=self.ingest,
            per_repeat=[r.to_json(self.run_config.space) for r in self.per_repeat],
            medians=self.medians,
        )

    @classmethod
    def from_json(cls, json):
        return cls(
            schema=int(json.get('schema', REPORT_SCHEMA)),
            tool_version=json['tool_version'],
            dataset=json['dataset'],
            run_config=RunConfig.from_json(json['run_config']),
            ingest=json.get('ingest'),
            per_repeat=tuple(RepeatResult.from_json(r) for r in json['per_repeat']),
            medians=dict(json['medians']),
        )
