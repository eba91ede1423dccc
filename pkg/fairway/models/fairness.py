# coding: utf-8

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from fairway.models.dataset import EncodedDataset


@dataclass(frozen=True)
class GroupConfusion:
    """
    Confusion counts per group, privileged (p) and unprivileged (u).
    The favorable class (1) is the positive class.
    """
    tn_p: int = 0
    fp_p: int = 0
    fn_p: int = 0
    tp_p: int = 0
    tn_u: int = 0
    fp_u: int = 0
    fn_u: int = 0
    tp_u: int = 0

    @property
    def total(self) -> int:
        return (self.tn_p + self.fp_p + self.fn_p + self.tp_p
                + self.tn_u + self.fp_u + self.fn_u + self.tp_u)

    def swapped(self) -> 'GroupConfusion':
        """Same counts with the group roles exchanged."""
        return GroupConfusion(tn_p=self.tn_u, fp_p=self.fp_u, fn_p=self.fn_u, tp_p=self.tp_u,
                              tn_u=self.tn_p, fp_u=self.fp_p, fn_u=self.fn_p, tp_u=self.tp_p)


@dataclass(frozen=True)
class MeasureSet:
    recall: float
    false_alarm: float
    aod: float
    eod: float

    def to_json(self) -> Dict:
        return dict(recall=self.recall, false_alarm=self.false_alarm, aod=self.aod, eod=self.eod)

    @classmethod
    def from_json(cls, json):
        return cls(recall=float(json['recall']), false_alarm=float(json['false_alarm']),
                   aod=float(json['aod']), eod=float(json['eod']))


class FilterMode(str, Enum):
    SINGLE = 'single'
    JOINT = 'joint'


@dataclass(frozen=True, eq=False)
class FilterOutcome:
    retained: EncodedDataset
    dropped_indices: Tuple[int, ...]
    dropped_fraction: float
    mode: FilterMode
    attributes: Tuple[str, ...] = ()
    # rows per group model, keyed "sex=1" or "sex=1,race=0"
    group_sizes: Dict[str, int] = field(default_factory=dict)

    @property
    def dropped_count(self) -> int:
        return len(self.dropped_indices)

    @property
    def retained_indices(self) -> np.ndarray:
        n = len(self.retained) + self.dropped_count
        return np.setdiff1d(np.arange(n), np.asarray(self.dropped_indices, dtype=np.int64))


@dataclass(frozen=True)
class SituationResult:
    total: int
    flipped: int
    fail_rate: float
    attribute: str

    def to_json(self) -> Dict:
        return dict(total=self.total, flipped=self.flipped, fail_rate=self.fail_rate, attribute=self.attribute)
