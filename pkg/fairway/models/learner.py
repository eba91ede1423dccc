# coding: utf-8

import json

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from fairway.models.exceptions import InvalidParameter


@dataclass(frozen=True)
class LrHyper:
    """
    Logistic regression training parameters.
    Defaults are the usual library defaults (C=1.0, L2 penalty, 100 iterations).
    """
    c: float = 1.0
    max_iter: int = 100
    tol: float = 1e-4

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParameter(f'c must be positive, got {self.c}')
        if int(self.max_iter) < 1:
            raise InvalidParameter(f'max_iter must be >= 1, got {self.max_iter}')
        if not self.tol > 0:
            raise InvalidParameter(f'tol must be positive, got {self.tol}')

    def to_json(self) -> Dict:
        return dict(c=self.c, max_iter=self.max_iter, tol=self.tol)

    @classmethod
    def from_json(cls, json):
        return cls(c=float(json['c']), max_iter=int(json['max_iter']), tol=float(json['tol']))


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """
    Fitted binary logistic regression. weights[0] is the intercept (implicit
    constant-1 feature), weights[1:] pair with the feature columns.
    """
    weights: np.ndarray
    hyper: LrHyper
    converged: bool
    iterations_used: int
    # objective value at the start and after every iteration
    loss_history: Tuple[float, ...] = ()

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)

    @property
    def n_features(self) -> int:
        return self.weights.shape[0] - 1

    def to_json(self) -> Dict:
        return dict(weights=[float(w) for w in self.weights], hyper=self.hyper.to_json(),
                    converged=self.converged, iterations_used=self.iterations_used)

    @classmethod
    def from_json(cls, json):
        return cls(weights=np.asarray(json['weights'], dtype=np.float64),
                   hyper=LrHyper.from_json(json['hyper']),
                   converged=bool(json['converged']), iterations_used=int(json['iterations_used']))

    def dump(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_json(), f, indent=2, sort_keys=True)


@dataclass(frozen=True)
class CartLeaf:
    value: float
    count: int


@dataclass(frozen=True)
class CartSplit:
    feature: int
    threshold: float
    left: 'CartNode'
    right: 'CartNode'


CartNode = Union[CartLeaf, CartSplit]


@dataclass(frozen=True)
class CartTree:
    root: CartNode
    n_features: int
    min_samples_split: int = 4
    # None means unbounded
    max_depth: Optional[int] = 12

    def leaves(self) -> List[CartLeaf]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, CartLeaf):
                out.append(node)
            else:
                stack.extend((node.right, node.left))
        return out

    @property
    def depth(self) -> int:
        def _depth(node):
            if isinstance(node, CartLeaf):
                return 0
            return 1 + max(_depth(node.left), _depth(node.right))
        return _depth(self.root)
