# coding: utf-8

import logging
import os
import textwrap

import numpy as np
import pytest

from fairway.models.dataset import EncodedDataset

TOY_SPEC = """
[dataset]
version = 1
name = toy
csv_path = toy.csv
label_column = outcome
favorable = == yes
missing_token = ?
header = true
separator = ,

[columns]
age = numeric
band = categorical
score = numeric
sex = categorical

[protected:sex]
column = sex
privileged = == M
unprivileged = == F

[protected:race]
column = race
privileged = == W
"""


def make_biased(n=400, seed=7, bias=1.5, two_attributes=False) -> EncodedDataset:
    """
    Two numeric features plus protected indicator column(s); the label depends on
    the features and, through `bias`, on the first protected indicator.
    """
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 2))
    sex = (rng.random(n) < 0.5).astype(float)
    logit = 1.2 * x[:, 0] - 0.8 * x[:, 1] + bias * (sex - 0.5) + rng.normal(scale=0.7, size=n)
    labels = (logit > 0).astype(int)

    columns = [x, sex[:, None]]
    names = ['x0', 'x1', 'sex']
    groups = [sex]
    protected = ['sex']
    if two_attributes:
        race = (rng.random(n) < 0.6).astype(float)
        columns.append(race[:, None])
        names.append('race')
        groups.append(race)
        protected.append('race')

    return EncodedDataset(
        features=np.hstack(columns),
        labels=labels,
        groups=np.column_stack(groups),
        column_names=tuple(names),
        protected=tuple(protected),
        protected_column_index=tuple(range(2, 2 + len(protected))),
        numeric_columns=(0, 1),
        name='biased',
    )


def write_toy_csv(path, n=240, seed=3):
    """CSV matching TOY_SPEC with a couple of rows carrying the missing token."""
    rng = np.random.default_rng(seed)
    lines = ['age,band,score,sex,race,outcome']
    for i in range(n):
        age = int(rng.integers(18, 80))
        band = ['low', 'mid', 'high'][int(rng.integers(0, 3))]
        score = round(float(rng.normal(50, 10)), 3)
        sex = 'M' if rng.random() < 0.5 else 'F'
        race = 'W' if rng.random() < 0.6 else 'B'
        z = (score - 50) / 10 + (0.8 if sex == 'M' else -0.8) + rng.normal(scale=0.8)
        outcome = 'yes' if z > 0 else 'no'
        if i in (5, 17):
            score = '?'
        lines.append(f'{age},{band},{score},{sex},{race},{outcome}')
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path


@pytest.fixture
def biased():
    return make_biased()


@pytest.fixture
def biased_two():
    return make_biased(two_attributes=True)


@pytest.fixture
def toy_spec_file(tmp_path):
    write_toy_csv(tmp_path / 'toy.csv')
    spec_path = tmp_path / 'toy.ini'
    spec_path.write_text(textwrap.dedent(TOY_SPEC), encoding='utf-8')
    return spec_path


@pytest.fixture
def fairway_home(tmp_path, monkeypatch):
    """Isolated app config directory."""
    home = tmp_path / 'config'
    monkeypatch.setenv('FAIRWAY_CONFIG_PATH', str(home))
    return home


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for h in list(root.handlers):
        root.removeHandler(h)
    for h in handlers:
        root.addHandler(h)
    root.setLevel(level)


def data_file_present(path: str) -> bool:
    return os.path.isfile(path)
