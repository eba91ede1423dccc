# coding: utf-8

"""
Dataset spec files.

A spec is an INI document (see the bundled files in fairway/datasets/):

    [dataset]
    version = 1
    name = adult
    csv_path = adult.csv
    label_column = income
    favorable = in >50K, >50K.
    missing_token = ?
    header = false
    raw_columns = age, workclass, ...
    separator = ,
    skip_initial_space = true
    comment = |
    urls = https://... https://...

    [columns]
    age = numeric
    workclass = categorical

    [protected:sex]
    column = sex
    privileged = == Male

    [filters]
    window_low = days_b_screening_arrest >= -30
"""

import logging
import os

from typing import List

from fairway.models.config import FairwayConf
from fairway.models.dataset import ColumnKind, DatasetSpec, Predicate, ProtectedAttribute, RowFilter
from fairway.models.exceptions import SpecError
from fairway.utils.cli import strtobool

SPEC_VERSION = 1

logger = logging.getLogger('SpecFile')


def _split_list(raw: str) -> List[str]:
    return [v.strip() for v in raw.replace('\n', ',').split(',') if v.strip()]


def parse_spec(conf: FairwayConf, base_dir: str = '') -> DatasetSpec:
    if not conf.has_section('dataset'):
        raise SpecError('Spec file has no [dataset] section')
    ds = conf['dataset']

    version = int(ds.get('version', '1'))
    if version > SPEC_VERSION:
        raise SpecError(f'Spec file version {version} is newer than supported ({SPEC_VERSION})')

    for key in ('name', 'csv_path', 'label_column', 'favorable'):
        if not ds.get(key):
            raise SpecError(f'Spec file is missing required key "{key}" in [dataset]')

    if not conf.has_section('columns'):
        raise SpecError('Spec file has no [columns] section')
    columns = []
    for column, kind in conf.items('columns'):
        try:
            columns.append((column, ColumnKind(kind.strip().lower())))
        except ValueError:
            raise SpecError(f'Column "{column}" has unknown kind "{kind}" (numeric or categorical)')

    protected = []
    for section in conf.sections():
        if not section.startswith('protected:'):
            continue
        p = conf[section]
        name = section.split(':', 1)[1].strip()
        if not p.get('privileged'):
            raise SpecError(f'Protected attribute "{name}" has no "privileged" predicate')
        protected.append(ProtectedAttribute(
            name=name,
            column=p.get('column', name),
            privileged=Predicate.parse(p['privileged']),
            unprivileged=Predicate.parse(p['unprivileged']) if p.get('unprivileged') else None
        ))

    filters = []
    if conf.has_section('filters'):
        filters = [RowFilter.parse(v) for _, v in conf.items('filters')]

    csv_path = ds['csv_path']
    if base_dir and not os.path.isabs(csv_path):
        csv_path = os.path.join(base_dir, csv_path)

    comment = ds.get('comment', '').strip() or None
    return DatasetSpec(
        name=ds['name'],
        csv_path=csv_path,
        label_column=ds['label_column'],
        favorable=Predicate.parse(ds['favorable']),
        feature_columns=tuple(columns),
        protected=tuple(protected),
        missing_token=ds.get('missing_token', '?'),
        row_filters=tuple(filters),
        header=bool(strtobool(ds.get('header', 'true'))),
        raw_columns=tuple(_split_list(ds.get('raw_columns', ''))),
        separator=ds.get('separator', ',') or ',',
        skip_initial_space=bool(strtobool(ds.get('skip_initial_space', 'false'))),
        comment=comment,
        urls=tuple(ds.get('urls', '').split()),
        version=version
    )


def load_spec(path: str) -> DatasetSpec:
    if not os.path.isfile(path):
        raise SpecError(f'Spec file "{path}" does not exist')

    # "%" shows up in raw values, disable interpolation
    conf = FairwayConf(interpolation=None, comment_prefixes=(';', '#'), inline_comment_prefixes=None)
    try:
        conf.read(path)
    except Exception as e:
        raise SpecError(f'Unable to parse spec file "{path}": {e!r}')

    logger.debug(f'Loaded spec file "{path}"')
    return parse_spec(conf, base_dir=os.path.dirname(os.path.abspath(path)))


def dump_spec(spec: DatasetSpec) -> FairwayConf:
    """Inverse of `parse_spec`; csv_path is written as stored on the spec."""
    conf = FairwayConf(interpolation=None)
    conf.set('dataset', 'version', str(spec.version))
    conf.set('dataset', 'name', spec.name)
    conf.set('dataset', 'csv_path', spec.csv_path)
    conf.set('dataset', 'label_column', spec.label_column)
    conf.set('dataset', 'favorable', str(spec.favorable))
    conf.set('dataset', 'missing_token', spec.missing_token)
    conf.set('dataset', 'header', 'true' if spec.header else 'false')
    if spec.raw_columns:
        conf.set('dataset', 'raw_columns', ', '.join(spec.raw_columns))
    conf.set('dataset', 'separator', spec.separator)
    conf.set('dataset', 'skip_initial_space', 'true' if spec.skip_initial_space else 'false')
    if spec.comment:
        conf.set('dataset', 'comment', spec.comment)
    if spec.urls:
        conf.set('dataset', 'urls', ' '.join(spec.urls))

    for column, kind in spec.feature_columns:
        conf.set('columns', column, kind.value)
    for p in spec.protected:
        section = f'protected:{p.name}'
        conf.set(section, 'column', p.column)
        conf.set(section, 'privileged', str(p.privileged))
        if p.unprivileged is not None:
            conf.set(section, 'unprivileged', str(p.unprivileged))
    for i, f in enumerate(spec.row_filters):
        conf.set('filters', f'filter_{i}', str(f))
    return conf
