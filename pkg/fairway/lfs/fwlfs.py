# coding: utf-8

import csv
import json
import logging
import os

from dataclasses import replace
from typing import Dict, List, Optional

from fairway.data.specfile import load_spec
from fairway.lfs.utils import clean_filename, list_files, locked_write
from fairway.models.config import FairwayConf
from fairway.models.dataset import DatasetSpec
from fairway.models.exceptions import IoFailure, SpecError, UnknownDataset
from fairway.models.report import FairnessReport, MEDIAN_FIELDS

FILELOCK_DEBUG = False

BUNDLED_SPEC_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'datasets')


class FairwayLFS:
    """
    Local file layout: app config, downloaded datasets, user dataset specs and reports.
    """

    def __init__(self, config_file=None):
        self.log = logging.getLogger('FWLFS')

        if config_path := os.environ.get('FAIRWAY_CONFIG_PATH'):
            self.path = config_path
        elif config_path := os.environ.get('XDG_CONFIG_HOME'):
            self.path = os.path.join(config_path, 'fairway')
        else:
            self.path = os.path.expanduser('~/.config/fairway')

        self.config = FairwayConf(comment_prefixes='/', allow_no_value=True)

        if config_file:
            # if user specified a valid relative/absolute path use that,
            # otherwise create file in fairway config directory
            if os.path.exists(config_file):
                self.config_path = os.path.abspath(config_file)
            else:
                self.config_path = os.path.join(self.path, clean_filename(config_file))
            self.log.info(f'Using non-default config file "{self.config_path}"')
        else:
            self.config_path = os.path.join(self.path, 'config.ini')

        if not FILELOCK_DEBUG:
            # Prevent filelock logger from spamming debug output
            logging.getLogger('filelock').setLevel(logging.INFO)

        # try loading config
        try:
            self.config.read(self.config_path)
        except Exception as e:
            self.log.error(f'Unable to read configuration file, please ensure that file is valid! '
                           f'(Error: {repr(e)})')
            self.log.warning('Continuing with blank config in safe-mode...')
            self.config.read_only = True

        # make sure "Fairway" section exists
        if 'Fairway' not in self.config:
            self.config.add_section('Fairway')

        # Add options with explainers
        self.config.set_documented('log_level', 'info', 'Log level, "info" or "debug"')
        self.config.set_documented('data_dir', os.path.join(self.path, 'data'),
                                   'Directory dataset files are downloaded to and looked up in')

    @property
    def data_dir(self) -> str:
        return os.path.expanduser(self.config.get('Fairway', 'data_dir', fallback=os.path.join(self.path, 'data')))

    @property
    def spec_dir(self) -> str:
        return os.path.join(self.path, 'datasets')

    def save_config(self):
        # do not save if in read-only mode or file hasn't changed
        if self.config.read_only or not self.config.modified:
            return

        # if config file has been modified externally, back-up the user-modified version before writing
        if self.config.modtime and os.path.exists(self.config_path):
            if int(os.stat(self.config_path).st_mtime) != self.config.modtime:
                new_filename = f'config.{int(os.stat(self.config_path).st_mtime)}.ini'
                self.log.warning(f'Configuration file has been modified while fairway was running, '
                                 f'user-modified config will be renamed to "{new_filename}"...')
                os.rename(self.config_path, os.path.join(os.path.dirname(self.config_path), new_filename))

        try:
            with locked_write(self.config_path) as cf:
                self.config.write(cf)
        except IoFailure as e:
            self.log.warning(f'Saving configuration failed: {e}')

    def spec_files(self) -> Dict[str, str]:
        """Known spec files by dataset name; user specs shadow bundled ones."""
        specs = {}
        for path in list_files(BUNDLED_SPEC_DIR, '.ini') + list_files(self.spec_dir, '.ini'):
            specs[os.path.splitext(os.path.basename(path))[0]] = path
        return specs

    def resolve_spec_path(self, name_or_path: str) -> str:
        if os.path.isfile(name_or_path):
            return os.path.abspath(name_or_path)
        specs = self.spec_files()
        if name_or_path in specs:
            return specs[name_or_path]
        raise UnknownDataset(f'"{name_or_path}" is neither a spec file nor a known dataset '
                             f'(known: {", ".join(sorted(specs))})')

    def load_spec(self, name_or_path: str) -> DatasetSpec:
        """Load a spec; a csv_path that does not exist next to the spec is looked up in the data dir."""
        spec = load_spec(self.resolve_spec_path(name_or_path))
        if not os.path.exists(spec.csv_path):
            candidate = os.path.join(self.data_dir, os.path.basename(spec.csv_path))
            if os.path.exists(candidate) or os.path.dirname(spec.csv_path).startswith(BUNDLED_SPEC_DIR):
                spec = replace(spec, csv_path=candidate)
        return spec

    def list_specs(self) -> List[DatasetSpec]:
        specs = []
        for name, path in sorted(self.spec_files().items()):
            try:
                specs.append(self.load_spec(path))
            except SpecError as e:
                self.log.warning(f'Skipping invalid spec file "{path}": {e}')
        return specs

    def write_report(self, report: FairnessReport, path: str, with_csv: bool = False):
        with locked_write(path) as f:
            f.write(json.dumps(report.to_json(), indent=2, sort_keys=True))
            f.write('\n')
        self.log.info(f'Report written to "{path}"')

        if with_csv:
            csv_path = os.path.splitext(path)[0] + '.csv'
            write_report_csv(report, csv_path)
            self.log.info(f'CSV summary written to "{csv_path}"')

    @staticmethod
    def read_report(path: str) -> FairnessReport:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return FairnessReport.from_json(json.load(f))
        except (OSError, ValueError, KeyError) as e:
            raise IoFailure(f'Unable to read report "{path}": {e!r}')


def write_report_csv(report: FairnessReport, path: str):
    header = ['repeat', 'seed', 'chosen_config'] + list(MEDIAN_FIELDS)
    with locked_write(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for r in report.per_repeat:
            flat = r.flat()
            writer.writerow([r.repeat, r.seed, '' if r.chosen_config is None else r.chosen_config] +
                            [_csv_value(flat[k]) for k in MEDIAN_FIELDS])
        writer.writerow(['median', '', ''] + [_csv_value(report.medians.get(k)) for k in MEDIAN_FIELDS])


def _csv_value(v: Optional[float]) -> str:
    return '' if v is None else repr(float(v))
