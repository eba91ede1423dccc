#!/usr/bin/env python3
# coding: utf-8

import argparse
import json
import logging
import os

from dataclasses import asdict
from logging.handlers import QueueHandler, QueueListener
from queue import Queue
from sys import exit, stdout

import numpy as np

from fairway import __version__, __codename__
from fairway.core import FairwayCore
from fairway.models.exceptions import FairwayError, InvalidParameter
from fairway.models.fairness import FilterMode
from fairway.models.flash import FlashBudget, ObjectiveWeights
from fairway.models.report import RunConfig, RunMode
from fairway.utils.cli import format_table, parse_float_list

logging.basicConfig(
    format='[%(name)s] %(levelname)s: %(message)s',
    level=logging.INFO
)
logger = logging.getLogger('cli')


class FairwayCLI:
    def __init__(self, override_config=None):
        self.core = FairwayCore(override_config)
        self.logger = logging.getLogger('cli')
        self.logging_queue = None

    def setup_threaded_logging(self):
        """Route every record through a queue so output from worker threads does not interleave."""
        self.logging_queue = Queue(-1)
        shandler = logging.StreamHandler()
        sformatter = logging.Formatter('[%(name)s] %(levelname)s: %(message)s')
        shandler.setFormatter(sformatter)
        ql = QueueListener(self.logging_queue, shandler)
        ql.start()

        root = logging.getLogger()
        for handler in list(root.handlers):
            root.removeHandler(handler)
        root.addHandler(QueueHandler(self.logging_queue))
        return ql

    def _print_json(self, data, pretty=False):
        if pretty:
            print(json.dumps(data, indent=2, sort_keys=True))
        else:
            print(json.dumps(data))

    def _max_workers(self, args):
        workers = getattr(args, 'max_workers', None)
        if workers is None:
            return
        if workers < 1:
            raise InvalidParameter(f'--max-workers must be >= 1, got {workers}')
        self.core.worker_override = workers

    def run(self, args):
        self._max_workers(args)
        space = self.core.default_space()
        try:
            weights = ObjectiveWeights.from_list(parse_float_list(args.weights, 4)) \
                if args.weights else self.core.default_weights()
        except ValueError as e:
            raise InvalidParameter(f'Invalid --weights "{args.weights}": {e}')

        budget = self.core.default_budget()
        if args.initial_pool is not None or args.life is not None:
            budget = FlashBudget(
                initial_pool=args.initial_pool if args.initial_pool is not None else budget.initial_pool,
                life=args.life if args.life is not None else budget.life)

        config = RunConfig(
            spec_path=args.spec,
            attribute=args.attribute,
            mode=RunMode(args.mode),
            repeats=args.repeats if args.repeats is not None else self.core.default_repeats(),
            base_seed=args.seed if args.seed is not None else self.core.default_seed(),
            weights=weights,
            filter_mode=FilterMode(args.filter_mode),
            budget=budget,
            output_path=args.out,
            space=space,
            surrogate=self.core.default_surrogate(),
        )
        report = self.core.run(config, dump_dir=args.dump_models)

        if args.out:
            self.core.emit_report(report, args.out, with_csv=args.csv)
        elif args.csv:
            self.logger.warning('--csv has no effect without --out')

        if args.json or not args.out:
            self._print_json(report.to_json(), args.pretty_json)
            return

        rows = [[r.repeat, r.seed, r.measures.recall, r.measures.false_alarm, r.measures.aod,
                 r.measures.eod, r.dropped_fraction, r.situation_fail_pre, r.situation_fail_post]
                for r in report.per_repeat]
        m = report.medians
        rows.append(['median', '', m['recall'], m['false_alarm'], m['aod'], m['eod'],
                     m['dropped_fraction'], m['situation_fail_pre'], m['situation_fail_post']])
        print(format_table(['repeat', 'seed', 'recall', 'false_alarm', 'aod', 'eod',
                            'dropped', 'sit_pre', 'sit_post'], rows))

    def list_datasets(self, args):
        specs = self.core.lfs.list_specs()
        if args.json:
            return self._print_json([dict(name=s.name, csv_path=s.csv_path,
                                          present=os.path.exists(s.csv_path),
                                          protected=s.protected_names,
                                          fetchable=bool(s.urls)) for s in specs], args.pretty_json)

        print(format_table(['name', 'protected', 'present', 'fetchable', 'file'],
                           [[s.name, ', '.join(s.protected_names), 'yes' if os.path.exists(s.csv_path) else 'no',
                             'yes' if s.urls else 'no', s.csv_path] for s in specs]))

    def describe_dataset(self, args):
        data, balances = self.core.describe(args.name)
        if args.json:
            return self._print_json(dict(name=data.name, rows=len(data), d=data.n_features,
                                         ingest=data.summary.to_json() if data.summary else None,
                                         groups=[asdict(b) for b in balances]), args.pretty_json)

        print(f'Dataset "{data.name}": {len(data)} rows, {data.n_features} features, '
              f'{float(np.mean(data.labels)):.1%} favorable')
        print(format_table(['attribute', 'privileged', 'unprivileged', 'fav_privileged', 'fav_unprivileged'],
                           [[b.attribute, b.privileged_rows, b.unprivileged_rows,
                             b.privileged_favorable, b.unprivileged_favorable] for b in balances]))

    def fetch_datasets(self, args):
        if args.all:
            names = [s.name for s in self.core.lfs.list_specs() if s.urls]
        elif args.name:
            names = [args.name]
        else:
            self.logger.error('Specify a dataset name or --all.')
            return

        for name in names:
            path = self.core.fetch_dataset(name, force=args.force)
            if path:
                self.logger.info(f'Dataset "{name}" is ready.')

    def datasets(self, args):
        if args.action == 'list':
            self.list_datasets(args)
        elif args.action == 'describe':
            if not args.name:
                raise InvalidParameter('"datasets describe" needs a dataset name')
            self.describe_dataset(args)
        elif args.action == 'fetch':
            self.fetch_datasets(args)

    def filter(self, args):
        self._max_workers(args)
        outcomes = self.core.filter_table(args.spec, args.attribute, FilterMode(args.filter_mode),
                                          repeats=args.repeats, base_seed=args.seed)
        if args.json:
            return self._print_json([dict(seed=seed, dropped=o.dropped_count, dropped_fraction=o.dropped_fraction,
                                          train_rows=len(o.retained) + o.dropped_count, groups=o.group_sizes)
                                     for seed, o in outcomes], args.pretty_json)

        rows = [[seed, len(o.retained) + o.dropped_count, o.dropped_count, o.dropped_fraction]
                for seed, o in outcomes]
        rows.append(['median', '', float(np.median([o.dropped_count for _, o in outcomes])),
                     float(np.median([o.dropped_fraction for _, o in outcomes]))])
        print(format_table(['seed', 'train_rows', 'dropped', 'fraction'], rows))

    def audit(self, args):
        results = self.core.audit(args.spec, args.attribute, seed=args.seed, with_filter=args.filter)
        if args.json:
            return self._print_json({k: v.to_json() for k, v in results.items()}, args.pretty_json)

        print(format_table(['split', 'rows', 'flipped', 'fail_rate'],
                           [[name, r.total, r.flipped, r.fail_rate] for name, r in results.items()]))


def main():
    # Set output encoding to UTF-8 if not outputting to a terminal
    if not stdout.isatty() and hasattr(stdout, 'reconfigure'):
        stdout.reconfigure(encoding='utf-8')

    parser = argparse.ArgumentParser(description=f'Fairway v{__version__} - "{__codename__}"')

    # general arguments
    parser.add_argument('-v', '--debug', dest='debug', action='store_true', help='Set loglevel to debug')
    parser.add_argument('-V', '--version', dest='version', action='store_true', help='Print version and exit')
    parser.add_argument('-c', '--config-file', dest='config_file', action='store', metavar='<path/name>',
                        help='Use a different app config file')
    parser.add_argument('-J', '--pretty-json', dest='pretty_json', action='store_true',
                        help='Pretty-print JSON')

    subparsers = parser.add_subparsers(title='Commands', dest='subparser_name', metavar='<command>')
    run_parser = subparsers.add_parser('run', help='Run a pipeline arm over repeated splits and write a report')
    datasets_parser = subparsers.add_parser('datasets', help='List, describe or download datasets')
    filter_parser = subparsers.add_parser('filter', help='Show how many training rows the ambiguity filter drops')
    audit_parser = subparsers.add_parser('audit', help='Situation-test the default learner')

    # spec/attribute are shared by every pipeline command
    for p in (run_parser, filter_parser, audit_parser):
        p.add_argument('--spec', dest='spec', required=True, metavar='<name/path>',
                       help='Bundled dataset name or path to a dataset spec file')
        p.add_argument('--attribute', dest='attribute', required=True, metavar='<name>',
                       help='Protected attribute to evaluate')
        p.add_argument('--json', dest='json', action='store_true', help='Output in JSON format')

    run_parser.add_argument('--mode', dest='mode', default=RunMode.FAIRWAY.value,
                            choices=[m.value for m in RunMode],
                            help='Pipeline arm (default: fairway)')
    run_parser.add_argument('--repeats', dest='repeats', type=int, metavar='<n>',
                            help='Number of repeated splits (default: 10)')
    run_parser.add_argument('--seed', dest='seed', type=int, metavar='<seed>',
                            help='Base seed, repeat i uses seed + i (default: 0)')
    run_parser.add_argument('--filter-mode', dest='filter_mode', default=FilterMode.SINGLE.value,
                            choices=[m.value for m in FilterMode],
                            help='Filter on the chosen attribute alone or on both protected attributes')
    run_parser.add_argument('--weights', dest='weights', metavar='<wr,wf,wa,we>',
                            help='Objective weights for recall, false alarm, AOD and EOD (default: 1,1,1,1)')
    run_parser.add_argument('--out', dest='out', metavar='<path>', help='Write the JSON report to this file')
    run_parser.add_argument('--csv', dest='csv', action='store_true',
                            help='Also write a CSV summary next to the report')
    run_parser.add_argument('--initial-pool', dest='initial_pool', type=int, metavar='<n>',
                            help='Configurations evaluated before the surrogate takes over (default: 20)')
    run_parser.add_argument('--life', dest='life', type=int, metavar='<n>',
                            help='Non-improving evaluations tolerated before stopping (default: 5)')
    run_parser.add_argument('--max-workers', dest='max_workers', type=int, metavar='<n>',
                            help='Worker threads for repeats, group models and initial evaluations')
    run_parser.add_argument('--dump-models', dest='dump_models', metavar='<dir>',
                            help='Write the final model of every repeat as JSON into this directory')

    datasets_parser.add_argument('action', choices=['list', 'describe', 'fetch'],
                                 metavar='<list|describe|fetch>', help='Action')
    datasets_parser.add_argument('name', nargs='?', metavar='<name>', help='Dataset name or spec path')
    datasets_parser.add_argument('--all', dest='all', action='store_true', help='Fetch every fetchable dataset')
    datasets_parser.add_argument('--force', dest='force', action='store_true',
                                 help='Download again even if the file is present')
    datasets_parser.add_argument('--json', dest='json', action='store_true', help='Output in JSON format')

    filter_parser.add_argument('--filter-mode', dest='filter_mode', default=FilterMode.SINGLE.value,
                               choices=[m.value for m in FilterMode], help='Single or joint filtering')
    filter_parser.add_argument('--repeats', dest='repeats', type=int, default=1, metavar='<n>',
                               help='Number of splits to filter (default: 1)')
    filter_parser.add_argument('--seed', dest='seed', type=int, default=0, metavar='<seed>',
                               help='Base seed (default: 0)')
    filter_parser.add_argument('--max-workers', dest='max_workers', type=int, metavar='<n>',
                               help='Worker threads for group model fits')

    audit_parser.add_argument('--seed', dest='seed', type=int, default=0, metavar='<seed>',
                              help='Split seed (default: 0)')
    audit_parser.add_argument('--filter', dest='filter', action='store_true',
                              help='Also audit the learner trained on filtered rows')

    args = parser.parse_args()

    if args.version:
        print(f'fairway version "{__version__}", codename "{__codename__}"')
        exit(0)

    if not args.subparser_name:
        print(parser.format_help())
        return

    try:
        cli = FairwayCLI(override_config=args.config_file)
    except FairwayError as e:
        logger.error(str(e))
        exit(e.exit_code)
    ql = cli.setup_threaded_logging()

    config_ll = cli.core.lfs.config.get('Fairway', 'log_level', fallback='info')
    if config_ll == 'debug' or args.debug:
        logging.getLogger().setLevel(level=logging.DEBUG)
        # keep requests quiet
        logging.getLogger('requests').setLevel(logging.WARNING)
        logging.getLogger('urllib3').setLevel(logging.WARNING)
        logging.getLogger('filelock').setLevel(logging.WARNING)

    exit_code = 0
    try:
        if args.subparser_name == 'run':
            cli.run(args)
        elif args.subparser_name == 'datasets':
            cli.datasets(args)
        elif args.subparser_name == 'filter':
            cli.filter(args)
        elif args.subparser_name == 'audit':
            cli.audit(args)
    except KeyboardInterrupt:
        logger.info('Command was aborted via KeyboardInterrupt, cleaning up...')
        exit_code = 1
    except FairwayError as e:
        logger.error(str(e))
        exit_code = e.exit_code

    cli.core.lfs.save_config()
    ql.stop()
    exit(exit_code)


if __name__ == '__main__':
    main()
