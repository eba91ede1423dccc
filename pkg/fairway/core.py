# coding: utf-8

import logging
import os

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from fairway import __version__
from fairway.api.datasets import DatasetAPI
from fairway.data.ingest import describe_groups, load_dataset, split
from fairway.fairness.ambiguity import filter_train
from fairway.fairness.metrics import measure_predictions
from fairway.fairness.situation import situation_test
from fairway.learners.logistic import lr_fit, lr_predict
from fairway.lfs.fwlfs import FairwayLFS
from fairway.models.dataset import DatasetSpec, EncodedDataset, GroupBalance, SplitTriple
from fairway.models.exceptions import FairwayError, InvalidParameter, annotate
from fairway.models.fairness import FilterMode, FilterOutcome, SituationResult
from fairway.models.flash import ConfigSpace, FlashBudget, ObjectiveWeights, SurrogateParams
from fairway.models.learner import LogisticModel, LrHyper
from fairway.models.report import FairnessReport, RepeatResult, RunConfig, RunMode
from fairway.optimizer.flash import run_flash
from fairway.utils.cli import parse_float_list


class FairwayCore:
    """
    FairwayCore ties dataset loading, filtering, tuning and auditing together
    so the CLI only has to deal with arguments and output.
    """

    def __init__(self, override_config=None):
        self.log = logging.getLogger('Core')
        self.lfs = FairwayLFS(config_file=override_config)
        self._api = None
        self._datasets: Dict[str, Tuple[DatasetSpec, EncodedDataset]] = dict()
        # --max-workers on the command line, wins over the config value
        self.worker_override: Optional[int] = None

    @property
    def api(self) -> DatasetAPI:
        # only set up the HTTP session when something is downloaded
        if self._api is None:
            self._api = DatasetAPI()
        return self._api

    # configuration backed defaults

    def _conf_get(self, option, convert, fallback):
        return self.lfs.config.get_typed(option, convert, fallback)

    @property
    def max_workers(self) -> int:
        if self.worker_override:
            return self.worker_override
        workers = self._conf_get('max_workers', int, min(os.cpu_count() or 1, 8))
        if workers < 1:
            raise InvalidParameter(f'"max_workers" in config must be >= 1, got {workers}')
        return workers

    def default_repeats(self) -> int:
        return self._conf_get('repeats', int, 10)

    def default_seed(self) -> int:
        return self._conf_get('base_seed', int, 0)

    def default_budget(self) -> FlashBudget:
        return FlashBudget(initial_pool=self._conf_get('initial_pool', int, 20),
                           life=self._conf_get('life', int, 5))

    def default_surrogate(self) -> SurrogateParams:
        depth = self._conf_get('cart_max_depth', _optional_int, 12)
        return SurrogateParams(min_samples_split=self._conf_get('cart_min_samples_split', int, 4),
                               max_depth=depth)

    def default_space(self) -> ConfigSpace:
        conf = self.lfs.config
        return ConfigSpace.from_lists(
            c_values=conf.get_list('c_values', float),
            max_iter_values=conf.get_list('max_iter_values', lambda v: int(float(v))),
            tol_values=conf.get_list('tol_values', float),
        )

    def default_weights(self) -> ObjectiveWeights:
        weights = self._conf_get('weights', lambda v: parse_float_list(v, 4), None)
        return ObjectiveWeights.from_list(weights) if weights else ObjectiveWeights()

    # datasets

    def load(self, spec_name: str) -> Tuple[DatasetSpec, EncodedDataset]:
        """Load and encode a dataset once per core instance (encoding is deterministic)."""
        if spec_name not in self._datasets:
            spec = self.lfs.load_spec(spec_name)
            self._datasets[spec_name] = (spec, load_dataset(spec))
        return self._datasets[spec_name]

    def fetch_dataset(self, spec_name: str, force: bool = False) -> Optional[str]:
        spec = self.lfs.load_spec(spec_name)
        target = os.path.join(self.lfs.data_dir, os.path.basename(spec.csv_path))
        if os.path.exists(target) and not force:
            self.log.info(f'"{spec.name}" already present at "{target}", skipping.')
            return None
        self.api.fetch(spec, target)
        return target

    def describe(self, spec_name: str) -> Tuple[EncodedDataset, List[GroupBalance]]:
        spec, data = self.load(spec_name)
        return data, [describe_groups(data, name) for name in spec.protected_names]

    # pipeline

    def _filter(self, triple: SplitTriple, attribute: str, filter_mode: FilterMode) -> FilterOutcome:
        return filter_train(triple.train, attribute, filter_mode, LrHyper(), max_workers=self.max_workers)

    def run_repeat(self, config: RunConfig, data: EncodedDataset, repeat: int,
                   dump_dir: Optional[str] = None) -> RepeatResult:
        seed = config.base_seed + repeat
        attribute = config.attribute
        triple = split(data, seed)
        train, validation, test = triple.train, triple.validation, triple.test

        outcome = None
        fit_train = train
        if config.mode.filters:
            outcome = self._filter(triple, attribute, config.filter_mode)
            fit_train = outcome.retained

        if config.mode == RunMode.BLIND:
            model = lr_fit(train.without_protected(), train.labels, LrHyper())
            predictions = lr_predict(model, test.without_protected())
            self._dump(model, dump_dir, repeat)
            return RepeatResult(repeat=repeat, seed=seed, split_sizes=triple.sizes,
                                measures=measure_predictions(test.labels, predictions, test.group(attribute)))

        chosen, trace = None, ()
        hyper = LrHyper()
        if config.mode.optimizes:
            chosen, trace = run_flash(config.space, config.weights, config.budget, fit_train, validation,
                                      attribute, seed, config.surrogate, max_workers=self.max_workers)
            hyper = config.space.hyper(chosen)

        model = lr_fit(fit_train.features, fit_train.labels, hyper)
        predictions = lr_predict(model, test.features)
        measures = measure_predictions(test.labels, predictions, test.group(attribute))
        self._dump(model, dump_dir, repeat)

        if outcome is not None:
            reference = lr_fit(train.features, train.labels, hyper)
            pre, post = self._audit(reference, triple, attribute), self._audit(model, triple, attribute)
        else:
            pre, post = self._audit(model, triple, attribute), (None, None)

        self.log.debug(f'Repeat {repeat} (seed {seed}): recall={measures.recall:.3f} '
                       f'far={measures.false_alarm:.3f} aod={measures.aod:.3f} eod={measures.eod:.3f}')
        return RepeatResult(
            repeat=repeat,
            seed=seed,
            measures=measures,
            split_sizes=triple.sizes,
            dropped_fraction=outcome.dropped_fraction if outcome else 0.0,
            dropped_count=outcome.dropped_count if outcome else 0,
            situation_fail_pre=pre[0],
            situation_fail_post=post[0],
            situation_fail_pre_test=pre[1],
            situation_fail_post_test=post[1],
            chosen_config=chosen,
            chosen_values=config.space.values(chosen) if chosen is not None else None,
            trace=trace,
        )

    @staticmethod
    def _audit(model: LogisticModel, triple: SplitTriple, attribute: str) -> Tuple[float, float]:
        return (situation_test(model, triple.train, attribute).fail_rate,
                situation_test(model, triple.test, attribute).fail_rate)

    def _dump(self, model: LogisticModel, dump_dir: Optional[str], repeat: int):
        if not dump_dir:
            return
        os.makedirs(dump_dir, exist_ok=True)
        path = os.path.join(dump_dir, f'model_{repeat:03d}.json')
        model.dump(path)
        self.log.debug(f'Model of repeat {repeat} written to "{path}"')

    def run(self, config: RunConfig, dump_dir: Optional[str] = None) -> FairnessReport:
        spec, data = self.load(config.spec_path)
        # validate before spending time on repeats
        data.attribute_position(config.attribute)
        spec_for_report = replace(config, spec_path=spec.name)

        self.log.info(f'Running "{config.mode.value}" on "{spec.name}" / {config.attribute}, '
                      f'{config.repeats} repeat(s) from seed {config.base_seed}')

        def _repeat(i: int) -> RepeatResult:
            try:
                return self.run_repeat(config, data, i, dump_dir)
            except FairwayError as e:
                raise annotate(e, f'repeat {i}')

        with ThreadPoolExecutor(max_workers=max(1, min(self.max_workers, config.repeats))) as ex:
            results = list(ex.map(_repeat, range(config.repeats)))

        report = FairnessReport.assemble(__version__, spec_for_report, spec.name, results,
                                         ingest=data.summary.to_json() if data.summary else None)
        m = report.medians
        self.log.info(f'Medians over {config.repeats} repeat(s): recall={m["recall"]:.3f} '
                      f'false_alarm={m["false_alarm"]:.3f} aod={m["aod"]:.3f} eod={m["eod"]:.3f}')
        return report

    def emit_report(self, report: FairnessReport, path: str, with_csv: bool = False):
        self.lfs.write_report(report, path, with_csv=with_csv)

    def filter_table(self, spec_name: str, attribute: str, filter_mode: FilterMode = FilterMode.SINGLE,
                     repeats: int = 1, base_seed: int = 0) -> List[Tuple[int, FilterOutcome]]:
        _, data = self.load(spec_name)
        out = []
        for i in range(repeats):
            triple = split(data, base_seed + i)
            try:
                out.append((base_seed + i, self._filter(triple, attribute, filter_mode)))
            except FairwayError as e:
                raise annotate(e, f'repeat {i}')
        return out

    def audit(self, spec_name: str, attribute: str, seed: int = 0,
              with_filter: bool = False) -> Dict[str, SituationResult]:
        """Situation test of the default learner, optionally next to the learner trained on filtered rows."""
        _, data = self.load(spec_name)
        triple = split(data, seed)
        model = lr_fit(triple.train.features, triple.train.labels, LrHyper())
        results = {'train': situation_test(model, triple.train, attribute),
                   'test': situation_test(model, triple.test, attribute)}
        if with_filter:
            retained = self._filter(triple, attribute, FilterMode.SINGLE).retained
            filtered = lr_fit(retained.features, retained.labels, LrHyper())
            results['train_filtered'] = situation_test(filtered, triple.train, attribute)
            results['test_filtered'] = situation_test(filtered, triple.test, attribute)
        return results


def _optional_int(raw: str) -> Optional[int]:
    return None if raw.lower() in ('none', 'unbounded') else int(raw)
