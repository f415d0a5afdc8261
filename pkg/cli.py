"""
linecheck - command-line interface

    python cli.py validate --data nfl.csv
    python cli.py backtest --data nfl.csv --model simple --epsilon 0.34 --ev-threshold 0.013
    python cli.py optimize --data nfl.csv,nba.csv --model weighted
    python cli.py bootstrap --data nfl.csv --iterations 10000 --seed 7
    python cli.py baseline --data nfl.csv --kind moneyline --theta 0.67
    python cli.py density --input outputs/bootstrap_NFL.csv --x opt_epsilon --y opt_roi --ash
    python cli.py synth --seed 3 --n-games 5000
    python cli.py replay --manifest outputs/manifest.json

Every command writes its files plus a manifest.json (resolved parameters,
seed, input and output digests) to --out, default $LINECHECK_OUTPUT_DIR.
"""

import json
import logging
import os
import shutil
import sys
import tempfile

import fire
from fire.core import FireExit
import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from backend import __version__
from backend.backtest.engine import aggregate_yearly, run_backtest, yearly_breakdown
from backend.backtest.export import ledger_frame, load_benchmark, yearly_frame, yearly_panel
from backend.backtest.pricing import price_games
from backend.baselines.randomized import BaselineConfig, BaselineKind, run_baseline
from backend.core.models import ProbabilityModel, StrategyParams
from backend.core.rng import resolve_seed
from backend.density.histograms import ash2d, ash_frame, histogram, histogram_frame
from backend.density.svg import ash_svg, histogram_svg
from backend.errors import (
    EmptyDataset, InvalidSpec, LinecheckError, ParseError, ReplayMismatch, ValidationError
)
from backend.ingest.loader import load_datasets, save_dataset
from backend.reports import file_digest, to_jsonable, write_json, write_table
from backend.search.bootstrap import bootstrap as run_bootstrap, load_samples, samples_frame
from backend.search.grid import Grid, PricedArrays, default_grid, search_arrays
from backend.search.intervals import (
    IntervalMethod, Sided, bonferroni_report, summarize_bootstrap
)
from backend.search.staged import staged_optimization
from backend.search.synth import SynthSpec, synth_market
from backend.valuation.betting import DecisionEncoding
from backend.winprob.spread_index import build_index, dump_index
import config.settings as settings

logger = logging.getLogger('linecheck.cli')

MANIFEST = 'manifest.json'
TABLE_EXT = {'csv': 'csv', 'text': 'txt'}


def _paths(data):
    if data is None or data == '':
        raise ParseError("--data is required")
    items = data if isinstance(data, (list, tuple)) else str(data).split(',')
    return [os.path.abspath(str(p).strip()) for p in items if str(p).strip()]


def _table_format(fmt):
    if fmt not in TABLE_EXT:
        raise ValidationError(f"--format must be one of {', '.join(TABLE_EXT)}, got {fmt!r}")
    return fmt


def _validated(factory, **kwargs):
    """Build a pydantic model, reporting bad flags as validation errors"""
    try:
        return factory(**kwargs)
    except PydanticValidationError as e:
        raise ValidationError(str(e).replace('\n', '; '))


def _epsilon(value):
    if value is None or str(value).lower() == 'none':
        return None
    return float(value)


class RunRecorder:
    """Collects the output files of one command and writes its manifest"""

    def __init__(self, command, out, params, inputs=()):
        self.command = command
        self.out = os.path.abspath(out or settings.OUTPUTS_DIR)
        self.params = params
        self.inputs = [p for p in inputs if p]
        self.outputs = []
        os.makedirs(self.out, exist_ok=True)

    def path(self, name):
        self.outputs.append(name)
        return os.path.join(self.out, name)

    def table(self, frame, stem, fmt):
        return write_table(frame, self.path(f"{stem}.{TABLE_EXT[fmt]}"), fmt)

    def json(self, report, name):
        return write_json(report, self.path(name))

    def finish(self):
        manifest = {
            'command': self.command,
            'version': __version__,
            'params': self.params,
            'inputs': {p: file_digest(p) for p in self.inputs},
            'outputs': {n: file_digest(os.path.join(self.out, n)) for n in sorted(set(self.outputs))},
        }
        write_json(manifest, os.path.join(self.out, MANIFEST))
        logger.info("✅ %s wrote %d file(s) to %s", self.command, len(manifest['outputs']), self.out)
        return manifest


class LinecheckCLI:
    """Leakage-free moneyline backtesting"""

    def _dataset(self, paths, league, workers):
        dataset = load_datasets(paths, workers=workers)
        if league:
            dataset = dataset.for_league(league)
            if not dataset.games:
                raise EmptyDataset(f"no games for league {league}")
        if not dataset.games:
            raise EmptyDataset("dataset holds no priceable games")
        return dataset

    def _grid(self, arrays, ev_max, epsilon_max, epsilon_step, ev_step):
        if ev_max is None:
            return default_grid(arrays, epsilon_max, epsilon_step, ev_step)
        return Grid.build(float(ev_max), epsilon_max=epsilon_max, epsilon_step=epsilon_step,
                          ev_step=ev_step)

    def _dump_index(self, index, run):
        dump_index(index, run.path('spread_index.json'))

    def validate(self, data, league=None, out=None, workers=settings.WORKERS):
        """Parse and validate dataset files; prints a summary to stdout"""
        paths = _paths(data)
        params = dict(data=paths, league=league, workers=workers)
        run = RunRecorder('validate', out, params, paths)
        dataset = self._dataset(paths, league, workers)
        summary = {
            'games': len(dataset),
            'quotes': sum(len(g.quotes) for g in dataset.games),
            'leagues': {tag: len(ds) for tag, ds in dataset.by_league().items()},
            'first_start': dataset.games[0].start_time.isoformat(),
            'last_start': dataset.games[-1].start_time.isoformat(),
        }
        run.json(summary, 'validation.json')
        run.finish()
        print(json.dumps(summary, indent=2, sort_keys=True))

    def backtest(self, data, model='simple', epsilon=0.0, ev_threshold=0.0, league=None,
                 pooled=False, benchmark=None, decision_encoding='enum', dump_index=False,
                 out=None, format='csv', workers=settings.WORKERS):
        """Run the betting rule at fixed (epsilon, EV threshold); --epsilon none disables the band"""
        paths = _paths(data)
        fmt = _table_format(format)
        benchmark = os.path.abspath(benchmark) if benchmark else None
        encoding = DecisionEncoding(decision_encoding)
        strategy = _validated(StrategyParams, epsilon=_epsilon(epsilon),
                              ev_threshold=float(ev_threshold), model=model)
        params = dict(data=paths, model=strategy.model.value, epsilon=strategy.epsilon,
                      ev_threshold=strategy.ev_threshold, league=league, pooled=bool(pooled),
                      benchmark=benchmark, decision_encoding=encoding.value,
                      dump_index=bool(dump_index), format=fmt, workers=workers)
        run = RunRecorder('backtest', out, params, paths + [benchmark])

        dataset = self._dataset(paths, league, workers)
        index = build_index(dataset, pooled=bool(pooled))
        report = run_backtest(dataset, strategy, index)
        if dump_index:
            self._dump_index(index, run)

        by_league = {}
        for entry in report.ledger:
            by_league.setdefault(entry.league, []).append(entry)
        per_league = {tag: yearly_breakdown(entries) for tag, entries in by_league.items()}
        yearly = yearly_frame(per_league, aggregate_yearly(per_league),
                              load_benchmark(benchmark) if benchmark else None)

        run.json(report, 'backtest_report.json')
        run.table(ledger_frame(report.ledger, encoding), 'ledger', fmt)
        run.table(yearly_panel(yearly) if fmt == 'text' else yearly, 'yearly', fmt)
        run.finish()

    def optimize(self, data, model='simple', league=None, pooled=False, epsilon_max=0.5,
                 epsilon_step=0.01, ev_max=None, ev_step=0.001, dump_index=False, out=None,
                 format='csv', workers=settings.WORKERS):
        """Plain EV, best epsilon at tau=0, and best (epsilon, tau) per league"""
        paths = _paths(data)
        fmt = _table_format(format)
        model = ProbabilityModel(model)
        params = dict(data=paths, model=model.value, league=league, pooled=bool(pooled),
                      epsilon_max=epsilon_max, epsilon_step=epsilon_step, ev_max=ev_max,
                      ev_step=ev_step, dump_index=bool(dump_index), format=fmt, workers=workers)
        run = RunRecorder('optimize', out, params, paths)

        dataset = self._dataset(paths, league, workers)
        index = build_index(dataset, pooled=bool(pooled))
        if dump_index:
            self._dump_index(index, run)
        panels, rows = [], []
        for tag, subset in dataset.by_league().items():
            priced = price_games(subset, index, model)
            arrays = PricedArrays.from_priced(priced)
            grid = self._grid(arrays, ev_max, epsilon_max, epsilon_step, ev_step)
            panel = staged_optimization(subset, grid, model, index, priced=priced)
            panels.append(panel)
            for stage in ('plain_ev', 'epsilon_only', 'full'):
                row = getattr(panel, stage)
                rows.append({'league': tag, 'model': model.value, 'stage': stage,
                             'games_analyzed': panel.games_analyzed, **row.model_dump()})
            result = search_arrays(arrays, grid)
            run.table(_grid_frame(result), f"grid_{tag}", 'csv')

        run.json(panels, 'optimize_panel.json')
        run.table(pd.DataFrame(rows), 'optimize_panel', fmt)
        run.finish()

    def bootstrap(self, data, model='simple', iterations=10_000, seed=None, league=None,
                  pooled=False, level=0.95, alpha=0.05, epsilon_max=0.5, epsilon_step=0.01,
                  ev_max=None, ev_step=0.001, out=None, format='csv', workers=settings.WORKERS):
        """Bootstrap the optimum per league, then interval and joint-test reports"""
        paths = _paths(data)
        fmt = _table_format(format)
        model = ProbabilityModel(model)
        seed = resolve_seed(seed)
        params = dict(data=paths, model=model.value, iterations=int(iterations), seed=seed,
                      league=league, pooled=bool(pooled), level=level, alpha=alpha,
                      epsilon_max=epsilon_max, epsilon_step=epsilon_step, ev_max=ev_max,
                      ev_step=ev_step, format=fmt, workers=workers)
        run = RunRecorder('bootstrap', out, params, paths)

        dataset = self._dataset(paths, league, workers)
        index = build_index(dataset, pooled=bool(pooled))
        leagues = dataset.by_league()
        joint_level = 1.0 - alpha / len(leagues)
        intervals, one_sided = [], []
        for tag, subset in leagues.items():
            priced = price_games(subset, index, model)
            grid = self._grid(PricedArrays.from_priced(priced), ev_max, epsilon_max,
                              epsilon_step, ev_step)
            samples = run_bootstrap(subset, grid, model, int(iterations), seed, index=index,
                                    workers=workers, priced=priced)
            frame = samples_frame(samples)
            run.table(frame, f"bootstrap_{tag}", 'csv')
            labels = dict(league=tag, model=model.value)
            intervals += summarize_bootstrap(frame, level, IntervalMethod.PERCENTILE, Sided.TWO, **labels)
            intervals += summarize_bootstrap(frame, level, IntervalMethod.HIGH_DENSITY, Sided.TWO, **labels)
            lower = summarize_bootstrap(frame, joint_level, IntervalMethod.PERCENTILE,
                                        Sided.ONE_LOWER, **labels)
            intervals += lower
            one_sided += lower

        run.json(intervals, 'intervals.json')
        run.table(pd.DataFrame(to_jsonable(intervals)), 'intervals', fmt)
        run.json(bonferroni_report(one_sided, alpha=alpha, leagues=list(leagues)), 'bonferroni.json')
        run.finish()

    def baseline(self, data, kind='spread', theta=None, replications=10_000, seed=None,
                 league=None, level=0.95, out=None, format='csv', workers=settings.WORKERS):
        """Randomized control strategies (spread coin flip, theta-weighted moneyline)"""
        paths = _paths(data)
        fmt = _table_format(format)
        seed = resolve_seed(seed)
        kind = _baseline_kind(kind, theta)
        config = _validated(BaselineConfig.for_kind, kind=kind, theta=theta,
                            replications=int(replications), rng_seed=seed)
        params = dict(data=paths, kind=kind.value, theta=config.theta,
                      replications=config.replications, seed=seed, league=league, level=level,
                      format=fmt, workers=workers)
        run = RunRecorder('baseline', out, params, paths)

        dataset = self._dataset(paths, league, workers)
        summaries = [run_baseline(subset, config, workers=workers, level=level)
                     for subset in dataset.by_league().values()]
        run.json(summaries, 'baseline_summary.json')
        rows = [dict(s.model_dump(mode='json', exclude={'ci95'}), ci_low=s.ci95[0], ci_high=s.ci95[1])
                for s in summaries]
        run.table(pd.DataFrame(rows), 'baseline_summary', fmt)
        run.finish()

    def density(self, input, x='opt_roi', y=None, ash=False, shifts=None, bins=None, width=None,
                svg=False, out=None):
        """Histogram of one bootstrap column; --ash adds the bivariate density of x and y"""
        path = os.path.abspath(input)
        shifts = int(shifts or settings.DEFAULT_DENSITY_PARAMS['shifts'])
        params = dict(input=path, x=x, y=y, ash=bool(ash), shifts=shifts, bins=bins, width=width,
                      svg=bool(svg))
        run = RunRecorder('density', out, params, [path])

        samples = load_samples(path)
        for column in (x, y):
            if column is not None and column not in samples.columns:
                raise ParseError(f"{path} has no column {column!r}")
        hist = histogram(samples[x].to_numpy(), width_override=width)
        run.table(histogram_frame(hist), f"histogram_{x}", 'csv')
        if svg:
            histogram_svg(hist, run.path(f"histogram_{x}.svg"), xlabel=x)
        if ash:
            if y is None:
                raise InvalidSpec("--ash needs a --y column")
            grid = ash2d(samples[x].to_numpy(), samples[y].to_numpy(),
                         bins=(int(bins), int(bins)) if bins else None, shifts=(shifts, shifts))
            run.table(ash_frame(grid), f"ash_{x}_{y}", 'csv')
            if svg:
                ash_svg(grid, run.path(f"ash_{x}_{y}.svg"), xlabel=x, ylabel=y)
        run.finish()

    def synth(self, seed=None, spec=None, n_games=1000, spread_probs=None, vig=0.045,
              soft_margin=0.1, soft_fraction=0.2, tie_rate=0.0, league='SYN',
              dataset_format='csv', out=None):
        """Generate a synthetic market with a planted mispricing"""
        seed = resolve_seed(seed)
        spec_path = os.path.abspath(spec) if spec else None
        if spread_probs is not None:
            spread_probs = {str(k): float(v) for k, v in dict(spread_probs).items()}
        if spec_path:
            with open(spec_path, encoding='utf-8') as f:
                synth_spec = SynthSpec.parse(json.load(f))
        else:
            raw = dict(league=league, n_games=n_games, vig=vig, soft_margin=soft_margin,
                       soft_fraction=soft_fraction, tie_rate=tie_rate)
            if spread_probs is not None:
                raw['spread_probs'] = spread_probs
            synth_spec = SynthSpec.parse(raw)
        params = dict(seed=seed, spec=spec_path, n_games=n_games, spread_probs=spread_probs,
                      vig=vig, soft_margin=soft_margin, soft_fraction=soft_fraction,
                      tie_rate=tie_rate, league=league, dataset_format=dataset_format)
        run = RunRecorder('synth', out, params, [spec_path])

        dataset = synth_market(synth_spec, seed)
        save_dataset(dataset, run.path(f"synth.{dataset_format}"), dataset_format)
        run.json(synth_spec, 'synth_spec.json')
        run.finish()

    def replay(self, manifest, workers=None):
        """Re-run a manifest into a scratch directory and compare output digests"""
        with open(manifest, encoding='utf-8') as f:
            recorded = json.load(f)
        for path, digest in recorded['inputs'].items():
            if file_digest(path) != digest:
                raise ReplayMismatch(f"input {path} changed since the recorded run")
        params = dict(recorded['params'])
        if workers is not None and 'workers' in params:
            params['workers'] = int(workers)

        scratch = tempfile.mkdtemp(prefix='linecheck-replay-')
        try:
            getattr(self, recorded['command'])(out=scratch, **params)
            with open(os.path.join(scratch, MANIFEST), encoding='utf-8') as f:
                replayed = json.load(f)['outputs']
        finally:
            shutil.rmtree(scratch, ignore_errors=True)

        diff = sorted(name for name in set(recorded['outputs']) | set(replayed)
                      if recorded['outputs'].get(name) != replayed.get(name))
        if diff:
            raise ReplayMismatch(f"outputs differ from the manifest: {', '.join(diff)}")
        logger.info("✅ replay of %s matches all %d output(s)", recorded['command'], len(replayed))


def _baseline_kind(kind, theta):
    """'spread' and 'moneyline' shorthands; a moneyline theta other than 0.5 is the tilted variant"""
    kind = str(kind).lower()
    if kind == 'spread':
        return BaselineKind.SPREAD_EQUAL
    if kind == 'moneyline':
        if theta is None or float(theta) == BaselineKind.MONEYLINE_EQUAL.default_theta:
            return BaselineKind.MONEYLINE_EQUAL
        return BaselineKind.MONEYLINE_TILTED
    try:
        return BaselineKind(kind)
    except ValueError:
        raise ValidationError(f"unknown baseline kind {kind!r}")


def _grid_frame(result) -> pd.DataFrame:
    """Long-format grid: one row per (epsilon, tau) cell"""
    grid = result.grid
    rows = []
    for i, eps in enumerate(grid.epsilon_values):
        for j, tau in enumerate(grid.ev_values):
            rows.append({
                'epsilon': eps,
                'ev_threshold': tau,
                'total_return': result.tr_matrix[i, j],
                'roi_pct': result.roi_matrix[i, j],
                'games_bet': int(result.bets_matrix[i, j]),
                'empty': bool(result.empty_mask[i, j]),
            })
    return pd.DataFrame(rows)


def main(argv=None) -> int:
    """Run one command; returns 0 on success, 2 on bad input, 1 on I/O failure"""
    settings.configure_logging()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        fire.Fire(LinecheckCLI, command=argv, name='linecheck')
    except FireExit as e:
        return e.code if isinstance(e.code, int) else 2
    except LinecheckError as e:
        logger.error("❌ %s", e)
        return e.exit_code
    except OSError as e:
        logger.error("❌ %s", e)
        return 1
    except ValueError as e:
        logger.error("❌ %s", e)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
