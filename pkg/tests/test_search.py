import itertools
import math

import numpy as np
import pandas as pd
import pytest

from backend.backtest import PricedGame, price_games, run_backtest
from backend.core.models import GameVictor, StrategyParams
from backend.errors import EmptySamples, InvalidGrid, InvalidSpec, MissingLeague
from backend.ingest.loader import save_dataset
from backend.search import (
    Grid, IntervalMethod, IntervalReport, IntervalVariable, PricedArrays, Sided, SynthSpec,
    american_from_profit, bonferroni_report, bootstrap, default_grid, grid_search, hdi_interval,
    percentile_interval, samples_frame, search_arrays, staged_optimization, summarize_bootstrap,
    synth_market,
)
from backend.search.synth import SHARP_CASINO, SOFT_CASINO
from backend.winprob import build_index
from helpers import make_dataset, make_game, random_dataset, random_priced, seeded

PLACEHOLDER = make_dataset([make_game('x', 0, 1, 0)])
SMALL_GRID = Grid.build(ev_max=0.3, epsilon_max=0.5, epsilon_step=0.1, ev_step=0.05)


# grid ---------------------------------------------------------------------

def test_grid_validation():
    assert Grid.build(ev_max=0.0123).ev_values[-1] == 0.012
    assert Grid.build(ev_max=0.01).shape == (51, 11)
    with pytest.raises(ValueError):
        Grid(epsilon_values=(0.1, 0.2), ev_values=(0.0,))
    with pytest.raises(ValueError):
        Grid(epsilon_values=(0.0, 0.015), ev_values=(0.0,))
    with pytest.raises(ValueError):
        Grid(epsilon_values=(0.0, 0.6), ev_values=(0.0,))
    with pytest.raises(InvalidGrid):
        Grid.build(ev_max=0.1, epsilon_step=-0.1)


def test_default_grid_rounds_ev_max_up():
    priced = [PricedGame(game_id='a', league='NFL', year=2015, victor=GameVictor.FAVORITE,
                         p_favorite=0.5, p_underdog=0.5, ev_favorite=0.0123, ev_underdog=-0.2,
                         payout_favorite=1.0246, payout_underdog=0.6)]
    grid = default_grid(PricedArrays.from_priced(priced))
    assert grid.ev_values[-1] == 0.013
    assert grid.epsilon_values[-1] == 0.5


def test_singleton_grid_equals_backtest():
    rng = seeded(1)
    for _ in range(20):
        priced = random_priced(rng, 200)
        result = search_arrays(PricedArrays.from_priced(priced), Grid(epsilon_values=(0.0,), ev_values=(0.0,)))
        report = run_backtest(PLACEHOLDER, StrategyParams(epsilon=0.0, ev_threshold=0.0), None, priced=priced)
        assert result.optimum.total_return == report.total_return
        assert result.optimum.games_bet == report.games_bet


def test_every_cell_matches_backtest():
    rng = seeded(2)
    for _ in range(10):
        priced = random_priced(rng, 150)
        result = search_arrays(PricedArrays.from_priced(priced), SMALL_GRID)
        for (i, eps), (j, tau) in itertools.product(enumerate(SMALL_GRID.epsilon_values),
                                                    enumerate(SMALL_GRID.ev_values)):
            report = run_backtest(PLACEHOLDER, StrategyParams(epsilon=eps, ev_threshold=tau), None,
                                  priced=priced)
            assert result.tr_matrix[i, j] == report.total_return
            assert result.bets_matrix[i, j] == report.games_bet
            assert result.empty_mask[i, j] == (report.games_bet == 0)
            if report.games_bet:
                assert result.roi_matrix[i, j] == pytest.approx(report.roi_pct)
            else:
                assert result.roi_matrix[i, j] == 0.0


def test_argmax_dominates_and_prefers_lowest_cell():
    rng = seeded(3)
    for _ in range(30):
        result = search_arrays(PricedArrays.from_priced(random_priced(rng, 80)), SMALL_GRID)
        tr = result.tr_matrix
        assert tr[result.argmax] == tr.max()
        assert tr[result.argmax] >= tr[0, 0]
        first = tuple(int(v) for v in np.argwhere(tr == tr.max())[0])
        assert result.argmax == first
        assert result.optimum.epsilon == SMALL_GRID.epsilon_values[first[0]]
        assert 0.0 <= result.optimum.frac_bet <= 1.0


def _filter_fixture():
    """Favorite bets at EV ~0.05 all lose and those at EV ~0.1 all win"""
    games = []
    for i, (payout, victor) in enumerate([(1.625, GameVictor.UNDERDOG)] * 5 + [(1.75, GameVictor.FAVORITE)] * 5):
        games.append(PricedGame(game_id=f"f{i}", league='NFL', year=2015, victor=victor,
                                p_favorite=0.4, p_underdog=0.6,
                                ev_favorite=0.4 * payout - 0.6, ev_underdog=0.6 * 0.5 - 0.4,
                                payout_favorite=payout, payout_underdog=0.5))
    return games


def test_threshold_filters_losing_bets():
    result = search_arrays(PricedArrays.from_priced(_filter_fixture()), Grid.build(ev_max=0.12))
    assert 0.05 <= result.optimum.ev_threshold < 0.1
    assert result.optimum.total_return == 5 * 1.75
    assert result.optimum.total_return > result.tr_matrix[0, 0] == 5 * 1.75 - 5
    assert result.optimum.epsilon == 0.0
    assert result.empty_mask[0, -1]


def test_grid_search_prices_once(spread_history):
    index = build_index(spread_history)
    direct = grid_search(spread_history, None, 'simple', index)
    cached = grid_search(spread_history, None, 'simple', index,
                         priced=price_games(spread_history, index, 'simple'))
    assert direct.optimum == cached.optimum
    assert np.array_equal(direct.tr_matrix, cached.tr_matrix)


# bootstrap ----------------------------------------------------------------

def test_bootstrap_single_game():
    dataset = make_dataset([make_game('only', 0, 24, 17)])
    (sample,) = bootstrap(dataset, None, 'simple', iterations=1, seed=0)
    assert sample.iteration == 0
    assert sample.optimum == grid_search(dataset, None, 'simple', build_index(dataset)).optimum


def test_identity_resample_reproduces_grid_search():
    dataset = random_dataset(seeded(4), 60)
    index = build_index(dataset)
    samples = bootstrap(dataset, SMALL_GRID, 'weighted', iterations=3, seed=9, index=index,
                        resampler=lambda rng, n: np.arange(n))
    expected = grid_search(dataset, SMALL_GRID, 'weighted', index).optimum
    assert all(s.optimum == expected for s in samples)


def test_bootstrap_reproducible_across_workers():
    priced = random_priced(seeded(5), 120)
    serial = bootstrap(PLACEHOLDER, SMALL_GRID, 'simple', iterations=40, seed=77, priced=priced)
    parallel = bootstrap(PLACEHOLDER, SMALL_GRID, 'simple', iterations=40, seed=77, priced=priced, workers=4)
    assert serial == parallel
    assert [s.iteration for s in serial] == list(range(40))
    assert all(0.0 <= s.optimum.frac_bet <= 1.0 for s in serial)
    frame = samples_frame(serial)
    assert list(frame.columns) == ['iteration', 'opt_roi', 'opt_epsilon', 'opt_ev_threshold', 'frac_bet']
    assert frame['opt_epsilon'].isin(SMALL_GRID.epsilon_values).all()


def test_bootstrap_rejects_bad_input():
    with pytest.raises(ValueError):
        bootstrap(PLACEHOLDER, None, 'simple', iterations=0, seed=1)


# intervals ----------------------------------------------------------------

def test_percentile_interval_type7():
    samples = np.arange(1, 1001)
    two = percentile_interval(samples, 0.95)
    assert (two.low, two.high) == (pytest.approx(25.975), pytest.approx(975.025))
    one = percentile_interval(samples, 0.99, Sided.ONE_LOWER)
    assert (one.low, one.high) == (pytest.approx(10.99), 1000.0)
    assert one.sided is Sided.ONE_LOWER


def test_constant_samples():
    for interval in (percentile_interval([3.5] * 20), hdi_interval([3.5] * 20)):
        assert (interval.low, interval.high) == (3.5, 3.5)


def test_hdi_on_skewed_samples():
    interval = hdi_interval([0.0] * 95 + [100.0] * 5, 0.95)
    assert (interval.low, interval.high) == (0.0, 0.0)
    assert interval.method is IntervalMethod.HIGH_DENSITY


def test_hdi_no_wider_than_percentile():
    rng = seeded(6)
    draws = [rng.normal, rng.exponential, rng.standard_cauchy, rng.lognormal]
    for k in range(50):
        samples = draws[k % 4](size=1000)
        hdi, pct = hdi_interval(samples, 0.95), percentile_interval(samples, 0.95)
        assert hdi.high - hdi.low <= pct.high - pct.low + 1e-12


def test_hdi_matches_brute_force():
    rng = seeded(7)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        samples = np.round(rng.gamma(2.0, size=n), 2)
        level = float(rng.choice([0.5, 0.8, 0.9, 0.95]))
        k = max(1, math.ceil(level * n - 1e-9))
        ordered = sorted(samples)
        windows = [(ordered[i + k - 1] - ordered[i], i) for i in range(n - k + 1)]
        _, best = min(windows)
        interval = hdi_interval(samples, level)
        assert (interval.low, interval.high) == (ordered[best], ordered[best + k - 1])


def test_percentile_converges_to_range():
    samples = seeded(8).normal(size=200)
    interval = percentile_interval(samples, 1 - 1e-9)
    assert interval.low == pytest.approx(samples.min(), abs=1e-6)
    assert interval.high == pytest.approx(samples.max(), abs=1e-6)


def test_interval_errors():
    with pytest.raises(EmptySamples):
        percentile_interval([])
    with pytest.raises(EmptySamples):
        hdi_interval([])
    with pytest.raises(ValueError):
        percentile_interval([1.0, 2.0], level=1.0)


def test_summarize_bootstrap():
    frame = pd.DataFrame({
        'iteration': range(100),
        'opt_roi': np.linspace(-5, 15, 100),
        'opt_epsilon': [0.1] * 100,
        'opt_ev_threshold': np.linspace(0, 0.02, 100),
        'frac_bet': [0.25] * 100,
    })
    reports = summarize_bootstrap(frame, 0.9, league='NFL', model='simple')
    by_variable = {r.variable: r for r in reports}
    assert set(by_variable) == set(IntervalVariable)
    assert (by_variable[IntervalVariable.EPSILON].low, by_variable[IntervalVariable.EPSILON].high) == (0.1, 0.1)
    assert all(r.league == 'NFL' and r.model == 'simple' for r in reports)
    hdi = summarize_bootstrap(frame, 0.9, method='HighDensity')
    assert all(r.method is IntervalMethod.HIGH_DENSITY for r in hdi)
    with pytest.raises(ValueError):
        summarize_bootstrap(frame, 0.9, method='HighDensity', sided='one_lower')


def interval(league, low, variable=IntervalVariable.ROI, level=0.99):
    return IntervalReport(league=league, model='simple', variable=variable, method=IntervalMethod.PERCENTILE,
                          level=level, sided=Sided.ONE_LOWER, low=low, high=max(low, 30.0))


def test_bonferroni_rejects_when_every_bound_is_positive():
    verdict = bonferroni_report([interval(lg, 1.5) for lg in ('NFL', 'NBA', 'NCAAF', 'NCAAB', 'WNBA')])
    assert verdict.reject
    assert verdict.per_test_level == pytest.approx(0.99)
    assert verdict.leagues == ['NBA', 'NCAAB', 'NCAAF', 'NFL', 'WNBA']


def test_bonferroni_zero_bound_fails_jointly():
    intervals = [interval('NFL', 2.0), interval('NBA', 0.0), interval('NFL', 0.05, IntervalVariable.EPSILON),
                 interval('NBA', 0.01, IntervalVariable.EPSILON)]
    verdict = bonferroni_report(intervals, alpha=0.02)
    assert not verdict.reject
    assert verdict.rejected == {'ROI': False, 'Epsilon': True}
    assert [d.positive for d in verdict.detail if d.variable is IntervalVariable.ROI] == [True, False]


def test_bonferroni_missing_leagues():
    with pytest.raises(MissingLeague):
        bonferroni_report([])
    with pytest.raises(MissingLeague):
        bonferroni_report([interval('NFL', 1.0)], leagues=['NFL', 'NBA'])
    with pytest.raises(MissingLeague):
        bonferroni_report([interval('NFL', 1.0, IntervalVariable.EPSILON)])


def test_bonferroni_warns_on_level(caplog):
    bonferroni_report([interval('NFL', 1.0, level=0.95), interval('NBA', 1.0, level=0.95)])
    assert any('Bonferroni level' in r.getMessage() for r in caplog.records)


# synthetic markets --------------------------------------------------------

def _quotes(game):
    return {q.casino_id: q for q in game.quotes}


def _overpaid_side(game):
    quotes = _quotes(game)
    sharp, soft = quotes[SHARP_CASINO], quotes[SOFT_CASINO]
    if soft.favorite_ml != sharp.favorite_ml:
        return 'favorite'
    if soft.underdog_ml != sharp.underdog_ml:
        return 'underdog'
    return None


def test_american_from_profit_favors_the_house():
    assert american_from_profit(1.1 / 0.5 - 1) == 120
    assert american_from_profit(1.1 / 0.6 - 1) == -120
    assert american_from_profit(1.0) == 100
    assert american_from_profit(0.955) == -105
    with pytest.raises(InvalidSpec):
        american_from_profit(0.0)


def test_no_margin_means_no_positive_ev():
    spec = SynthSpec(n_games=300, spread_probs={0.0: 0.5, -3.0: 0.6, -7.5: 0.75}, soft_margin=0.0,
                     soft_fraction=1.0)
    dataset = synth_market(spec, seed=2)
    for game in dataset.games:
        p = spec.spread_probs[game.quotes[0].favorite_spread]
        for quote in game.quotes:
            fav = quote.favorite_ml / 100 if quote.favorite_ml > 0 else 100 / -quote.favorite_ml
            dog = quote.underdog_ml / 100 if quote.underdog_ml > 0 else 100 / -quote.underdog_ml
            assert p * fav - (1 - p) <= 1e-12
            assert (1 - p) * dog - p <= 1e-12


def test_planted_edge_is_estimated_exactly_at_spread_zero(planted_market):
    index = build_index(planted_market)
    priced = price_games(planted_market, index)
    checked = 0
    for game, p in zip(planted_market.games, priced):
        side = _overpaid_side(game)
        if side is None or not p.priced:
            continue
        ev = p.ev_favorite if side == 'favorite' else p.ev_underdog
        assert ev == pytest.approx(0.1)
        checked += 1
    assert checked > 800


def test_planted_edge_estimate_converges():
    spec = SynthSpec(n_games=10_000, spread_probs={-3.0: 0.6}, soft_fraction=0.5)
    dataset = synth_market(spec, seed=21)
    priced = price_games(dataset, build_index(dataset))
    late = [(g, p) for g, p in zip(dataset.games[-2000:], priced[-2000:]) if _overpaid_side(g)]
    estimates = [p.ev_favorite if _overpaid_side(g) == 'favorite' else p.ev_underdog for g, p in late]
    assert np.mean(estimates) == pytest.approx(0.1, abs=0.035)


def test_synth_market_is_deterministic(tmp_path, planted_spec):
    first = synth_market(planted_spec, seed=5)
    second = synth_market(planted_spec, seed=5)
    assert first.games == second.games
    assert first.source_meta == ('synth:5',)
    assert save_dataset(first, tmp_path / 'a.csv').read_bytes() == save_dataset(second, tmp_path / 'b.csv').read_bytes()
    assert synth_market(planted_spec, seed=6).games != first.games


@pytest.mark.parametrize('raw', [
    {'spread_probs': {'3.0': 0.5}},
    {'spread_probs': {'-3.25': 0.5}},
    {'spread_probs': {'-3.0': 1.0}},
    {'spread_probs': {}},
    {'n_games': 0},
    {'soft_fraction': 1.5},
])
def test_invalid_spec(raw):
    with pytest.raises(InvalidSpec):
        SynthSpec.parse(raw)


def test_planted_edge_is_profitable_on_average():
    spec = SynthSpec(n_games=2000, spread_probs={0.0: 0.5}, soft_fraction=0.5)
    params = StrategyParams(epsilon=0.01, ev_threshold=0.0)
    rois = []
    for seed in range(10):
        dataset = synth_market(spec, seed=seed)
        rois.append(run_backtest(dataset, params, build_index(dataset)).roi_pct)
    mean = float(np.mean(rois))
    stderr = float(np.std(rois, ddof=1)) / math.sqrt(len(rois))
    assert mean > 0
    assert abs(mean - 100 * spec.soft_margin) < 3 * stderr


@pytest.mark.slow
def test_bootstrap_recovers_planted_edge():
    """Soft casino pays 2.2 on coin flips in 20% of 10,000 games, 20 markets"""
    spec = SynthSpec(n_games=10_000, spread_probs={0.0: 0.5}, soft_margin=0.1, soft_fraction=0.2)
    grid = Grid.build(ev_max=0.1, epsilon_step=0.01, ev_step=0.002)
    assert grid.shape == (51, 51)
    iterations = 200

    optimized, boot_rois, lower_bounds = [], [], []
    for seed in range(20):
        dataset = synth_market(spec, seed=seed)
        priced = price_games(dataset, build_index(dataset))
        optimized.append(grid_search(dataset, grid, 'simple', None, priced=priced).optimum.roi_pct)
        samples = bootstrap(dataset, grid, 'simple', iterations, seed=100 + seed, priced=priced,
                            workers=4)
        rois = [s.optimum.roi_pct for s in samples]
        boot_rois.append(rois)
        lower_bounds.append(percentile_interval(rois, level=0.99, sided='one_lower').low)

    assert np.mean(optimized) > 0
    # bootstrap distribution of the mean optimized ROI across the 20 markets
    mean_rois = np.mean(np.array(boot_rois), axis=0)
    assert percentile_interval(mean_rois, level=0.99, sided='one_lower').low > 0
    # a single 10,000-game market clears its own 99% bound most of the time
    assert sum(low > 0 for low in lower_bounds) >= 15


def test_staged_optimization_on_planted_market(planted_market):
    index = build_index(planted_market)
    panel = staged_optimization(planted_market, None, 'simple', index)
    assert panel.games_analyzed == len(planted_market)
    assert panel.plain_ev.epsilon is None
    assert panel.epsilon_only.ev_threshold == 0.0
    assert panel.full.total_return >= panel.epsilon_only.total_return
    assert panel.epsilon_only.total_return >= panel.plain_ev.total_return - 1e-9
    assert panel.epsilon_range == (0.0, 0.5)
    result = grid_search(planted_market, None, 'simple', index)
    assert panel.full.total_return == result.optimum.total_return
