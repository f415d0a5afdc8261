"""
Ledger and yearly-table exports
"""

import pandas as pd

from backend.valuation.betting import DecisionEncoding, encode_choice

LEDGER_COLUMNS = ['game_id', 'year', 'choice', 'p_fav', 'p_und', 'ev_fav', 'ev_und', 'winnings']
YEARLY_COLUMNS = ['year', 'league', 'roi_pct', 'games_bet']


def ledger_frame(ledger, encoding=DecisionEncoding.ENUM) -> pd.DataFrame:
    rows = [{
        'game_id': e.game_id,
        'year': e.year,
        'choice': encode_choice(e.decision.choice, encoding),
        'p_fav': e.decision.p_favorite,
        'p_und': e.decision.p_underdog,
        'ev_fav': e.decision.ev_favorite,
        'ev_und': e.decision.ev_underdog,
        'winnings': e.winnings,
    } for e in ledger]
    return pd.DataFrame(rows, columns=LEDGER_COLUMNS)


def load_benchmark(path) -> dict[int, float]:
    """User-supplied yearly benchmark returns (year,roi_pct)"""
    frame = pd.read_csv(path)
    return {int(y): float(r) for y, r in zip(frame['year'], frame['roi_pct'])}


def yearly_frame(per_league, aggregate=None, benchmark=None) -> pd.DataFrame:
    """Long-format yearly rows; 'ALL' holds the all-leagues aggregate"""
    rows = []
    for league in sorted(per_league):
        for row in per_league[league]:
            rows.append({'year': row.year, 'league': league, 'roi_pct': row.roi_pct,
                         'games_bet': row.games_bet})
    for row in aggregate or []:
        rows.append({'year': row.year, 'league': 'ALL', 'roi_pct': row.roi_pct,
                     'games_bet': row.games_bet})
    frame = pd.DataFrame(rows, columns=YEARLY_COLUMNS)
    if benchmark:
        frame['benchmark_roi_pct'] = frame['year'].map(benchmark)
    return frame.sort_values(['year', 'league'], ascending=[False, True], kind='mergesort')


def yearly_panel(frame: pd.DataFrame) -> pd.DataFrame:
    """Wide layout: one row per year, one ROI column per league"""
    if frame.empty:
        return frame
    panel = frame.pivot(index='year', columns='league', values='roi_pct').round(2)
    sizes = frame[frame['league'] == 'ALL'].set_index('year')['games_bet']
    panel['Sample Size'] = sizes
    if 'benchmark_roi_pct' in frame.columns:
        panel['Benchmark'] = frame.groupby('year')['benchmark_roi_pct'].first()
    return panel.sort_index(ascending=False).reset_index()
