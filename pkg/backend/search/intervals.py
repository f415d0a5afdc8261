"""
Bootstrap interval estimates and the Bonferroni joint test

Quantiles use linear interpolation between order statistics (type 7)
throughout.
"""

import logging
import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from backend.errors import EmptySamples, MissingLeague
from config.settings import DEFAULT_BOOTSTRAP_PARAMS

logger = logging.getLogger(__name__)


class IntervalVariable(str, Enum):
    ROI = 'ROI'
    EV_THRESHOLD = 'EVThreshold'
    EPSILON = 'Epsilon'
    FRAC_BET = 'FracBet'


# bootstrap dump column per variable
SAMPLE_COLUMN = {
    IntervalVariable.ROI: 'opt_roi',
    IntervalVariable.EV_THRESHOLD: 'opt_ev_threshold',
    IntervalVariable.EPSILON: 'opt_epsilon',
    IntervalVariable.FRAC_BET: 'frac_bet',
}


class IntervalMethod(str, Enum):
    PERCENTILE = 'Percentile'
    HIGH_DENSITY = 'HighDensity'


class Sided(str, Enum):
    TWO = 'two'
    ONE_LOWER = 'one_lower'


class IntervalReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    league: Optional[str] = None
    model: Optional[str] = None
    variable: Optional[IntervalVariable] = None
    method: IntervalMethod
    level: float
    sided: Sided = Sided.TWO
    low: float
    high: float

    @model_validator(mode='after')
    def _ordered(self):
        if self.low > self.high:
            raise ValueError(f"interval low {self.low} exceeds high {self.high}")
        return self


def _samples(samples) -> np.ndarray:
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySamples("interval needs at least one sample")
    return arr


def _check_level(level):
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")


def percentile_interval(samples, level=0.95, sided=Sided.TWO) -> IntervalReport:
    arr = _samples(samples)
    _check_level(level)
    sided = Sided(sided)
    if sided is Sided.TWO:
        tail = (1.0 - level) / 2.0
        low, high = np.quantile(arr, [tail, 1.0 - tail], method='linear')
    else:
        low, high = np.quantile(arr, 1.0 - level, method='linear'), arr.max()
    return IntervalReport(method=IntervalMethod.PERCENTILE, level=level, sided=sided,
                          low=float(low), high=float(high))


def hdi_interval(samples, level=0.95) -> IntervalReport:
    """Shortest window of sorted samples holding ceil(level * n) points"""
    arr = np.sort(_samples(samples))
    _check_level(level)
    n = arr.size
    k = min(max(math.ceil(level * n - 1e-9), 1), n)
    widths = arr[k - 1:] - arr[:n - k + 1]
    i = int(np.argmin(widths))
    return IntervalReport(method=IntervalMethod.HIGH_DENSITY, level=level,
                          low=float(arr[i]), high=float(arr[i + k - 1]))


def summarize_bootstrap(samples, level=DEFAULT_BOOTSTRAP_PARAMS['level'],
                        method=IntervalMethod.PERCENTILE, sided=Sided.TWO,
                        league=None, model=None) -> list[IntervalReport]:
    """One interval per optimum variable; ``samples`` is a bootstrap dump frame"""
    method = IntervalMethod(method)
    if method is IntervalMethod.HIGH_DENSITY and Sided(sided) is not Sided.TWO:
        raise ValueError("high density intervals are two-sided")
    reports = []
    for variable, column in SAMPLE_COLUMN.items():
        values = samples[column].to_numpy()
        if method is IntervalMethod.PERCENTILE:
            interval = percentile_interval(values, level, sided)
        else:
            interval = hdi_interval(values, level)
        reports.append(interval.model_copy(update={'variable': variable, 'league': league,
                                                   'model': model}))
    return reports


class LeagueVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    league: str
    variable: IntervalVariable
    low: float
    high: float
    positive: bool


class BonferroniVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float
    per_test_level: float
    leagues: list[str]
    rejected: dict[str, bool]
    reject: bool
    detail: list[LeagueVerdict]


def bonferroni_report(intervals, alpha=DEFAULT_BOOTSTRAP_PARAMS['alpha'],
                      leagues=None) -> BonferroniVerdict:
    """Joint test of H0: value = 0 against H1: value > 0 across leagues

    H0 is rejected for a variable iff every league's lower bound is > 0. The
    overall verdict is the ROI verdict.
    """
    intervals = list(intervals)
    if not intervals:
        raise MissingLeague("no per-league intervals supplied")
    if any(iv.league is None for iv in intervals):
        raise MissingLeague("every interval must name its league")
    present = sorted({iv.league for iv in intervals})
    expected = sorted(leagues) if leagues else present
    missing = [lg for lg in expected if lg not in present]
    if missing:
        raise MissingLeague(f"no intervals for league(s): {', '.join(missing)}")

    per_test = 1.0 - alpha / len(expected)
    detail = []
    for iv in intervals:
        if iv.variable not in (IntervalVariable.ROI, IntervalVariable.EPSILON):
            continue
        if iv.league not in expected:
            continue
        if not math.isclose(iv.level, per_test, abs_tol=1e-9):
            logger.warning("%s %s interval at level %.4f, Bonferroni level is %.4f",
                           iv.league, iv.variable.value, iv.level, per_test)
        detail.append(LeagueVerdict(league=iv.league, variable=iv.variable,
                                    low=iv.low, high=iv.high, positive=iv.low > 0))

    rejected = {}
    for variable in (IntervalVariable.ROI, IntervalVariable.EPSILON):
        rows = [d for d in detail if d.variable is variable]
        if not rows:
            continue
        covered = {d.league for d in rows}
        if set(expected) - covered:
            raise MissingLeague(f"{variable.value} intervals missing for "
                                f"{', '.join(sorted(set(expected) - covered))}")
        rejected[variable.value] = all(d.positive for d in rows)
    if IntervalVariable.ROI.value not in rejected:
        raise MissingLeague("no ROI intervals supplied")

    verdict = BonferroniVerdict(alpha=alpha, per_test_level=per_test, leagues=expected,
                                rejected=rejected, reject=rejected[IntervalVariable.ROI.value],
                                detail=detail)
    logger.info("Bonferroni over %d leagues: %s", len(expected),
                'reject H0' if verdict.reject else 'fail to reject H0')
    return verdict
