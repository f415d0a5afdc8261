"""
API routes for dataset validation and backtests
"""

from flask import Blueprint, jsonify
from pydantic import ValidationError as PydanticValidationError

from backend.api.uploads import BadRequest, form_value, json_errors, uploaded_dataset
from backend.backtest.engine import run_backtest
from backend.core.models import StrategyParams
from backend.reports import to_jsonable
from backend.winprob.spread_index import build_index
from config.settings import DEFAULT_STRATEGY_PARAMS

backtest_bp = Blueprint('backtest', __name__)


def _truthy(raw):
    return raw.lower() in ('1', 'true', 'yes')


@backtest_bp.route('/api/validate', methods=['POST'])
@json_errors
def validate():
    """Parse an uploaded dataset and summarize it"""
    dataset = uploaded_dataset()
    return jsonify({
        'success': True,
        'games': len(dataset),
        'leagues': dataset.leagues,
        'quotes': sum(len(g.quotes) for g in dataset.games),
    })


@backtest_bp.route('/api/backtest', methods=['POST'])
@json_errors
def backtest():
    """Run the betting rule over an uploaded dataset"""
    dataset = uploaded_dataset()
    try:
        params = StrategyParams(
            epsilon=form_value('epsilon', float, DEFAULT_STRATEGY_PARAMS['epsilon']),
            ev_threshold=form_value('ev_threshold', float, DEFAULT_STRATEGY_PARAMS['ev_threshold']),
            model=form_value('model', str, DEFAULT_STRATEGY_PARAMS['model']),
        )
    except PydanticValidationError as e:
        raise BadRequest(str(e))
    index = build_index(dataset, pooled=form_value('pooled', _truthy, False))
    report = run_backtest(dataset, params, index)
    return jsonify({'success': True, 'report': to_jsonable(report)})
